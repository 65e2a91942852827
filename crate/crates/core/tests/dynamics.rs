mod common;

use common::{random_ball, random_sphere, rng};
use qqo::dynamics::{fixed_points, iterate, v_apply, v_eps_apply, DEFAULT_TOL};
use qqo::epsilon::{build_coeff_tensor, INVARIANCE_THRESHOLD};
use qqo::qqo::dual_pair_apply;
use qqo::{BlochVector, Epsilon};
use rand::Rng;

fn rho(v: &[f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

#[test]
fn lyapunov_contraction() {
    let mut r = rng(10);
    for _ in 0..100_000 {
        let e = r.random_range(-INVARIANCE_THRESHOLD..=INVARIANCE_THRESHOLD);
        let f = BlochVector::new(random_ball(&mut r)).unwrap();
        let image = v_eps_apply(Epsilon::new(e).unwrap(), &f).unwrap();
        assert!(rho(&image) <= 3.0 * e * e * f.rho() + 1e-12);
    }
}

#[test]
fn v_apply_is_diagonal_pairing() {
    let mut r = rng(11);
    for _ in 0..1000 {
        let b = common::random_tensor(&mut r, 1.0);
        let f = BlochVector::new(random_ball(&mut r)).unwrap();
        assert_eq!(v_apply(&b, &f), dual_pair_apply(&b, &f, &f));
    }
}

#[test]
fn v_eps_agrees_with_tensor_path() {
    let mut r = rng(12);
    for _ in 0..1000 {
        let e = Epsilon::new(r.random_range(-0.57..0.57)).unwrap();
        let f = BlochVector::new(random_ball(&mut r)).unwrap();
        let a = v_eps_apply(e, &f).unwrap();
        let b = v_apply(&build_coeff_tensor(e), &f);
        for k in 0..3 {
            assert!((a[k] - b[k]).abs() <= 1e-15);
        }
    }
}

#[test]
fn trajectories_monotone_and_enveloped() {
    let mut r = rng(13);
    for _ in 0..200 {
        let e = r.random_range(-0.57..0.57);
        let f0 = BlochVector::new(random_ball(&mut r)).unwrap();
        let t = iterate(Epsilon::new(e).unwrap(), &f0, 10_000, DEFAULT_TOL).unwrap();
        assert!(t.converged);
        let k = 3.0 * e * e;
        for pair in t.steps.windows(2) {
            assert!(pair[1].rho <= pair[0].rho);
        }
        for s in &t.steps {
            assert!((s.rho - rho(&s.f.components())).abs() <= 1e-14);
            assert!(s.rho <= k.powi(s.index as i32) * f0.rho() * (1.0 + 1e-12));
        }
    }
}

#[test]
fn sphere_shrinks_at_critical_epsilon() {
    let e = Epsilon::new(INVARIANCE_THRESHOLD).unwrap();
    let mut r = rng(14);
    let mut n = 0;
    while n < 10_000 {
        let f = random_sphere(&mut r);
        let spread = (f[0] - f[1]).abs().max((f[1] - f[2]).abs());
        if spread < 1e-3 {
            continue;
        }
        let image = v_eps_apply(e, &BlochVector::new(f).unwrap()).unwrap();
        assert!(rho(&image).sqrt() <= 1.0 - 1e-12);
        n += 1;
    }
}

#[test]
fn fixed_point_residuals_and_sweep() {
    for e in [-INVARIANCE_THRESHOLD, -0.4, -0.1, 0.0, 0.2, 0.5, INVARIANCE_THRESHOLD] {
        let rep = fixed_points(Epsilon::new(e).unwrap()).unwrap();
        assert_eq!(rep.points[0], BlochVector::ORIGIN);
        assert!(rep.residuals.iter().all(|&x| x <= 1e-12));
        assert!(rep.sweep_agrees, "ε = {e}: {:?}", rep.sweep_points);
    }
}
