mod common;

use common::{
    direct_defect, product_state_eval, random_ball, random_complex3, random_tensor, random_unit_complex3, rng,
};
use proptest::prelude::*;
use qqo::eigen::min_eigenvalue_hermitian;
use qqo::epsilon::{build_coeff_tensor, CP_THRESHOLD};
use qqo::ks::{ks_auxiliaries, ks_defect, ks_global_check, ks_necessary_check};
use qqo::pauli::{conj3, cross, inner, state_eval};
use qqo::qqo::{b_norm_sup, beta_matrix, delta_apply, dual_pair_apply, state_preservation_check};
use qqo::{BlochVector, Epsilon, PauliCoeffs, C64};

#[test]
fn defect_two_paths() {
    let mut r = rng(1);
    for _ in 0..1000 {
        let b = random_tensor(&mut r, 1.0);
        let w = random_complex3(&mut r);
        let d = ks_defect(&b, &w);
        assert!(d.max_abs_diff(&direct_defect(&b, &w)) <= 1e-12);
        assert!(d.hermitian_defect() <= 1e-13);
    }
}

#[test]
fn duality_pairing() {
    let mut r = rng(2);
    for _ in 0..1000 {
        let b = random_tensor(&mut r, 1.0);
        let (f, p) = (random_ball(&mut r), random_ball(&mut r));
        let x = PauliCoeffs::new(C64::new(0.3, -0.2), random_complex3(&mut r));
        let lhs = product_state_eval(&f, &p, &delta_apply(&b, &x));
        let image = BlochVector::unchecked(dual_pair_apply(
            &b,
            &BlochVector::new(f).unwrap(),
            &BlochVector::new(p).unwrap(),
        ));
        assert!((lhs - state_eval(&image, &x)).norm() <= 1e-12);
    }
}

#[test]
fn norm_sup_cross_validates_state_preservation() {
    let mut r = rng(3);
    for _ in 0..20 {
        let b = random_tensor(&mut r, 0.5);
        let sup = b_norm_sup(&b, 4000, 0).value;
        let pairs = state_preservation_check(&b, 4000, 0).max_norm;
        assert!((sup - pairs).abs() <= 1e-6 * sup.max(1.0), "{sup} vs {pairs}");
    }
}

#[test]
fn ks_witness_contrapositive_at_one_third() {
    let b = build_coeff_tensor(Epsilon::new(1.0 / 3.0).unwrap());
    let f = BlochVector::new([1.0, 0.0, 0.0]).unwrap();
    let w = [C64::new(-1.0 / 9.0, 0.0), C64::new(5.0 / 36.0, 0.0), C64::new(0.0, 5.0 / 27.0)];
    assert!(!ks_necessary_check(&b, &f, &w).holds2);
    assert!(ks_global_check(&b, 5000, 0, 1e-8).is_some());
}

#[test]
fn necessity_on_ks_tensors() {
    let mut r = rng(4);
    let mut checked = 0;
    for _ in 0..30 {
        let b = random_tensor(&mut r, 0.15);
        if ks_global_check(&b, 3000, 0, 1e-10).is_some() {
            continue;
        }
        for _ in 0..50 {
            let f = BlochVector::new(random_ball(&mut r)).unwrap();
            let w = random_complex3(&mut r);
            let rep = ks_necessary_check(&b, &f, &w);
            assert!(rep.holds11 && rep.holds2, "{rep:?}");
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn cp_threshold_defect_psd() {
    let b = build_coeff_tensor(Epsilon::new(CP_THRESHOLD).unwrap());
    let mut r = rng(5);
    for _ in 0..200 {
        let w = random_unit_complex3(&mut r);
        assert!(min_eigenvalue_hermitian(&ks_defect(&b, &w)).unwrap() >= -1e-9);
    }
}

proptest! {
    #[test]
    fn defect_phase_invariant(seed in any::<u64>(), theta in 0.0..6.3f64) {
        let mut r = rng(seed);
        let b = random_tensor(&mut r, 1.0);
        let w = random_complex3(&mut r);
        let rotated = w.map(|z| z * C64::from_polar(1.0, theta));
        prop_assert!(ks_defect(&b, &rotated).max_abs_diff(&ks_defect(&b, &w)) <= 1e-13);
    }

    #[test]
    fn defect_scales_quadratically(seed in any::<u64>(), re in -2.0..2.0f64, im in -2.0..2.0f64) {
        let mut r = rng(seed);
        let b = random_tensor(&mut r, 1.0);
        let w = random_complex3(&mut r);
        let s = C64::new(re, im);
        let scaled = ks_defect(&b, &w.map(|z| z * s));
        prop_assert!(scaled.max_abs_diff(&ks_defect(&b, &w).scale_re(s.norm_sqr())) <= 1e-12);
    }

    #[test]
    fn q_recomputed(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = random_tensor(&mut r, 1.0);
        let f = BlochVector::new(random_ball(&mut r)).unwrap();
        let w = random_complex3(&mut r);
        let aux = ks_auxiliaries(&b, &f, &w);
        let bracket = cross(&w, &conj3(&w));
        let beta = beta_matrix(&b, &f).0;
        for m in 0..3 {
            let q: C64 = (0..3).map(|j| bracket[j].conj() * beta[m][j]).sum();
            prop_assert!((q - aux.q[m]).norm() <= 1e-13);
        }
        for m in 0..3 {
            for l in 0..3 {
                let a = inner(&aux.x[m], &aux.x[l]) - inner(&aux.x[l], &aux.x[m]);
                prop_assert!((a - aux.alpha[m][l]).norm() <= 1e-15);
                prop_assert!((a + a.conj()).norm() <= 1e-14);
            }
        }
    }

    #[test]
    fn beta_is_linear(seed in any::<u64>(), s in -1.0..1.0f64) {
        let mut r = rng(seed);
        let b = random_tensor(&mut r, 1.0);
        let f = random_ball(&mut r);
        let lhs = beta_matrix(&b, &BlochVector::new(f.map(|x| s * x)).unwrap()).0;
        let rhs = beta_matrix(&b, &BlochVector::new(f).unwrap()).0;
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!((lhs[i][j] - s * rhs[i][j]).abs() <= 1e-15);
            }
        }
    }
}
