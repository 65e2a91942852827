//! Quadratic dynamics `V(f)_k = Σ b_{ij,k} fᵢ fⱼ` on the Bloch ball, and its
//! ε-specialization
//!
//! ```text
//! V_ε(f) = ε (f₁² + 2f₂f₃, f₂² + 2f₁f₃, f₃² + 2f₁f₂)
//! ```
//!
//! which maps the ball into itself iff `|ε| ≤ 1/√3`, with `ρ(V_ε f) ≤ 3ε² ρ(f)`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::epsilon::{Epsilon, INVARIANCE_THRESHOLD};
use crate::error::{QqoError, Result};
use crate::pauli::BlochVector;
use crate::qqo::{pair_image, CoeffTensor};
use crate::sampling::{best_k, fibonacci_sphere, nelder_mead};
use crate::tolerance;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_STEPS: usize = 10_000;

const SWEEP_STEP: f64 = 0.05;
const NEWTON_STEPS: usize = 50;

pub fn v_apply(b: &CoeffTensor, f: &BlochVector) -> [f64; 3] {
    pair_image(b, &f.components(), &f.components())
}

fn check_domain(e: Epsilon) -> Result<f64> {
    let eps = e.value();
    if eps.abs() > INVARIANCE_THRESHOLD + tolerance::EPSILON_DOMAIN {
        return Err(QqoError::DomainError { epsilon: eps, limit: INVARIANCE_THRESHOLD });
    }
    Ok(eps)
}

fn v_eps(eps: f64, f: &[f64; 3]) -> [f64; 3] {
    let [a, b, c] = *f;
    [eps * (a * a + 2.0 * b * c), eps * (b * b + 2.0 * a * c), eps * (c * c + 2.0 * a * b)]
}

pub fn v_eps_apply(e: Epsilon, f: &BlochVector) -> Result<[f64; 3]> {
    Ok(v_eps(check_domain(e)?, &f.components()))
}

fn norm(v: &[f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    norm(&std::array::from_fn(|i| a[i] - b[i]))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TrajectoryStep {
    pub index: usize,
    pub f: BlochVector,
    pub rho: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub steps: Vec<TrajectoryStep>,
    /// The `‖f‖ < tol` stop fired.
    pub converged: bool,
    pub limit: BlochVector,
}

impl Trajectory {
    /// Rows `step,f1,f2,f3,rho` under a one-line header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,f1,f2,f3,rho\n");
        for s in &self.steps {
            let [a, b, c] = s.f.components();
            writeln!(out, "{},{a:e},{b:e},{c:e},{:e}", s.index, s.rho).expect("write to string");
        }
        out
    }
}

/// Iterates `V_ε` from `f0` until `‖f‖ < tol` (converged), until the orbit is
/// stationary at a nonzero fixed point, or for `max_steps` steps.
pub fn iterate(e: Epsilon, f0: &BlochVector, max_steps: usize, tol: f64) -> Result<Trajectory> {
    let eps = check_domain(e)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(QqoError::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    let mut f = f0.components();
    let mut steps = vec![TrajectoryStep { index: 0, f: *f0, rho: f0.rho() }];
    let mut converged = false;
    for index in 1..=max_steps {
        let n = norm(&f);
        if n < tol {
            converged = true;
            break;
        }
        let next = v_eps(eps, &f);
        if dist(&next, &f) <= tolerance::STATIONARY * n {
            break;
        }
        f = next;
        let fb = BlochVector::unchecked(f);
        steps.push(TrajectoryStep { index, f: fb, rho: fb.rho() });
    }
    if !converged && norm(&f) < tol {
        converged = true;
    }
    Ok(Trajectory { steps, converged, limit: BlochVector::unchecked(f) })
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPointReport {
    pub points: Vec<BlochVector>,
    pub residuals: Vec<f64>,
    /// Roots found by a grid sweep with Newton polish.
    pub sweep_points: Vec<BlochVector>,
    pub sweep_agrees: bool,
}

fn residual(eps: f64, p: &[f64; 3]) -> f64 {
    dist(&v_eps(eps, p), p)
}

fn in_ball(p: &[f64; 3]) -> bool {
    norm(p) <= 1.0 + tolerance::BALL
}

/// Fixed points of `V_ε` inside the ball. Besides the origin the candidates
/// are `c(1,1,1)` and the permutations of `c(−1,−1,2)` with `c = 1/(3ε)`;
/// only those in the ball are kept.
pub fn fixed_points(e: Epsilon) -> Result<FixedPointReport> {
    let eps = check_domain(e)?;
    let mut candidates = vec![[0.0; 3]];
    if eps != 0.0 {
        let c = 1.0 / (3.0 * eps);
        candidates.extend([[c, c, c], [-c, -c, 2.0 * c], [-c, 2.0 * c, -c], [2.0 * c, -c, -c]]);
    }
    let points: Vec<[f64; 3]> = candidates.into_iter().filter(in_ball).collect();
    let residuals = points.iter().map(|p| residual(eps, p)).collect();

    let sweep = sweep_roots(eps);
    let sweep_agrees =
        sweep.len() == points.len() && points.iter().all(|p| sweep.iter().any(|q| dist(p, q) < 1e-8));
    Ok(FixedPointReport {
        points: points.into_iter().map(BlochVector::unchecked).collect(),
        residuals,
        sweep_points: sweep.into_iter().map(BlochVector::unchecked).collect(),
        sweep_agrees,
    })
}

fn solve3(m: [[f64; 3]; 3], r: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&m);
    if d.abs() < 1e-300 {
        return None;
    }
    // Cramer's rule
    Some(std::array::from_fn(|col| {
        let mut mc = m;
        for row in 0..3 {
            mc[row][col] = r[row];
        }
        det(&mc) / d
    }))
}

fn newton(eps: f64, mut f: [f64; 3]) -> Option<[f64; 3]> {
    for _ in 0..NEWTON_STEPS {
        let [a, b, c] = f;
        let v = v_eps(eps, &f);
        let r: [f64; 3] = std::array::from_fn(|i| v[i] - f[i]);
        if norm(&r) <= tolerance::FIXED_POINT {
            return Some(f);
        }
        let t = 2.0 * eps;
        let jac = [[t * a - 1.0, t * c, t * b], [t * c, t * b - 1.0, t * a], [t * b, t * a, t * c - 1.0]];
        let delta = solve3(jac, r)?;
        f = std::array::from_fn(|i| f[i] - delta[i]);
        if !f.iter().all(|x| x.is_finite()) || norm(&f) > 10.0 {
            return None;
        }
    }
    (residual(eps, &f) <= tolerance::FIXED_POINT).then_some(f)
}

fn sweep_roots(eps: f64) -> Vec<[f64; 3]> {
    let n = (2.0 / SWEEP_STEP).round() as i32;
    let mut roots: Vec<[f64; 3]> = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            for k in 0..=n {
                let g = [i, j, k].map(|t| -1.0 + t as f64 * SWEEP_STEP);
                if !in_ball(&g) {
                    continue;
                }
                let Some(root) = newton(eps, g) else { continue };
                if in_ball(&root) && !roots.iter().any(|r| dist(r, &root) < 1e-8) {
                    roots.push(root);
                }
            }
        }
    }
    roots
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BallInvarianceReport {
    pub invariant: bool,
    pub worst_norm: f64,
    pub witness: BlochVector,
}

fn polar(t: &[f64]) -> [f64; 3] {
    [t[0].sin() * t[1].cos(), t[0].sin() * t[1].sin(), t[0].cos()]
}

/// `max ‖V_ε(f)‖` over the ball. The image is homogeneous of degree two, so
/// the max sits on the sphere; accepts any finite ε.
pub fn ball_invariance_check(e: Epsilon, samples: usize, seed: u64) -> BallInvarianceReport {
    let eps = e.value();
    let scored = fibonacci_sphere(samples.max(1), seed).into_iter().map(|f| (norm(&v_eps(eps, &f)), f));
    let starts = best_k(scored, 8, true);
    let (mut worst, mut witness) = starts[0];
    for (_, f) in starts {
        let theta = [f[2].clamp(-1.0, 1.0).acos(), f[1].atan2(f[0])];
        let r = nelder_mead(|t| -norm(&v_eps(eps, &polar(t))), &theta, 0.05, 200);
        if -r.value > worst {
            worst = -r.value;
            witness = polar(&r.x);
        }
    }
    // V(−f) = V(f); report the representative with positive component sum
    if witness.iter().sum::<f64>() < 0.0 {
        witness = witness.map(|x| -x);
    }
    BallInvarianceReport {
        invariant: worst <= 1.0 + tolerance::BALL_INVARIANCE,
        worst_norm: worst,
        witness: BlochVector::unchecked(witness),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epsilon::build_coeff_tensor;

    fn eps(e: f64) -> Epsilon {
        Epsilon::new(e).unwrap()
    }

    fn bv(f: [f64; 3]) -> BlochVector {
        BlochVector::new(f).unwrap()
    }

    const S: f64 = INVARIANCE_THRESHOLD;

    #[test]
    fn v_apply_examples() {
        let e = 0.4;
        let b = build_coeff_tensor(eps(e));
        assert_eq!(v_apply(&b, &BlochVector::ORIGIN), [0.0; 3]);
        assert_eq!(v_apply(&b, &bv([1.0, 0.0, 0.0])), [e, 0.0, 0.0]);
        for x in v_apply(&b, &bv([S, S, S])) {
            assert!((x - e).abs() < 1e-15);
        }
    }

    #[test]
    fn v_eps_examples() {
        let got = v_eps_apply(eps(0.5), &bv([0.6, 0.0, 0.0])).unwrap();
        assert!((got[0] - 0.18).abs() < 1e-15);
        assert_eq!(&got[1..], &[0.0, 0.0]);
        assert_eq!(v_eps_apply(eps(0.3), &BlochVector::ORIGIN).unwrap(), [0.0; 3]);
        let p = v_eps_apply(eps(S), &bv([S, S, S])).unwrap();
        assert!(dist(&p, &[S, S, S]) < 1e-15);
        assert!(matches!(v_eps_apply(eps(0.7), &BlochVector::ORIGIN), Err(QqoError::DomainError { .. })));
    }

    #[test]
    fn iterate_converges() {
        let t = iterate(eps(0.5), &bv([0.6, 0.0, 0.0]), DEFAULT_MAX_STEPS, DEFAULT_TOL).unwrap();
        assert!(t.converged);
        assert!(t.limit.norm() < DEFAULT_TOL);
        for s in &t.steps {
            assert!(s.rho <= 0.75f64.powi(s.index as i32) * 0.36 + 1e-15);
        }
    }

    #[test]
    fn iterate_stationary_at_fixed_point() {
        let t = iterate(eps(S), &bv([S, S, S]), DEFAULT_MAX_STEPS, DEFAULT_TOL).unwrap();
        assert!(!t.converged);
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.limit.components(), [S, S, S]);

        let p = 0.5773502692;
        let t = iterate(eps(p), &bv([p, p, p]), DEFAULT_MAX_STEPS, DEFAULT_TOL).unwrap();
        assert!(!t.converged);
        assert!(dist(&t.limit.components(), &[p, p, p]) < 1e-9);
    }

    #[test]
    fn iterate_critical_unequal_components() {
        let t = iterate(eps(S), &bv([1.0, 0.0, 0.0]), DEFAULT_MAX_STEPS, DEFAULT_TOL).unwrap();
        assert!(t.converged);
    }

    #[test]
    fn iterate_rejects_out_of_domain() {
        assert!(matches!(
            iterate(eps(0.7), &BlochVector::ORIGIN, 10, DEFAULT_TOL),
            Err(QqoError::DomainError { .. })
        ));
    }

    #[test]
    fn csv_layout() {
        let t = iterate(eps(0.5), &bv([0.6, 0.0, 0.0]), 2, DEFAULT_TOL).unwrap();
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "step,f1,f2,f3,rho");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,6e-1,"));
    }

    #[test]
    fn fixed_point_examples() {
        let r = fixed_points(eps(0.5)).unwrap();
        assert_eq!(r.points, vec![BlochVector::ORIGIN]);
        assert!(r.sweep_agrees);

        let r = fixed_points(eps(S)).unwrap();
        assert_eq!(r.points.len(), 2);
        assert!(dist(&r.points[1].components(), &[S, S, S]) < 1e-15);
        assert!(r.residuals[1] <= 1e-14);
        assert!(r.sweep_agrees);

        let r = fixed_points(eps(-S)).unwrap();
        assert!(dist(&r.points[1].components(), &[-S, -S, -S]) < 1e-15);
        assert!(r.sweep_agrees);
    }

    #[test]
    fn excluded_algebraic_point() {
        let e = 0.5;
        let c = 1.0 / (3.0 * e);
        let p = [-c, -c, 2.0 * c];
        assert!(residual(e, &p) < 1e-15);
        assert!((norm(&p).powi(2) - 2.0 / (3.0 * e * e)).abs() < 1e-14);
        assert!(!in_ball(&p));
    }

    #[test]
    fn ball_invariance_examples() {
        let r = ball_invariance_check(eps(S), 20_000, 0);
        assert!(r.invariant);
        assert!((r.worst_norm - 1.0).abs() < 1e-6);

        let r = ball_invariance_check(eps(0.58), 20_000, 0);
        assert!(!r.invariant);
        assert!((r.worst_norm - 0.58 * 3f64.sqrt()).abs() < 1e-6);
        assert!(dist(&r.witness.components(), &[S, S, S]) < 1e-3);

        let r = ball_invariance_check(eps(0.0), 100, 0);
        assert_eq!(r.worst_norm, 0.0);
        assert!(r.invariant);
    }
}
