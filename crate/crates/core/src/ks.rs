//! Kadison-Schwarz certification.
//!
//! For `x = w·σ` the defect `Δ(x*x) − Δ(x)*Δ(x)` reduces to
//!
//! ```text
//! D(w) = ‖w‖²·1⊗1 − i [w, w̄]·Δ(σ) − (w̄·Δ(σ)) (w·Δ(σ))
//! ```
//!
//! and Δ is KS iff `D(w) ≥ 0` for every unit `w ∈ ℂ³`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::eigen::min_eigenvalue_hermitian;
use crate::epsilon::{detect_epsilon, ks_abcd};
use crate::pauli::BlochVector;
use crate::pauli::{conj3, cross, inner, norm3, CVec3, Mat4, C64, I, ZERO};
use crate::qqo::{beta_matrix, CoeffTensor};
use crate::sampling::{best_k, nelder_mead, Halton};
use crate::tolerance;

pub const DEFAULT_KS_SAMPLES: usize = 50_000;

const REFINE_STARTS: usize = 8;
const REFINE_ITERATIONS: usize = 200;

/// `π(1..4) = (2, 3, 1, 2)`, 0-based.
const PI_PERM: [usize; 4] = [1, 2, 0, 1];

fn combine(v: &CVec3, ds: &[Mat4; 3]) -> Mat4 {
    let mut out = Mat4::zeros();
    for k in 0..3 {
        out.add_scaled(v[k], &ds[k]);
    }
    out
}

fn defect_with(ds: &[Mat4; 3], w: &CVec3) -> Mat4 {
    let wbar = conj3(w);
    let n2 = norm3(w).powi(2);
    let mut d = Mat4::identity().scale_re(n2);
    let bracket = cross(w, &wbar);
    d.add_scaled(-I, &combine(&bracket, ds));
    let d = d - combine(&wbar, ds) * combine(w, ds);
    Mat4::from_fn(|i, j| (d[(i, j)] + d[(j, i)].conj()) * 0.5)
}

/// The defect `D(w)`, hermitian by construction.
pub fn ks_defect(b: &CoeffTensor, w: &CVec3) -> Mat4 {
    defect_with(&b.delta_sigma(), w)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct KsWitness {
    pub w: CVec3,
    pub min_eig: f64,
}

/// Unit `w` modulo phase: `(sin a cos b, sin a sin b e^{iφ₁}, cos a e^{iφ₂})`.
fn unit_w(t: &[f64]) -> CVec3 {
    let (a, b) = (t[0], t[1]);
    [
        C64::new(a.sin() * b.cos(), 0.0),
        C64::from_polar(a.sin() * b.sin(), t[2]),
        C64::from_polar(a.cos(), t[3]),
    ]
}

fn min_eig(ds: &[Mat4; 3], w: &CVec3) -> f64 {
    min_eigenvalue_hermitian(&defect_with(ds, w)).expect("defect is hermitian")
}

/// Searches unit `w` for `λ_min(D(w)) < −tol`; returns the worst witness
/// found or `None` ("no violation found", not a proof of KS).
///
/// Halton samples over the four angles, then Nelder-Mead from the best few.
pub fn ks_global_check(b: &CoeffTensor, samples: usize, seed: u64, tol: f64) -> Option<KsWitness> {
    let ds = b.delta_sigma();
    let scored = Halton::<4>::new(seed).take(samples.max(1)).map(|u| {
        let t = [u[0] * FRAC_PI_2, u[1] * FRAC_PI_2, u[2] * 2.0 * PI, u[3] * 2.0 * PI];
        (min_eig(&ds, &unit_w(&t)), t)
    });
    let starts = best_k(scored, REFINE_STARTS, false);

    let (mut best, mut best_t) = (starts[0].0, starts[0].1.to_vec());
    for (_, t) in &starts {
        let r = nelder_mead(|t| min_eig(&ds, &unit_w(t)), t, 0.05, REFINE_ITERATIONS);
        if r.value < best {
            best = r.value;
            best_t = r.x;
        }
    }
    (best < -tol).then(|| {
        let w = unit_w(&best_t);
        KsWitness { w, min_eig: min_eig(&ds, &w) }
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct KsAuxiliaries {
    pub x: [CVec3; 3],
    pub alpha: [[C64; 3]; 3],
    pub gamma: [[CVec3; 3]; 3],
    pub q: CVec3,
}

/// `x_m = (⟨b_{m1}, w⟩, ⟨b_{m2}, w⟩, ⟨b_{m3}, w⟩)` and the derived
/// `α_{ml} = ⟨x_m, x_l⟩ − ⟨x_l, x_m⟩`, `γ_{ml} = [x_m, x̄_l] + [x̄_m, x_l]`,
/// `q(f, w)_m = ⟨β(f)_m, [w, w̄]⟩`.
pub fn ks_auxiliaries(b: &CoeffTensor, f: &BlochVector, w: &CVec3) -> KsAuxiliaries {
    let x: [CVec3; 3] =
        std::array::from_fn(|m| std::array::from_fn(|l| (0..3).map(|i| w[i].conj() * b.get(m, l, i)).sum()));
    let alpha = std::array::from_fn(|m| std::array::from_fn(|l| inner(&x[m], &x[l]) - inner(&x[l], &x[m])));
    let gamma = std::array::from_fn(|m| {
        std::array::from_fn(|l| {
            let a = cross(&x[m], &conj3(&x[l]));
            let c = cross(&conj3(&x[m]), &x[l]);
            std::array::from_fn(|k| a[k] + c[k])
        })
    });
    let bracket = cross(w, &conj3(w));
    let beta = beta_matrix(b, f).0;
    let q = std::array::from_fn(|m| inner(&beta[m].map(|v| C64::new(v, 0.0)), &bracket));
    KsAuxiliaries { x, alpha, gamma, q }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct KsNecessaryReport {
    pub lhs11: f64,
    pub rhs11: f64,
    pub lhs2: f64,
    pub rhs2: f64,
    /// `(A, B, C, D)`, present when `f = (1, 0, 0)` and `b` is an ε-family member.
    pub abcd: Option<[f64; 4]>,
    pub holds11: bool,
    pub holds2: bool,
}

/// Evaluates both necessary conditions for the KS property at `(f, w)`:
///
/// ```text
/// ‖w‖² ≥ Re(i Σ f_m α_{π(m)π(m+1)}) + Σ ‖x_m‖²
/// ‖q − i Σ (f_m γ_{π(m)π(m+1)} − [x_m, x̄_m])‖ ≤ ‖w‖² − Re(i Σ f_m α_{π(m)π(m+1)}) − Σ ‖x_m‖²
/// ```
pub fn ks_necessary_check(b: &CoeffTensor, f: &BlochVector, w: &CVec3) -> KsNecessaryReport {
    let aux = ks_auxiliaries(b, f, w);
    let fc = f.components();
    let w2 = norm3(w).powi(2);
    let x2: f64 = aux.x.iter().map(|x| norm3(x).powi(2)).sum();

    let mut i_alpha = ZERO;
    let mut sum = [ZERO; 3];
    for m in 0..3 {
        let (p, r) = (PI_PERM[m], PI_PERM[m + 1]);
        i_alpha += I * aux.alpha[p][r] * fc[m];
        let own = cross(&aux.x[m], &conj3(&aux.x[m]));
        for k in 0..3 {
            sum[k] += aux.gamma[p][r][k] * fc[m] - own[k];
        }
    }
    let lhs_vec: CVec3 = std::array::from_fn(|k| aux.q[k] - I * sum[k]);

    let lhs11 = w2;
    let rhs11 = i_alpha.re + x2;
    let lhs2 = norm3(&lhs_vec);
    let rhs2 = w2 - i_alpha.re - x2;

    let abcd = (fc == [1.0, 0.0, 0.0]).then(|| detect_epsilon(b)).flatten().map(|e| ks_abcd(e, w));
    KsNecessaryReport {
        lhs11,
        rhs11,
        lhs2,
        rhs2,
        abcd,
        holds11: rhs11 <= lhs11 + tolerance::KS_NECESSARY,
        holds2: lhs2 <= rhs2 + tolerance::KS_NECESSARY,
    }
}
