//! The one-parameter family `Δ_ε`.
//!
//! Its coefficient tensor has `b_{11,1} = b_{12,3} = b_{13,2} = b_{22,2} =
//! b_{23,1} = b_{33,3} = ε`, symmetric in the first two indices, zero
//! elsewhere. The family is
//!
//! * completely positive iff `|ε| ≤ 1/(3√3)`,
//! * positive (a q.q.o.) iff `|ε| ≤ 1/3`,
//! * state-space preserving iff `|ε| ≤ 1/√3`.

use serde::Serialize;

use crate::eigen::{eigenvalues_hermitian, min_eigenvalue_hermitian};
use crate::error::{QqoError, Result};
use crate::pauli::{require_real3, sigma_products, CVec3, Mat4, Mat8, PauliCoeffs, C64, I};
use crate::qqo::{choi_from, CoeffTensor};
use crate::sampling::{best_k, fibonacci_sphere, nelder_mead};
use crate::tolerance;

/// `1/(3√3)`
pub const CP_THRESHOLD: f64 = 0.192_450_089_729_875_25;
/// `1/3`
pub const POSITIVITY_THRESHOLD: f64 = 1.0 / 3.0;
/// `1/√3`
pub const INVARIANCE_THRESHOLD: f64 = 0.577_350_269_189_625_8;

/// Which `ω` multiplies `σ_m ⊗ σ_l` in `Δ_ε(x)`: `[m][l] ↦ index into w`.
const OMEGA_INDEX: [[usize; 3]; 3] = [[0, 2, 1], [2, 1, 0], [1, 0, 2]];

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Epsilon(f64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonBand {
    CompletelyPositive,
    Positive,
    StatePreserving,
    Invalid,
}

impl Epsilon {
    pub fn new(e: f64) -> Result<Self> {
        if !e.is_finite() {
            return Err(QqoError::InvalidParameter(format!("epsilon must be finite, got {e}")));
        }
        Ok(Epsilon(e))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn band(self) -> EpsilonBand {
        let a = self.0.abs();
        if a <= CP_THRESHOLD {
            EpsilonBand::CompletelyPositive
        } else if a <= POSITIVITY_THRESHOLD {
            EpsilonBand::Positive
        } else if a <= INVARIANCE_THRESHOLD {
            EpsilonBand::StatePreserving
        } else {
            EpsilonBand::Invalid
        }
    }
}

pub fn build_coeff_tensor(e: Epsilon) -> CoeffTensor {
    let mut b = [[[0.0; 3]; 3]; 3];
    for m in 0..3 {
        for l in 0..3 {
            b[m][l][OMEGA_INDEX[m][l]] = e.0;
        }
    }
    CoeffTensor::new(b).expect("finite epsilon")
}

/// If `b` is exactly a member of the family, its `ε`.
pub fn detect_epsilon(b: &CoeffTensor) -> Option<Epsilon> {
    let e = b.get(0, 0, 0);
    (build_coeff_tensor(Epsilon(e)) == *b).then_some(Epsilon(e))
}

/// Direct expansion of `Δ_ε(x) = w₀·1⊗1 + ε Σ ω_{idx(m,l)} σ_m⊗σ_l`.
pub fn delta_eps_apply(e: Epsilon, x: &PauliCoeffs) -> Mat4 {
    let products = sigma_products();
    let mut out = Mat4::identity().scale(x.w0);
    for m in 0..3 {
        for l in 0..3 {
            out.add_scaled(x.w[OMEGA_INDEX[m][l]] * e.0, &products[m][l]);
        }
    }
    out
}

/// The explicit 4×4 matrix `𝐁(w)` with `Δ_ε(w₀·1 + w·σ) = w₀·1 + ε𝐁(w)`.
pub fn b_matrix(w: &CVec3) -> Result<Mat4> {
    let [w1, w2, w3] = require_real3(w)?.map(|x| C64::new(x, 0.0));
    let two_i = I * 2.0;
    Ok(crate::pauli::CMat([
        [w3, w2 - I * w1, w2 - I * w1, w1 - two_i * w3 - w2],
        [w2 + I * w1, -w3, w1 + w2, -w2 + I * w1],
        [w2 + I * w1, w1 + w2, -w3, -w2 + I * w1],
        [w1 + two_i * w3 - w2, -w2 - I * w1, -w2 - I * w1, w3],
    ]))
}

/// Closed-form spectrum of `𝐁(w)` for real `w`:
/// `λ₁,₂ = t ± 2√(Σωᵢ² − Σ_{i<j} ωᵢωⱼ)`, `λ₃ = λ₄ = −t`, `t = ω₁+ω₂+ω₃`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectrumB {
    pub lambda: [f64; 4],
}

impl SpectrumB {
    pub fn sorted(&self) -> [f64; 4] {
        let mut s = self.lambda;
        s.sort_by(f64::total_cmp);
        s
    }

    pub fn min(&self) -> f64 {
        self.sorted()[0]
    }

    pub fn max(&self) -> f64 {
        self.sorted()[3]
    }
}

fn closed_form(w: &[f64; 3]) -> SpectrumB {
    let [a, b, c] = *w;
    let t = a + b + c;
    let radicand = (a * a + b * b + c * c - a * b - a * c - b * c).max(0.0);
    let root = 2.0 * radicand.sqrt();
    SpectrumB { lambda: [t + root, t - root, -t, -t] }
}

pub fn spectrum_closed_form(w: &CVec3) -> Result<SpectrumB> {
    Ok(closed_form(&require_real3(w)?))
}

/// Numeric spectrum of `𝐁(w)`, ascending; the dense counterpart of
/// [`spectrum_closed_form`].
pub fn spectrum_numeric(w: &CVec3) -> Result<[f64; 4]> {
    eigenvalues_hermitian(&b_matrix(w)?)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PositivityReport {
    pub is_positive: bool,
    pub worst_w: [f64; 3],
    /// `min over sampled w of 1 + ε·λ_k(w)`
    pub margin: f64,
}

fn worst_value(e: f64, w: &[f64; 3]) -> f64 {
    let s = closed_form(w);
    s.lambda.iter().map(|l| 1.0 + e * l).fold(f64::INFINITY, f64::min)
}

fn polar(t: &[f64]) -> [f64; 3] {
    [t[0].sin() * t[1].cos(), t[0].sin() * t[1].sin(), t[0].cos()]
}

/// Minimizes `1 + ε·λ_k(w)` over the unit ball using the closed-form
/// eigenvalues. By homogeneity the minimum sits on the sphere, so sampling
/// uses Fibonacci points followed by a short Nelder-Mead polish.
pub fn positivity_check(e: Epsilon, samples: usize, seed: u64) -> PositivityReport {
    let eps = e.0;
    let scored = fibonacci_sphere(samples.max(1), seed).into_iter().map(|w| (worst_value(eps, &w), w));
    let starts = best_k(scored, 8, false);
    let (mut margin, mut worst_w) = starts[0];
    for (_, w) in starts {
        let theta = [w[2].clamp(-1.0, 1.0).acos(), w[1].atan2(w[0])];
        let r = nelder_mead(|t| worst_value(eps, &polar(t)), &theta, 0.05, 200);
        if r.value < margin {
            margin = r.value;
            worst_w = polar(&r.x);
        }
    }
    // the origin (x = 1) always gives 1
    if 1.0 < margin {
        margin = 1.0;
        worst_w = [0.0; 3];
    }
    PositivityReport { is_positive: margin >= -tolerance::POSITIVITY, worst_w, margin }
}

/// `2Δ̂_ε`, where `Δ̂_ε = [Δ_ε(e_ij)]` is built from [`delta_eps_apply`] on
/// matrix units.
pub fn choi_matrix(e: Epsilon) -> Mat8 {
    choi_from(|x| delta_eps_apply(e, x))
}

/// `𝔹` with `2Δ̂_ε = 1₈ + ε𝔹`, obtained as `2Δ̂_1 − 1₈` (the Choi matrix is
/// affine in ε).
pub fn choi_kernel() -> Mat8 {
    choi_matrix(Epsilon(1.0)) - Mat8::identity()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CpReport {
    pub is_cp: bool,
    /// Smallest eigenvalue of `2Δ̂_ε`.
    pub min_choi_eig: f64,
}

pub fn cp_check(e: Epsilon) -> CpReport {
    let min = min_eigenvalue_hermitian(&choi_matrix(e)).expect("Choi matrix is hermitian");
    CpReport { is_cp: min >= -tolerance::POSITIVITY, min_choi_eig: min }
}

/// `(A, B, C, D)` of the Kadison-Schwarz necessary condition `√(A+B+C) ≤ D`,
/// evaluated at `f = (1, 0, 0)` for `Δ_ε`, written out in closed form.
pub fn ks_abcd(e: Epsilon, w: &CVec3) -> [f64; 4] {
    let eps = e.0;
    let e2 = eps * eps;
    let [w1, w2, w3] = *w;
    let c = |z: C64| z.conj();
    let a = (eps * (c(w2) * w3 - c(w3) * w2)
        - I * e2
            * (2.0 * c(w2) * w3 - 2.0 * w1.norm_sqr() - c(w2) * w1 + c(w1) * w2 - c(w1) * w3 + c(w3) * w1))
        .norm_sqr();
    let b = (eps * (c(w1) * w2 - c(w2) * w1)
        - I * e2
            * (2.0 * c(w1) * w2 - 2.0 * w3.norm_sqr() - c(w1) * w3 + c(w3) * w1 - c(w3) * w2 + c(w2) * w3))
        .norm_sqr();
    let cc = (eps * (c(w3) * w1 - c(w1) * w3)
        - I * e2
            * (2.0 * c(w3) * w1 - 2.0 * w2.norm_sqr() - c(w3) * w2 + c(w2) * w3 - c(w2) * w1 + c(w1) * w2))
        .norm_sqr();
    let d = (1.0 - 3.0 * e2) * (w1.norm_sqr() + w2.norm_sqr() + w3.norm_sqr())
        - I * e2 * (c(w3) * w2 - c(w2) * w3 + c(w2) * w1 - c(w1) * w2 + c(w1) * w3 - c(w3) * w1);
    [a, b, cc, d.re]
}
