//! Quantum quadratic operators with Haar state τ in coefficient-tensor form
//!
//! ```text
//! Δ(w₀·1 + w·σ) = w₀·1⊗1 + Σ_{m,l} (Σ_k b_{ml,k} w_k) σ_m⊗σ_l
//! ```
//!
//! together with the dual action on product states and the state-preservation
//! certificates built on it.

use serde::Serialize;

use crate::eigen::{min_eigenvalue_hermitian, spectral_norm_real3};
use crate::error::{QqoError, Result};
use crate::pauli::{
    matrix_unit, pauli_decompose, sigma_products, BlochVector, Mat2, Mat4, Mat8, PauliCoeffs, C64,
};
use crate::sampling::{self, best_k, fibonacci_sphere, nelder_mead, Halton};
use crate::tolerance;

pub const DEFAULT_SAMPLES: usize = 20_000;
pub const DEFAULT_SEED: u64 = 0;

const REFINE_STARTS: usize = 8;
const ASCENT_STEPS: usize = 200;
const ASCENT_STEP: f64 = 0.1;
const ALTERNATING_STEPS: usize = 100;

type Tensor3 = [[[f64; 3]; 3]; 3];

/// The 27 real coefficients `b_{ml,k}`, stored as `b[m][l][k]` (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoeffTensor {
    b: Tensor3,
}

impl CoeffTensor {
    pub fn new(b: Tensor3) -> Result<Self> {
        if b.iter().flatten().flatten().any(|x| !x.is_finite()) {
            return Err(QqoError::InvalidTensor("entries must be finite".into()));
        }
        Ok(CoeffTensor { b })
    }

    pub fn zero() -> Self {
        CoeffTensor { b: [[[0.0; 3]; 3]; 3] }
    }

    pub fn entries(&self) -> &Tensor3 {
        &self.b
    }

    /// `b_{ml,k}` with 0-based indices.
    pub fn get(&self, m: usize, l: usize, k: usize) -> f64 {
        self.b[m][l][k]
    }

    /// `b_{ml,k} = b_{lm,k}` for all indices.
    pub fn is_symmetric(&self) -> bool {
        (0..3).all(|m| (0..3).all(|l| self.b[m][l] == self.b[l][m]))
    }

    pub fn scaled(&self, c: f64) -> Self {
        CoeffTensor { b: self.b.map(|plane| plane.map(|row| row.map(|x| c * x))) }
    }

    /// `(Δ(σ₁), Δ(σ₂), Δ(σ₃))`.
    pub fn delta_sigma(&self) -> [Mat4; 3] {
        let products = sigma_products();
        std::array::from_fn(|k| {
            let mut out = Mat4::zeros();
            for m in 0..3 {
                for l in 0..3 {
                    let c = self.b[m][l][k];
                    if c != 0.0 {
                        out.add_scaled(C64::new(c, 0.0), &products[m][l]);
                    }
                }
            }
            out
        })
    }
}

/// `Δ(x)` for `x = w₀·1 + w·σ`.
pub fn delta_apply(b: &CoeffTensor, x: &PauliCoeffs) -> Mat4 {
    let products = sigma_products();
    let mut out = Mat4::identity().scale(x.w0);
    for m in 0..3 {
        for l in 0..3 {
            // ⟨b_ml, w̄⟩ = Σᵢ b_{ml,i} wᵢ
            let coeff: C64 = (0..3).map(|i| x.w[i] * b.b[m][l][i]).sum();
            out.add_scaled(coeff, &products[m][l]);
        }
    }
    out
}

/// `β(f)_{ij} = Σ_k b_{ki,j} f_k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BetaMatrix(pub [[f64; 3]; 3]);

impl BetaMatrix {
    pub fn spectral_norm(&self) -> f64 {
        spectral_norm_real3(&self.0).0
    }
}

fn beta_of(b: &CoeffTensor, f: &[f64; 3]) -> BetaMatrix {
    BetaMatrix(std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| b.b[k][i][j] * f[k]).sum())))
}

pub fn beta_matrix(b: &CoeffTensor, f: &BlochVector) -> BetaMatrix {
    beta_of(b, &f.components())
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct NormSup {
    pub value: f64,
    pub maximizer: [f64; 3],
}

fn normalize(v: [f64; 3]) -> Option<[f64; 3]> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (n > 0.0 && n.is_finite()).then(|| v.map(|x| x / n))
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Gradient of `f ↦ ‖β(f)‖` at a point where the top singular value is
/// simple: `∂/∂f_k = uᵀ β(e_k) v`.
fn norm_gradient(b: &CoeffTensor, f: &[f64; 3]) -> Option<(f64, [f64; 3])> {
    let beta = beta_of(b, f);
    let (sigma, v) = spectral_norm_real3(&beta.0);
    if sigma == 0.0 {
        return None;
    }
    let u: [f64; 3] = std::array::from_fn(|i| dot(&beta.0[i], &v) / sigma);
    let grad = std::array::from_fn(|k| {
        let mut e = [0.0; 3];
        e[k] = 1.0;
        let bk = beta_of(b, &e);
        (0..3).map(|i| u[i] * dot(&bk.0[i], &v)).sum()
    });
    Some((sigma, grad))
}

/// Lower-bound estimate of `|‖B‖| = sup_{f∈S} ‖β(f)‖`.
///
/// By homogeneity the sup sits on the unit sphere: Fibonacci samples, then
/// projected gradient ascent from the best few.
pub fn b_norm_sup(b: &CoeffTensor, samples: usize, seed: u64) -> NormSup {
    let points = fibonacci_sphere(samples.max(1), seed);
    let scored = points.iter().map(|f| (beta_of(b, f).spectral_norm(), *f));
    let starts = best_k(scored, REFINE_STARTS, true);

    let mut best = NormSup { value: starts[0].0, maximizer: starts[0].1 };
    for (value, f) in starts {
        let (value, f) = ascend(b, value, f);
        if value > best.value {
            best = NormSup { value, maximizer: f };
        }
    }
    best
}

fn ascend(b: &CoeffTensor, mut value: f64, mut f: [f64; 3]) -> (f64, [f64; 3]) {
    let mut step = ASCENT_STEP;
    for _ in 0..ASCENT_STEPS {
        let Some((_, grad)) = norm_gradient(b, &f) else { break };
        let radial = dot(&grad, &f);
        let tangent: [f64; 3] = std::array::from_fn(|i| grad[i] - radial * f[i]);
        let Some(candidate) = normalize(std::array::from_fn(|i| f[i] + step * tangent[i])) else {
            break;
        };
        let v = beta_of(b, &candidate).spectral_norm();
        if v > value {
            value = v;
            f = candidate;
            step *= 1.5;
        } else {
            step *= 0.5;
            if step < 1e-12 {
                break;
            }
        }
    }
    (value, f)
}

/// Bloch vector of `Δ*(φ_f ⊗ φ_p)`: component `k` is `Σ_{i,j} b_{ij,k} fᵢ pⱼ`.
pub fn dual_pair_apply(b: &CoeffTensor, f: &BlochVector, p: &BlochVector) -> [f64; 3] {
    pair_image(b, &f.components(), &p.components())
}

pub(crate) fn pair_image(b: &CoeffTensor, f: &[f64; 3], p: &[f64; 3]) -> [f64; 3] {
    std::array::from_fn(|k| {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += b.b[i][j][k] * f[i] * p[j];
            }
        }
        s
    })
}

fn norm(v: &[f64; 3]) -> f64 {
    dot(v, v).sqrt()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct StatePreservationReport {
    pub max_norm: f64,
    pub witness_f: [f64; 3],
    pub witness_p: [f64; 3],
    /// `1 − max_norm`; negative when the bound fails.
    pub margin: f64,
    pub passes: bool,
}

/// Samples `(f, p) ∈ S×S` and reports the largest `‖Δ*(φ_f⊗φ_p)‖`; the
/// product states map into the state space iff this stays `≤ 1`.
///
/// The objective is bilinear so it peaks on S²×S². Pairs come from a 4-D
/// Halton sequence; the best few are refined by alternating power steps
/// (each half-step is a power iteration for the other vector).
pub fn state_preservation_check(b: &CoeffTensor, samples: usize, seed: u64) -> StatePreservationReport {
    let pairs = Halton::<4>::new(seed).take(samples.max(1)).map(|u| {
        let f = sampling::square_to_sphere(u[0], u[1]);
        let p = sampling::square_to_sphere(u[2], u[3]);
        (norm(&pair_image(b, &f, &p)), (f, p))
    });
    let starts = best_k(pairs, REFINE_STARTS, true);

    let (mut max_norm, (mut wf, mut wp)) = starts[0];
    for (value, (f, p)) in starts {
        let (value, f, p) = alternate(b, value, f, p);
        if value > max_norm {
            max_norm = value;
            wf = f;
            wp = p;
        }
    }
    StatePreservationReport {
        max_norm,
        witness_f: wf,
        witness_p: wp,
        margin: 1.0 - max_norm,
        passes: max_norm <= 1.0 + tolerance::STATE_PRESERVATION,
    }
}

fn alternate(b: &CoeffTensor, mut value: f64, mut f: [f64; 3], mut p: [f64; 3]) -> (f64, [f64; 3], [f64; 3]) {
    for _ in 0..ALTERNATING_STEPS {
        // p ← normalize(Aᵀ A p) with A_{kj} = Σᵢ b_{ij,k} fᵢ
        let img = pair_image(b, &f, &p);
        let next_p: [f64; 3] = std::array::from_fn(|j| {
            (0..3).map(|k| img[k] * (0..3).map(|i| b.b[i][j][k] * f[i]).sum::<f64>()).sum()
        });
        let Some(np) = normalize(next_p) else { break };
        p = np;
        let img = pair_image(b, &f, &p);
        let next_f: [f64; 3] = std::array::from_fn(|i| {
            (0..3).map(|k| img[k] * (0..3).map(|j| b.b[i][j][k] * p[j]).sum::<f64>()).sum()
        });
        let Some(nf) = normalize(next_f) else { break };
        f = nf;
        let v = norm(&pair_image(b, &f, &p));
        let done = v - value <= 1e-16 * v.max(1.0);
        value = value.max(v);
        if done {
            break;
        }
    }
    (value, f, p)
}

/// Normalized partial traces `((τ⊗id)(m), (id⊗τ)(m))`.
pub fn partial_traces(m: &Mat4) -> (Mat2, Mat2) {
    let left = Mat2::from_fn(|a, c| (m[(a, c)] + m[(2 + a, 2 + c)]) * 0.5);
    let right = Mat2::from_fn(|a, c| (m[(2 * a, 2 * c)] + m[(2 * a + 1, 2 * c + 1)]) * 0.5);
    (left, right)
}

/// Checks `(τ⊗id)Δ(x) = (id⊗τ)Δ(x) = τ(x)·1` on the basis `{1, σ₁, σ₂, σ₃}`.
pub fn haar_unital_check(b: &CoeffTensor) -> bool {
    let basis =
        [PauliCoeffs::identity(), PauliCoeffs::sigma(0), PauliCoeffs::sigma(1), PauliCoeffs::sigma(2)];
    basis.iter().all(|x| {
        let image = delta_apply(b, x);
        let expected = Mat2::identity().scale(x.w0);
        let (left, right) = partial_traces(&image);
        left.max_abs_diff(&expected) <= tolerance::HERMITIAN
            && right.max_abs_diff(&expected) <= tolerance::HERMITIAN
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SampledPositivity {
    pub is_positive: bool,
    pub worst_w: [f64; 3],
    pub min_eig: f64,
}

fn polar(t: &[f64]) -> [f64; 3] {
    [t[0].sin() * t[1].cos(), t[0].sin() * t[1].sin(), t[0].cos()]
}

/// Positivity of a general tensor: `Δ(1 + w·σ) = 1⊗1 + w·Δ(σ) ≥ 0` for all
/// real unit `w` (the extreme rays of the positive cone up to scaling).
pub fn sampled_positivity(b: &CoeffTensor, samples: usize, seed: u64) -> Result<SampledPositivity> {
    let ds = b.delta_sigma();
    let image_min = |w: &[f64; 3]| -> Result<f64> {
        let mut m = Mat4::identity();
        for k in 0..3 {
            m.add_scaled(C64::new(w[k], 0.0), &ds[k]);
        }
        min_eigenvalue_hermitian(&m)
    };
    let mut scored = Vec::with_capacity(samples.max(1));
    for w in fibonacci_sphere(samples.max(1), seed) {
        scored.push((image_min(&w)?, w));
    }
    let starts = best_k(scored, REFINE_STARTS, false);
    let (mut min_eig, mut worst_w) = starts[0];
    for (_, w) in starts {
        let theta = [w[2].clamp(-1.0, 1.0).acos(), w[1].atan2(w[0])];
        let r = nelder_mead(|t| image_min(&polar(t)).unwrap_or(f64::INFINITY), &theta, 0.05, 150);
        if r.value < min_eig {
            min_eig = r.value;
            worst_w = polar(&r.x);
        }
    }
    Ok(SampledPositivity { is_positive: min_eig >= -tolerance::POSITIVITY, worst_w, min_eig })
}

/// `2·[Δ(e_ij)]_{i,j}`, the (doubled) Choi matrix assembled from
/// [`delta_apply`] on matrix units.
pub fn choi_matrix(b: &CoeffTensor) -> Mat8 {
    choi_from(|x| delta_apply(b, x))
}

pub(crate) fn choi_from(delta: impl Fn(&PauliCoeffs) -> Mat4) -> Mat8 {
    let mut out = Mat8::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let block = delta(&pauli_decompose(&matrix_unit(i, j)));
            for r in 0..4 {
                for c in 0..4 {
                    out[(4 * i + r, 4 * j + c)] = block[(r, c)] * 2.0;
                }
            }
        }
    }
    out
}
