//! Pauli-basis representation of `M₂(ℂ)` and the small dense complex
//! matrices built from it.
//!
//! Indices are stored 0-based: `w[0]` is the coefficient of σ₁, `w[1]` of σ₂
//! and `w[2]` of σ₃. The same +1 offset applies to every 3-index object in
//! the crate.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{QqoError, Result};
use crate::tolerance;

pub type C64 = Complex64;

/// A complex 3-vector, e.g. the `w` part of `w₀·1 + w·σ`.
pub type CVec3 = [C64; 3];

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense row-major `N×N` complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat<const N: usize>(pub [[C64; N]; N]);

pub type Mat2 = CMat<2>;
pub type Mat4 = CMat<4>;
pub type Mat8 = CMat<8>;

impl<const N: usize> CMat<N> {
    pub fn zeros() -> Self {
        CMat([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(|i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    /// `self += s · other`
    pub fn add_scaled(&mut self, s: C64, other: &Self) {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] += s * other.0[i][j];
            }
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..N {
            for j in 0..N {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Largest entrywise `|m_ij − conj(m_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..N {
            for j in i..N {
                d = d.max((self.0[i][j] - self.0[j][i].conj()).norm());
            }
        }
        d
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl<const N: usize> Index<(usize, usize)> for CMat<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMat<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for CMat<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl<const N: usize> Sub for CMat<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl<const N: usize> Neg for CMat<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.0[i][j])
    }
}

impl<const N: usize> Mul for CMat<N> {
    type Output = Self;
    #[allow(clippy::op_ref)]
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<const N: usize> Mul for &CMat<N> {
    type Output = CMat<N>;
    fn mul(self, rhs: Self) -> CMat<N> {
        let mut out = CMat::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

impl<const N: usize> Mul<C64> for CMat<N> {
    type Output = Self;
    fn mul(self, s: C64) -> Self {
        self.scale(s)
    }
}

/// Serialized as a list of rows, each entry a `[re, im]` pair.
impl<const N: usize> Serialize for CMat<N> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(N))?;
        for row in &self.0 {
            let pairs: Vec<[f64; 2]> = row.iter().map(|z| [z.re, z.im]).collect();
            seq.serialize_element(&pairs)?;
        }
        seq.end()
    }
}

/// Kronecker product `a ⊗ b`, block row-major: entry `(2i+k, 2j+l) = a_ij b_kl`.
pub fn tensor_product(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|r, c| a.0[r / 2][c / 2] * b.0[r % 2][c % 2])
}

/// σ₁, σ₂, σ₃ for `k = 0, 1, 2`.
pub fn sigma(k: usize) -> Mat2 {
    match k {
        0 => CMat([[ZERO, ONE], [ONE, ZERO]]),
        1 => CMat([[ZERO, -I], [I, ZERO]]),
        2 => CMat([[ONE, ZERO], [ZERO, -ONE]]),
        _ => panic!("Pauli index {k} out of range 0..3"),
    }
}

/// σ_m ⊗ σ_l for all `m, l`, indexed `[m][l]`.
pub fn sigma_products() -> [[Mat4; 3]; 3] {
    std::array::from_fn(|m| std::array::from_fn(|l| tensor_product(&sigma(m), &sigma(l))))
}

/// Matrix unit `e_ij` (0-based).
pub fn matrix_unit(i: usize, j: usize) -> Mat2 {
    let mut m = Mat2::zeros();
    m.0[i][j] = ONE;
    m
}

/// `[u, v]`: the bilinear cross product on ℂ³ (no conjugation).
pub fn cross(u: &CVec3, v: &CVec3) -> CVec3 {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

/// `⟨u, v⟩ = Σ uᵢ v̄ᵢ`, conjugate-linear in the second slot.
pub fn inner(u: &CVec3, v: &CVec3) -> C64 {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

pub fn conj3(u: &CVec3) -> CVec3 {
    u.map(|z| z.conj())
}

pub fn norm3(u: &CVec3) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn real3(v: [f64; 3]) -> CVec3 {
    v.map(|x| C64::new(x, 0.0))
}

/// Real parts of `w`, or `NonRealInput` if any imaginary part exceeds the
/// hermiticity tolerance.
pub fn require_real3(w: &CVec3) -> Result<[f64; 3]> {
    let max_imag = w.iter().fold(0.0f64, |acc, z| acc.max(z.im.abs()));
    if max_imag > tolerance::HERMITIAN {
        return Err(QqoError::NonRealInput { max_imag });
    }
    Ok(w.map(|z| z.re))
}

/// Coefficients of `x = w₀·1 + w₁σ₁ + w₂σ₂ + w₃σ₃`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliCoeffs {
    pub w0: C64,
    pub w: CVec3,
}

impl PauliCoeffs {
    pub fn new(w0: C64, w: CVec3) -> Self {
        PauliCoeffs { w0, w }
    }

    pub fn real(w0: f64, w: [f64; 3]) -> Self {
        PauliCoeffs { w0: C64::new(w0, 0.0), w: real3(w) }
    }

    pub fn identity() -> Self {
        Self::real(1.0, [0.0; 3])
    }

    pub fn sigma(k: usize) -> Self {
        let mut w = [0.0; 3];
        w[k] = 1.0;
        Self::real(0.0, w)
    }

    /// True when the represented matrix is self-adjoint, i.e. all
    /// coefficients are real.
    pub fn is_hermitian(&self) -> bool {
        self.w0.im.abs() <= tolerance::HERMITIAN && self.w.iter().all(|z| z.im.abs() <= tolerance::HERMITIAN)
    }

    pub fn adjoint(&self) -> Self {
        PauliCoeffs { w0: self.w0.conj(), w: conj3(&self.w) }
    }

    pub fn compose(&self) -> Mat2 {
        pauli_compose(self)
    }
}

/// `w₀·1 + w·σ` as a 2×2 matrix.
pub fn pauli_compose(c: &PauliCoeffs) -> Mat2 {
    let [w1, w2, w3] = c.w;
    CMat([[c.w0 + w3, w1 - I * w2], [w1 + I * w2, c.w0 - w3]])
}

/// Inverse of [`pauli_compose`]: `w₀ = ½ tr m`, `wᵢ = ½ tr(σᵢ m)`.
pub fn pauli_decompose(m: &Mat2) -> PauliCoeffs {
    let [[a, b], [c, d]] = m.0;
    PauliCoeffs { w0: (a + d) * 0.5, w: [(b + c) * 0.5, (b - c) * I * 0.5, (a - d) * 0.5] }
}

/// Positivity of a self-adjoint `w₀·1 + w·σ` via `‖w‖ ≤ w₀`.
pub fn positivity_2x2(c: &PauliCoeffs) -> Result<bool> {
    if !c.is_hermitian() {
        let max_imag = std::iter::once(c.w0).chain(c.w).fold(0.0f64, |acc, z| acc.max(z.im.abs()));
        return Err(QqoError::NonRealInput { max_imag });
    }
    Ok(norm3(&c.w) <= c.w0.re + tolerance::PAULI_POSITIVITY)
}

/// A state on `M₂(ℂ)` given by its Bloch vector `f`, `‖f‖ ≤ 1`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct BlochVector([f64; 3]);

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector([0.0; 3]);

    pub fn new(f: [f64; 3]) -> Result<Self> {
        if f.iter().any(|x| !x.is_finite()) {
            return Err(QqoError::InvalidParameter(format!("non-finite Bloch vector {f:?}")));
        }
        let norm = f.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1.0 + tolerance::BALL {
            return Err(QqoError::OutsideBall { norm });
        }
        Ok(BlochVector(f))
    }

    /// Skips the ball check; for images of maps that may leave `S`.
    pub fn unchecked(f: [f64; 3]) -> Self {
        BlochVector(f)
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.rho().sqrt()
    }

    /// `ρ(f) = ‖f‖²`.
    pub fn rho(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }
}

/// `φ_f(w₀·1 + w·σ) = w₀ + Σ wᵢ fᵢ`.
pub fn state_eval(f: &BlochVector, c: &PauliCoeffs) -> C64 {
    c.w0 + c.w.iter().zip(f.0).map(|(w, x)| w * x).sum::<C64>()
}

/// Density matrix `½(1 + f·σ)` of the state `φ_f`, so that
/// `φ_f(x) = tr(ρ x)`.
pub fn density_matrix(f: &BlochVector) -> Mat2 {
    pauli_compose(&PauliCoeffs::real(0.5, f.0.map(|x| 0.5 * x)))
}
