#![allow(dead_code)]

use qqo::pauli::{pauli_compose, pauli_decompose, sigma, tensor_product};
use qqo::qqo::delta_apply;
use qqo::{CVec3, CoeffTensor, Mat2, Mat4, Mat8, PauliCoeffs, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_tensor(rng: &mut impl Rng, scale: f64) -> CoeffTensor {
    let b = std::array::from_fn(|_| {
        std::array::from_fn(|_| std::array::from_fn(|_| scale * rng.random_range(-1.0..1.0)))
    });
    CoeffTensor::new(b).unwrap()
}

pub fn random_complex3(rng: &mut impl Rng) -> CVec3 {
    std::array::from_fn(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

pub fn random_unit_complex3(rng: &mut impl Rng) -> CVec3 {
    let w = random_complex3(rng);
    let n = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    w.map(|z| z / n)
}

/// Uniform point in the closed unit ball by rejection.
pub fn random_ball(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return v;
        }
    }
}

pub fn random_sphere(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v = random_ball(rng);
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 {
            return v.map(|x| x / n);
        }
    }
}

/// `Δ(x*x) − Δ(x)*Δ(x)` for `x = w·σ`, evaluated with explicit 2×2 products
/// and a fresh Pauli decomposition.
pub fn direct_defect(b: &CoeffTensor, w: &CVec3) -> Mat4 {
    let x: Mat2 = pauli_compose(&PauliCoeffs::new(c(0.0, 0.0), *w));
    let xx = x.adjoint() * x;
    let dx = delta_apply(b, &PauliCoeffs::new(c(0.0, 0.0), *w));
    delta_apply(b, &pauli_decompose(&xx)) - dx.adjoint() * dx
}

/// `Δ_ε(x)` straight from the coefficient table, written independently of
/// the library: `Δ_ε(σ₁) = ε(σ₁σ₁ + σ₂σ₃ + σ₃σ₂)` and cyclic.
pub fn table_delta_eps(e: f64, x: &PauliCoeffs) -> Mat4 {
    let k = |a: usize, b: usize| tensor_product(&sigma(a), &sigma(b));
    let images = [k(0, 0) + k(1, 2) + k(2, 1), k(0, 2) + k(1, 1) + k(2, 0), k(0, 1) + k(1, 0) + k(2, 2)];
    let mut out = Mat4::identity().scale(x.w0);
    for i in 0..3 {
        out.add_scaled(x.w[i] * e, &images[i]);
    }
    out
}

/// Literal 8×8 matrix `𝔹` with `2Δ̂_ε = 1 + ε𝔹`.
pub fn literal_choi_kernel() -> Mat8 {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    let i2 = c(0.0, 2.0);
    let m = -o;
    let pi = c(1.0, 1.0);
    let mi = c(1.0, -1.0);
    qqo::pauli::CMat([
        [o, z, z, -i2, z, z, z, mi],
        [z, m, z, z, i2, z, pi, z],
        [z, z, m, z, i2, pi, z, z],
        [i2, z, z, o, mi, -i2, -i2, z],
        [z, -i2, -i2, pi, m, z, z, i2],
        [z, z, mi, i2, z, o, z, z],
        [z, mi, z, i2, z, z, o, z],
        [pi, z, z, z, -i2, z, z, m],
    ])
}

/// `Σ_{ml} c_{ml} f_m p_l + w₀` computed as `tr((ρ_f ⊗ ρ_p) Δ(x))`.
pub fn product_state_eval(f: &[f64; 3], p: &[f64; 3], m: &Mat4) -> C64 {
    let rho = |v: &[f64; 3]| pauli_compose(&PauliCoeffs::real(0.5, v.map(|x| 0.5 * x)));
    (&tensor_product(&rho(f), &rho(p)) * m).trace()
}
