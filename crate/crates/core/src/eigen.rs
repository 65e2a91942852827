//! Cyclic Jacobi eigensolver for small dense hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classical real Jacobi rotation to the resulting
//! real symmetric 2×2 block.

use crate::error::{QqoError, Result};
use crate::pauli::{CMat, C64};
use crate::tolerance;

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_RELATIVE: f64 = 1e-14;

/// Eigenvalues in ascending order; `vectors` holds the matching
/// eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen<const N: usize> {
    pub values: [f64; N],
    pub vectors: CMat<N>,
    pub sweeps: usize,
}

impl<const N: usize> HermitianEigen<N> {
    /// `Σ λᵢ vᵢ vᵢ*`
    pub fn reconstruct(&self) -> CMat<N> {
        CMat::from_fn(|r, c| {
            (0..N).map(|k| self.vectors[(r, k)] * self.vectors[(c, k)].conj() * self.values[k]).sum()
        })
    }
}

fn off_diagonal_norm<const N: usize>(a: &CMat<N>) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        for j in 0..N {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Full eigendecomposition of a hermitian matrix.
///
/// Fails with `NonHermitianInput` when `m` deviates from `m*` by more than
/// [`tolerance::HERMITIAN`] in any entry.
pub fn hermitian_eigen<const N: usize>(m: &CMat<N>) -> Result<HermitianEigen<N>> {
    let asymmetry = m.hermitian_defect();
    if asymmetry.is_nan() || asymmetry > tolerance::HERMITIAN {
        return Err(QqoError::NonHermitianInput { asymmetry });
    }
    // exact hermitian part
    let mut a = CMat::from_fn(|i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut v = CMat::<N>::identity();

    // Frobenius norm bounds the spectral radius from above.
    let scale = a.frobenius_norm();
    let threshold = OFF_DIAGONAL_RELATIVE * scale;
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && off_diagonal_norm(&a) > threshold {
        sweeps += 1;
        for p in 0..N {
            for q in (p + 1)..N {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.map(|i| a[(i, i)].re);
    let vectors = CMat::from_fn(|r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors, sweeps })
}

fn rotate<const N: usize>(a: &mut CMat<N>, v: &mut CMat<N>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // e^{-iφ} with a_pq = r e^{iφ}
    let phase = apq.conj() / r;

    let theta = (aqq - app) / (2.0 * r);
    let t =
        if theta.is_infinite() { 0.0 } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // U restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
    let upp = C64::new(c, 0.0);
    let upq = C64::new(s, 0.0);
    let uqp = phase * (-s);
    let uqq = phase * c;

    // A ← A U
    for k in 0..N {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * upp + akq * uqp;
        a[(k, q)] = akp * upq + akq * uqq;
    }
    // A ← U* A
    for k in 0..N {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
        a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    // V ← V U
    for k in 0..N {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * upp + vkq * uqp;
        v[(k, q)] = vkp * upq + vkq * uqq;
    }
}

pub fn eigenvalues_hermitian<const N: usize>(m: &CMat<N>) -> Result<[f64; N]> {
    Ok(hermitian_eigen(m)?.values)
}

pub fn min_eigenvalue_hermitian<const N: usize>(m: &CMat<N>) -> Result<f64> {
    Ok(hermitian_eigen(m)?.values[0])
}

pub fn max_eigenvalue_hermitian<const N: usize>(m: &CMat<N>) -> Result<f64> {
    Ok(hermitian_eigen(m)?.values[N - 1])
}

/// Spectral norm of a real 3×3 matrix, `sqrt(λ_max(AᵀA))`, together with the
/// top right singular vector.
pub fn spectral_norm_real3(a: &[[f64; 3]; 3]) -> (f64, [f64; 3]) {
    let ata = CMat::<3>::from_fn(|i, j| C64::new((0..3).map(|k| a[k][i] * a[k][j]).sum(), 0.0));
    let eig = hermitian_eigen(&ata).expect("AᵀA is symmetric by construction");
    let top = eig.values[2].max(0.0);
    // eigenvectors of a real symmetric matrix may carry a global phase
    let col: [C64; 3] = std::array::from_fn(|r| eig.vectors[(r, 2)]);
    let pivot = col.iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap();
    let phase = if pivot.norm() > 0.0 { pivot.conj() / pivot.norm() } else { C64::new(1.0, 0.0) };
    let v = col.map(|z| (z * phase).re);
    (top.sqrt(), v)
}
