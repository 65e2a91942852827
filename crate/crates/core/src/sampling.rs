//! Deterministic low-discrepancy samplers and a small Nelder-Mead minimizer
//! used by the sup/inf searches.
//!
//! A seed never changes the point set's structure, only its placement: the
//! Fibonacci sphere is rigidly rotated and Halton points are shifted modulo 1
//! (Cranley-Patterson), both driven by a ChaCha8 stream.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

pub(crate) fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform random rotation matrix (Shoemake's quaternion construction).
pub fn random_rotation(seed: u64) -> [[f64; 3]; 3] {
    let mut rng = rng_for(seed, 1);
    let (u1, u2, u3): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    let (x, y, z, w) = (
        a * (2.0 * PI * u2).sin(),
        a * (2.0 * PI * u2).cos(),
        b * (2.0 * PI * u3).sin(),
        b * (2.0 * PI * u3).cos(),
    );
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - z * w), 2.0 * (x * z + y * w)],
        [2.0 * (x * y + z * w), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - x * w)],
        [2.0 * (x * z - y * w), 2.0 * (y * z + x * w), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

fn apply(r: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    std::array::from_fn(|i| r[i][0] * v[0] + r[i][1] * v[1] + r[i][2] * v[2])
}

/// `n` nearly uniform unit vectors on S², rotated by a seed-derived rotation.
pub fn fibonacci_sphere(n: usize, seed: u64) -> Vec<[f64; 3]> {
    let golden_angle = PI * (3.0 - 5f64.sqrt());
    let rot = random_rotation(seed);
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden_angle * i as f64;
            apply(&rot, [r * phi.cos(), r * phi.sin(), z])
        })
        .collect()
}

/// Van der Corput radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while index > 0 {
        out += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    out
}

/// Shifted Halton sequence in `[0, 1)^D`, `D ≤ 8`.
pub struct Halton<const D: usize> {
    shift: [f64; D],
    next: u64,
}

impl<const D: usize> Halton<D> {
    pub fn new(seed: u64) -> Self {
        assert!(D <= PRIMES.len());
        let mut rng = rng_for(seed, 2);
        Halton { shift: std::array::from_fn(|_| rng.random()), next: 1 }
    }
}

impl<const D: usize> Iterator for Halton<D> {
    type Item = [f64; D];

    fn next(&mut self) -> Option<[f64; D]> {
        let i = self.next;
        self.next += 1;
        Some(std::array::from_fn(|d| (radical_inverse(i, PRIMES[d]) + self.shift[d]).fract()))
    }
}

/// Area-preserving map from the unit square to S².
pub fn square_to_sphere(u: f64, v: f64) -> [f64; 3] {
    let z = 1.0 - 2.0 * u;
    let r = (1.0 - z * z).max(0.0).sqrt();
    let phi = 2.0 * PI * v;
    [r * phi.cos(), r * phi.sin(), z]
}

/// Keep the `k` best candidates under `better(a, b)`; stable with respect to
/// insertion order so that ties resolve to the earliest sample.
pub(crate) fn best_k<T: Clone>(
    items: impl IntoIterator<Item = (f64, T)>,
    k: usize,
    maximize: bool,
) -> Vec<(f64, T)> {
    let mut all: Vec<(f64, T)> = items.into_iter().collect();
    if maximize {
        all.sort_by(|a, b| b.0.total_cmp(&a.0));
    } else {
        all.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    all.truncate(k);
    all
}

#[derive(Clone, Debug)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
}

/// Nelder-Mead minimization with standard coefficients and a fixed
/// iteration budget.
pub fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    start: &[f64],
    step: f64,
    iterations: usize,
) -> NelderMeadResult {
    let n = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), f(start)));
    for i in 0..n {
        let mut p = start.to_vec();
        p[i] += step;
        let v = f(&p);
        simplex.push((p, v));
    }

    for _ in 0..iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let worst = simplex[n].clone();
        let centroid: Vec<f64> =
            (0..n).map(|d| simplex[..n].iter().map(|p| p.0[d]).sum::<f64>() / n as f64).collect();
        let along =
            |t: f64| -> Vec<f64> { (0..n).map(|d| centroid[d] + t * (worst.0[d] - centroid[d])).collect() };

        let reflected = along(-1.0);
        let fr = f(&reflected);
        if fr < simplex[0].1 {
            let expanded = along(-2.0);
            let fe = f(&expanded);
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
            continue;
        }
        let contracted = if fr < worst.1 { along(-0.5) } else { along(0.5) };
        let fc = f(&contracted);
        if fc < worst.1.min(fr) {
            simplex[n] = (contracted, fc);
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let p: Vec<f64> = (0..n).map(|d| best[d] + 0.5 * (vertex.0[d] - best[d])).collect();
            let v = f(&p);
            *vertex = (p, v);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    NelderMeadResult { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_points_are_unit_and_deterministic() {
        let a = fibonacci_sphere(500, 7);
        let b = fibonacci_sphere(500, 7);
        assert_eq!(a, b);
        for p in &a {
            let n: f64 = p.iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
        assert_ne!(a, fibonacci_sphere(500, 8));
    }

    #[test]
    fn fibonacci_covers_sphere() {
        // every direction has a sample within a small angle
        let pts = fibonacci_sphere(20_000, 0);
        for target in [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.577, 0.577, 0.577]] {
            let n = (target.iter().map(|x: &f64| x * x).sum::<f64>()).sqrt();
            let best = pts
                .iter()
                .map(|p| (p[0] * target[0] + p[1] * target[1] + p[2] * target[2]) / n)
                .fold(-1.0, f64::max);
            assert!(best > 1.0 - 1e-3);
        }
    }

    #[test]
    fn rotation_is_orthogonal() {
        let r = random_rotation(3);
        for i in 0..3 {
            for j in 0..3 {
                let d: f64 = (0..3).map(|k| r[k][i] * r[k][j]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((d - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn radical_inverse_base_two() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(2, 2), 0.25);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert_eq!(radical_inverse(5, 3), 2.0 / 3.0 + 1.0 / 9.0);
    }

    #[test]
    fn halton_stays_in_unit_cube() {
        for p in Halton::<4>::new(11).take(1000) {
            assert!(p.iter().all(|&x| (0.0..1.0).contains(&x)));
        }
    }

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let r = nelder_mead(|x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2), &[0.0, 0.0], 0.5, 200);
        assert!((r.x[0] - 1.0).abs() < 1e-6);
        assert!((r.x[1] + 2.0).abs() < 1e-6);
    }
}
