//! Quantum quadratic operators `Δ: M₂(ℂ) → M₂(ℂ) ⊗ M₂(ℂ)` in the Pauli
//! coefficient representation: positivity, complete positivity and
//! Kadison-Schwarz certificates, plus the induced dynamics on the Bloch ball.

pub mod dynamics;
pub mod eigen;
pub mod epsilon;
pub mod error;
pub mod io;
pub mod ks;
pub mod pauli;
pub mod qqo;
pub mod sampling;
pub mod tolerance;

pub use epsilon::{Epsilon, EpsilonBand};
pub use error::{QqoError, Result};
pub use io::TensorSpec;
pub use pauli::{BlochVector, CMat, CVec3, Mat2, Mat4, Mat8, PauliCoeffs, C64};
pub use qqo::CoeffTensor;
