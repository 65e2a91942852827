//! Tensor files: either `{"b": [[[b_{11,1}, b_{11,2}, b_{11,3}], ...], ...]}`
//! nested as `m → l → k`, or the shorthand `{"epsilon": e}`.

use std::path::Path;

use serde::Deserialize;

use crate::epsilon::{build_coeff_tensor, Epsilon};
use crate::error::{QqoError, Result};
use crate::qqo::CoeffTensor;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TensorSpec {
    Tensor(CoeffTensor),
    Epsilon(Epsilon),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorFile {
    b: Option<[[[f64; 3]; 3]; 3]>,
    epsilon: Option<f64>,
}

impl TensorSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let file: TensorFile = serde_json::from_str(text)?;
        match (file.b, file.epsilon) {
            (Some(b), None) => Ok(TensorSpec::Tensor(CoeffTensor::new(b)?)),
            (None, Some(e)) => Ok(TensorSpec::Epsilon(Epsilon::new(e)?)),
            _ => Err(QqoError::InvalidTensor("expected exactly one of \"b\" or \"epsilon\"".into())),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn tensor(&self) -> CoeffTensor {
        match self {
            TensorSpec::Tensor(b) => *b,
            TensorSpec::Epsilon(e) => build_coeff_tensor(*e),
        }
    }

    pub fn epsilon(&self) -> Option<Epsilon> {
        match self {
            TensorSpec::Epsilon(e) => Some(*e),
            TensorSpec::Tensor(_) => None,
        }
    }
}
