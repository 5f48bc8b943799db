use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{CodedFourier, DenseModel, SensingModel, SensingRow, StftModel, WaveletModel};
use crate::algebra::Quaternion;
use crate::error::{HprError, Result};

/// Which family of sensing operator to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    /// Real Gaussian entries acting on quaternion signals.
    GaussianReal,
    GaussianQuaternion,
    GaussianOctonion,
    CodedFourier,
    Stft,
    Wavelet,
}

impl ModelKind {
    pub const ALL: [ModelKind; 6] = [
        ModelKind::GaussianReal,
        ModelKind::GaussianQuaternion,
        ModelKind::GaussianOctonion,
        ModelKind::CodedFourier,
        ModelKind::Stft,
        ModelKind::Wavelet,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::GaussianReal => "gaussian-r",
            ModelKind::GaussianQuaternion => "gaussian-q",
            ModelKind::GaussianOctonion => "gaussian-o",
            ModelKind::CodedFourier => "coded-fourier",
            ModelKind::Stft => "stft",
            ModelKind::Wavelet => "wavelet",
        }
    }

    pub fn is_octonion(&self) -> bool {
        matches!(self, ModelKind::GaussianOctonion)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = HprError;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| HprError::InvalidParameter(format!("unknown model '{s}'")))
    }
}

/// Any of the quaternion sensing models behind one type.
#[derive(Debug, Clone)]
pub enum QuaternionModel {
    Dense(DenseModel<Quaternion>),
    CodedFourier(CodedFourier),
    Stft(StftModel),
    Wavelet(WaveletModel),
}

macro_rules! dispatch {
    ($self:expr, $m:ident => $body:expr) => {
        match $self {
            QuaternionModel::Dense($m) => $body,
            QuaternionModel::CodedFourier($m) => $body,
            QuaternionModel::Stft($m) => $body,
            QuaternionModel::Wavelet($m) => $body,
        }
    };
}

impl SensingModel for QuaternionModel {
    type Scalar = Quaternion;

    fn m(&self) -> usize {
        dispatch!(self, m => m.m())
    }

    fn n(&self) -> usize {
        dispatch!(self, m => m.n())
    }

    fn forward(&self, x: &[Quaternion]) -> Result<Vec<Quaternion>> {
        dispatch!(self, m => m.forward(x))
    }

    fn adjoint(&self, u: &[Quaternion]) -> Result<Vec<Quaternion>> {
        dispatch!(self, m => m.adjoint(u))
    }

    fn row(&self, l: usize) -> Result<SensingRow<Quaternion>> {
        dispatch!(self, m => m.row(l))
    }
}
