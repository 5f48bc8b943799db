//! Hypercomplex spectral transforms with row access for the sensing models.

mod odft;
mod qdft;
mod qstft;
mod qwt;

pub use odft::{Odft3D, ODFT_UNITS};
pub use qdft::{qdft_1d, Qdft2D, QdftRow};
pub use qstft::{qstft, QstftPlan};
pub use qwt::{qwt, MotherWavelet, QwtBank, WaveletMember};
