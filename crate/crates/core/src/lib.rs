//! Hypercomplex phase retrieval.
//!
//! Quaternion and octonion algebra, hypercomplex Fourier/STFT/wavelet
//! transforms, intensity-only sensing models, Wirtinger-flow style solvers
//! (QWF, truncated QWF, OWF) and a reproducible Monte-Carlo harness.

// `!(x > 0.0)` is used on purpose so that NaN parameters are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod error;
pub mod harness;
pub mod rng;
pub mod selftest;
pub mod sensing;
pub mod solvers;
pub mod transforms;

pub use algebra::{HyperMatrix, HyperVector, Hypercomplex, Octonion, Quaternion, Real};
pub use error::{HprError, Result};
