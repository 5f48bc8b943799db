//! Quaternion and octonion scalars, dense containers, and the real
//! representation maps used by the octonion solver and the power method.

mod container;
mod octonion;
mod quaternion;
mod realrep;
mod scalar;

pub use container::{hermitian_adjoint, inner, norm, HyperMatrix, HyperVector};
pub use octonion::{Octonion, OctonionTable, GIMEL_PATTERN, OCTONION_TABLE};
pub use quaternion::Quaternion;
pub use realrep::{aleph, aleph_inv, gimel, gimel_column, gimel_scalar};
pub use scalar::{Hypercomplex, Real, DEFAULT_TOL};

/// `mu x mu^{-1}` for quaternions.
pub fn rotate(x: Quaternion, mu: Quaternion) -> crate::Result<Quaternion> {
    x.rotate(mu)
}
