//! Exact dense linear algebra over `F_p` and `Q`, and the subspace lattice
//! operations (kernel, image, sum, intersection, preimage, quotient) the rest
//! of the crate is built on.

pub(crate) mod field;
pub(crate) mod matrix;
mod subspace;

pub use field::{is_prime, Field, Scalar};
pub use matrix::Matrix;
pub use subspace::Subspace;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("modulus not prime: {0}")]
    NotPrime(u64),
    #[error("mixed scalar variants: expected {expected}, found {found}")]
    MixedScalars { expected: Field, found: Field },
    #[error("operands live over different fields ({0} vs {1})")]
    FieldMismatch(Field, Field),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub fn rank(m: &Matrix) -> usize {
    m.rank()
}

pub fn kernel(m: &Matrix) -> Subspace {
    m.kernel()
}

pub fn sum(a: &Subspace, b: &Subspace) -> Result<Subspace, LinalgError> {
    a.sum(b)
}

pub fn intersection(a: &Subspace, b: &Subspace) -> Result<Subspace, LinalgError> {
    a.intersection(b)
}

pub fn preimage(f: &Matrix, target: &Subspace) -> Result<Subspace, LinalgError> {
    Subspace::preimage(f, target)
}

pub fn quotient(a: &Subspace, b: &Subspace) -> Result<Matrix, LinalgError> {
    a.quotient(b)
}
