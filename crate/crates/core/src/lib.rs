//! Multicomplexes, a filtered-complex spectral-sequence engine and Čech
//! complexes of monomial ideals.
//!
//! Every computation is carried out one multidegree at a time: graded pieces
//! of localizations of `R/J` for a monomial ideal `J` are 0- or
//! 1-dimensional, so all complexes are finite-dimensional per degree and
//! every statement about cohomology reduces to exact ranks of small matrices.

pub mod cech;
pub mod cli;
mod error;
pub mod exactlinalg;
pub mod grading;
pub mod multicomplex;
pub mod mvss;
pub mod spectral;

pub use error::{Error, Result};
