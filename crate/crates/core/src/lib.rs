//! Numerical verification of analytic estimates for L-functions in the
//! critical strip.
//!
//! The crate evaluates Dirichlet and imaginary-quadratic L-functions, checks
//! their functional equations and conductor bounds, verifies Mellin and
//! Gaussian-probe integral identities, and runs family scans for least
//! nonresidues and genus characters. Family scans run through [`exec`],
//! which is data-parallel with the default `parallel` feature.

pub mod arith;
pub mod dirichlet;
pub mod error;
pub mod exec;
pub mod gaussian;
pub mod mellin;
pub mod quad;
pub mod quadfield;
pub mod specfun;

pub use error::{Error, Result};
pub use exec::Execution;
pub use num_complex::Complex64;
