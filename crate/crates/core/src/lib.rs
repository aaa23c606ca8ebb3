//! Generalized binomial distributions built from a strictly increasing sequence
//! `x_0 = 0 < x_1 = 1 < x_2 < ...`, their deformation polynomials, Poisson-like limits,
//! the q-calculus special case and the inverse construction from root sequences.
//!
//! All computations are generic over [`Scalar`]; [`Exact`] rationals are the default.

pub mod analytic;
pub mod distribution;
pub mod error;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod polynomials;
pub mod qcalc;
pub mod reconstruction;
pub mod roots;
pub mod scalar;
pub mod sequences;

pub use error::{Error, Result};
pub use poly::Poly;
pub use scalar::{Approx, Exact, Mode, Scalar};
pub use sequences::{Family, GenSequence};
