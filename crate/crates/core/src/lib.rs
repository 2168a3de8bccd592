//! Structured operator tools for the twofold inverse problem of block
//! Toeplitz and Hankel operators built from matrix Laurent polynomials.

// `!(r <= tol)` is deliberate: a NaN residual must count as a failure
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod linalg;
pub mod series;
pub mod structured;
pub mod report;
pub mod inversion;
pub mod solver;
pub mod diagnostics;
pub mod oracle;

pub use error::{Error, Result};
pub use linalg::{CMat, Complex};
pub use series::{LaurentPoly, SubspaceTag};
pub use report::{CheckEntry, CheckReport, Verdict};
pub use inversion::{BigOp, DataSet, MVariant};
pub use solver::{Method, SolveOptions, SolveReport};
