//! Eventual and asymptotic positivity of complex linear operators, with
//! numerical checks of the accompanying Perron-Frobenius spectral results.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classifier;
pub mod error;
pub mod harness;
pub mod lattice;
pub mod matrix;
pub mod operators;
pub mod rates;
pub mod spectral;
pub mod verifier;

pub use error::{Error, Result};
pub use lattice::{LatticeVector, NormKind};
pub use matrix::CMatrix;
pub use operators::OperatorModel;
pub use spectral::Spectrum;
