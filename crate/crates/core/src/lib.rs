//! Numerical toolkit for Toeplitz operators on Fock spaces `F^p_alpha`:
//! truncated operator matrices, Berezin transforms, traces, Schatten norms,
//! lattice rank-one approximation and the explicit divergent-pairing
//! construction.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod counterexample;
pub mod error;
pub mod fock;
pub mod measure;
pub mod nuclear;
pub mod numerics;
pub mod toeplitz;

pub use counterexample::CounterexampleParams;
pub use error::{Error, Result};
pub use fock::{EntireFunction, Exponent, FockParams};
pub use measure::{MeasureSymbol, PointMass, Resolution};
pub use nuclear::{Factor, LatticePartition, RankOneRep};
pub use numerics::{LogScalar, PolarGrid};
pub use toeplitz::{HankelMatrix, TruncatedOperator};
