use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{function}: argument {value} outside the domain")]
    Domain { function: &'static str, value: f64 },

    #[error("evaluation overflowed: degree {degree}, |z| = {modulus}")]
    Overflow { degree: usize, modulus: f64 },

    #[error("truncation too small: {0}")]
    Truncation(String),

    #[error("non-finite sample at node ({radial}, {angular}), z = {z}")]
    NonFinite {
        radial: usize,
        angular: usize,
        z: Complex64,
    },

    #[error("quadrature grid too small: {0}")]
    GridTooSmall(String),

    #[error("measure is not integrable: {0}")]
    NonIntegrable(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
