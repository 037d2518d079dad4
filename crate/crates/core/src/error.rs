use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point lies outside the guarded disk: |w| = {modulus} >= 1 - {bound}")]
    BoundaryViolation { modulus: f64, bound: f64 },

    #[error("non-finite input component")]
    NonFinite,

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    /// Series and basis operations need `2(k - 1/4)` to be a positive integer.
    #[error("k = {k} is not of the form k' + 1/4 with 2k' a positive integer")]
    InvalidK { k: f64 },

    #[error("finite-difference stencil of step {step} leaves the disk at |w| = {modulus}")]
    BoundaryProximity { step: f64, modulus: f64 },

    #[error("geodesic left the guarded disk at t = {t}")]
    BoundaryEscape { t: f64 },

    #[error("zero disk direction with non-zero z velocity")]
    ZeroDirection,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("path endpoints deviate from the requested points by {deviation}")]
    EndpointMismatch { deviation: f64 },

    #[error("invalid SU(1,1) element: |a|^2 - |b|^2 - 1 = {defect}")]
    InvalidSu11 { defect: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
