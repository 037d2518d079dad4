pub mod algebra;
pub mod bargmann;
pub mod config;
pub mod domain;
pub mod embedding;
pub mod error;
pub mod gauss;
pub mod geodesics;
pub mod geometry;
pub mod group;
pub mod kernels;
pub mod quadrature;
pub mod quantity;
pub mod stencil;
pub mod verify;

pub use domain::{DiskPoint, HermitianMetric2, JacobiPoint, ModelParams, TangentVector};
pub use error::{Error, Result};
