//! Projection pursuit for two-dimensional projections: eight indexes,
//! geodesic tours between planes, guided-tour optimizers, simulated test
//! families and index diagnostics.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64`.

mod error;
mod hash;
mod linalg;
mod scalar;
pub mod diagnostics;
pub mod index;
pub mod optimizer;
pub mod scag;
pub mod simdata;
pub mod stats;
pub mod tour;

pub use error::{Error, Result};
pub use hash::fingerprint;
pub use scalar::Real;

/// Version of this library, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type Frame64 = tour::Frame<f64>;
pub type DataMatrix64 = tour::DataMatrix<f64>;
pub type ProjectedData64 = tour::ProjectedData<f64>;
pub type Geodesic64 = tour::Geodesic<f64>;
pub type Score64 = index::Score<f64>;
pub type TourHistory64 = optimizer::TourHistory<f64>;
