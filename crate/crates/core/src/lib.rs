//! Exact Poisson brackets for q-deformed Virasoro and W-algebras.
//!
//! The crate builds the Heisenberg-Poisson algebra of a classical Cartan type,
//! the generating series `Y_i(z)`, `Lambda_i(z)` and `sigma_i(z)` as products
//! of shifted exponentials, and computes their Poisson brackets as rational
//! kernels plus delta functions. An independent mode-by-mode engine checks the
//! results and handles the `h -> 0` limits.

pub mod cartan;
pub mod cli;
pub mod error;
pub mod genalg;
pub mod kernel;
pub mod modespace;
pub mod qdiff;
pub mod report;
pub mod rmatrix;
pub mod scalar;
pub mod series;
pub mod walg;

pub use error::{Error, Result};
