//! Surface entropy of random fields on `Z²`: lattice approximations of
//! lines and curves, Monte Carlo conditional entropies along lines, and
//! large-deviation bounds for the Ising model.

pub mod deviations;
pub mod entropy;
pub mod error;
pub mod fields;
pub mod geometry;

pub use error::{Error, Result};
