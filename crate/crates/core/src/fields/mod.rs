//! Stationary field models on `Z²`: i.i.d. products and the
//! nearest-neighbor Ising model sampled by heat-bath sweeps.

mod config;
mod model;
mod sampler;

pub use config::*;
pub use model::*;
pub use sampler::*;
