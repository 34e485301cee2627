//! Specific entropies and relative entropies along lines, polygons,
//! curves and contours, and Shannon-McMillan convergence ladders.

mod convergence;
mod ensemble;
mod estimate;
mod estimator;
mod past;
mod relative;
mod table;

pub use convergence::*;
pub use ensemble::McSettings;
pub use estimate::*;
pub use estimator::EntropyEstimator;
pub use past::*;
pub use relative::*;
pub use table::{binary_kl, conditional_entropy_of, inverse_triangle_gap, kl_divergence, shannon_entropy, smoothed, ConditionalTable};
