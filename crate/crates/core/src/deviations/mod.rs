//! Droplet geometry, the surface-order lower-bound functional, shape
//! optimization under an area constraint, and a small-window check of the
//! Markov property across polygon boundaries.

mod bound;
mod droplet;
mod markov;
mod optimize;

pub use bound::*;
pub use droplet::*;
pub use markov::*;
pub use optimize::*;
