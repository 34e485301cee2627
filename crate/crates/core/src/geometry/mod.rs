//! Lines, their lattice and contour approximations, polygons and curves.

mod lattice;
mod scalar;
mod shapes;

pub use lattice::*;
pub use scalar::*;
pub use shapes::*;
