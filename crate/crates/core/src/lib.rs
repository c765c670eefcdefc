//! Numerical range, numerical radius, Crawford number and norm attainment
//! for finite-dimensional operators.

pub mod attainment;
pub mod error;
pub mod gallery;
pub mod hilbert;
pub mod io;
pub mod linalg;
pub mod normed;
pub mod operator;
pub mod oracle;
pub mod sampling;
pub mod space;
pub mod tolerance;

pub use error::{Error, Result};
pub use operator::{Field, Operator, Subspace, UnitVector};
pub use space::{Polygon, SpaceSpec};
pub use tolerance::Tolerances;
