//! Exact symbolic engine for graded contact and symplectic geometry.
//!
//! Builds the homological contact vector field of a Jacobi structure,
//! decides the Jacobi property through `Q² = 0`, and checks that
//! Poissonization agrees with symplectization followed by the `ξ` change
//! of coordinates.

pub mod cartan;
pub mod check;
pub mod commands;
pub mod corpus;
pub mod error;
pub mod graded;
pub mod io;
pub mod jacobi;
pub mod random;
pub mod selftest;
pub mod structures;
pub mod sympoiss;

pub use cartan::{DifferentialForm, VectorField};
pub use error::{Error, Result};
pub use graded::{Chart, Coordinate, CoordinateKind, CoordinateSpec, Degree, GradedPolynomial};
