//! Graded-commutative polynomial algebra over a single chart.

pub mod chart;
pub mod poly;

pub use chart::{differential_name, make_chart, Chart, Coordinate, CoordinateKind, CoordinateSpec};
pub use poly::{integer, rational, Coefficient, Degree, GradedPolynomial, Monomial};
