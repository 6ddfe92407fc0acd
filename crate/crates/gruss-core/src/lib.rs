//! Numerical toolkit for Grüss-type trace-functional bounds on finite
//! matrices: numerical-range geometry, distances to scalar operators,
//! variances over states, and the inequality chains connecting them.

pub mod bounds;
pub mod distance;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod matrix;
mod optim;
pub mod tol;
pub mod variance;
pub mod zoo;

pub use error::{Error, Result};
pub use linalg::{DensityOperator, OptimizerSettings};
pub use matrix::ComplexMatrix;

pub use num_complex::Complex64;
