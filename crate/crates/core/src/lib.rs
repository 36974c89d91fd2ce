//! Exact toolkit for subdifferentials of piecewise-polynomial functions,
//! their graphs, and the local dimension of those graphs.
//!
//! The polyhedral and linear-algebra layers are generic over any ordered
//! [`scalar::Field`]; everything that has to produce certificates is
//! instantiated at [`Rational`].

pub mod dimension;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod lp;
pub mod minty;
pub mod param;
pub mod piecewise;
pub mod scalar;
pub mod subdiff;

pub use error::{Error, Result};
pub use geometry::Dim;
pub use scalar::Rational;

pub type QPolyhedron = geometry::HPolyhedron<Rational>;
pub type QCone = geometry::PolyCone<Rational>;
pub type QVector = Vec<Rational>;
