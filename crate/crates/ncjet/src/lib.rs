//! Exact computational engine for noncommutative differential geometry over
//! finite-dimensional algebras: jets, Spencer operators, connections,
//! higher-order connections, quantization maps and star products.

pub mod algebra;
pub mod calculus;
pub mod connections;
pub mod demo;
pub mod error;
pub mod fixtures;
pub mod jets;
pub mod linalg;
pub mod quant;
pub mod spencer;

pub use error::{Error, Result};
pub use linalg::{Mat, Rat, Subspace};
