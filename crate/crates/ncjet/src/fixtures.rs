//! Built-in calculi addressable by name.

use crate::algebra::{functions_on_points, matrix_algebra2};
use crate::calculus::{quaternion_calculus, universal_calculus, Calculus};
use crate::error::{Error, Result};

pub const NAMES: [&str; 3] = ["quaternion", "two-point-universal", "matrix2-universal"];

pub fn calculus(name: &str) -> Result<Calculus> {
    match name {
        "quaternion" => quaternion_calculus(3),
        "two-point-universal" => universal_calculus(functions_on_points(2)?, 3, name),
        "matrix2-universal" => universal_calculus(matrix_algebra2(), 3, name),
        _ => Err(Error::Invalid(format!("unknown fixture {name:?}; known: {}", NAMES.join(", ")))),
    }
}

/// Jet order used by default for the named fixture.
pub fn jet_order(name: &str) -> usize {
    match name {
        "matrix2-universal" => 2,
        _ => 3,
    }
}
