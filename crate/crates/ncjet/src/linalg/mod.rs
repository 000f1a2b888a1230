//! Exact rational scalars, dense matrices and the subspace toolkit.

mod mat;
mod rat;
mod subspace;
mod system;

pub use mat::{rref_rows, Mat};
pub use rat::{ParseRatError, Rat};
pub use subspace::{image_of, kernel_of, solve_affine, AffineSpace, Subspace};
pub use system::{MatSolution, MatSystem, Term};

use crate::error::{Error, Result};

/// Default cap on any ambient dimension built by the engine.
pub const DEFAULT_MAX_DIM: usize = 4096;

/// Current ambient-dimension cap, read from `NCJET_MAX_DIM` when set.
pub fn max_dim() -> usize {
    std::env::var("NCJET_MAX_DIM")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DIM)
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    let cap = max_dim();
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    Ok(())
}

/// Reduced row-echelon form.
pub fn rref(m: &Mat) -> Mat {
    m.rref()
}

/// Canonical basis of the kernel.
pub fn kernel(m: &Mat) -> Subspace {
    kernel_of(m)
}

/// Intersection of two subspaces of the same ambient space.
pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.intersect(b)
}

/// Projection onto `ambient / sub` and a section of it.
pub fn quotient_data(sub: &Subspace) -> (Mat, Mat) {
    sub.quotient_data()
}

/// Kronecker product (left factor slow).
pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kron(b)
}

/// Kronecker product of two vectors.
pub fn kron_vec(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// Unit vector `e_i` of length `n`.
pub fn unit_vec(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::one();
    v
}

/// A right inverse of a surjective matrix, or `None` if it is not onto.
pub fn right_inverse(m: &Mat) -> Option<Mat> {
    solve_left(&m.transpose(), &Mat::identity(m.rows())).map(|x| x.transpose())
}

/// Some `X` with `X·a = b` (free variables set to zero), or `None` if there is none.
pub fn solve_left(a: &Mat, b: &Mat) -> Option<Mat> {
    assert_eq!(a.cols(), b.cols(), "solve_left: column mismatch");
    let n = a.rows();
    let rows: Vec<Vec<Rat>> = (0..a.cols())
        .map(|j| {
            let mut r = a.col(j);
            r.extend(b.col(j));
            r
        })
        .collect();
    let (red, pivots) = rref_rows(rows, n + b.rows());
    if pivots.iter().any(|&p| p >= n) {
        return None;
    }
    let mut xt = Mat::zeros(n, b.rows());
    for (row, &p) in red.iter().zip(&pivots) {
        for k in 0..b.rows() {
            xt[(p, k)] = row[n + k].clone();
        }
    }
    Some(xt.transpose())
}

/// A left inverse of an injective matrix, or `None` if it is not one-to-one.
pub fn left_inverse(m: &Mat) -> Option<Mat> {
    right_inverse(&m.transpose()).map(|x| x.transpose())
}
