use super::mat::{rref_rows, Mat};
use super::rat::Rat;
use crate::error::{Error, Result};

/// Linear subspace of `Q^n` stored by its reduced row-echelon basis.
///
/// Equal subspaces always have identical representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Mat,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Subspace {
        Subspace { ambient, basis: Mat::zeros(0, ambient), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Subspace {
        Subspace { ambient, basis: Mat::identity(ambient), pivots: (0..ambient).collect() }
    }

    /// Span of the given vectors.
    pub fn span(ambient: usize, vectors: Vec<Vec<Rat>>) -> Subspace {
        let (rows, pivots) = rref_rows(vectors, ambient);
        Subspace { ambient, basis: Mat::from_rows(rows, ambient), pivots }
    }

    pub fn row_space(m: &Mat) -> Subspace {
        Subspace::span(m.cols(), m.clone().into_rows())
    }

    pub fn column_space(m: &Mat) -> Subspace {
        Subspace::row_space(&m.transpose())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Rows form the canonical basis.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns are the basis vectors (`ambient x dim`).
    pub fn inclusion(&self) -> Mat {
        self.basis.transpose()
    }

    /// Coordinates of a vector known to lie in the subspace.
    pub fn coords(&self, v: &[Rat]) -> Vec<Rat> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    /// Coordinate matrix for columns known to lie in the subspace.
    pub fn coords_of(&self, m: &Mat) -> Mat {
        m.select_rows(&self.pivots)
    }

    /// The pivot-reading map `ambient -> dim`; a left inverse of `inclusion`.
    pub fn coord_map(&self) -> Mat {
        let mut m = Mat::zeros(self.dim(), self.ambient);
        for (r, &p) in self.pivots.iter().enumerate() {
            m[(r, p)] = Rat::one();
        }
        m
    }

    fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let mut w = v.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (x, b) in w.iter_mut().zip(self.basis.row(r)) {
                if !b.is_zero() {
                    *x -= &f * b;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ambient);
        self.reduce(v).iter().all(Rat::is_zero)
    }

    /// Whether every column of `m` lies in the subspace.
    pub fn contains_cols(&self, m: &Mat) -> bool {
        (0..m.cols()).all(|j| self.contains(&m.col(j)))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        (0..other.dim()).all(|r| self.contains(other.basis.row(r)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        let mut rows = self.basis.clone().into_rows();
        rows.extend(other.basis.clone().into_rows());
        Ok(Subspace::span(self.ambient, rows))
    }

    /// Vectors `c` with `c . b = 0` for every basis vector `b`.
    pub fn annihilator(&self) -> Subspace {
        kernel_of(&self.basis)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        let constraints = Mat::vstack(&[self.annihilator().basis(), other.annihilator().basis()]);
        Ok(kernel_of(&constraints))
    }

    /// Projection onto the quotient `ambient / self` and a section of it.
    ///
    /// Quotient coordinates are the non-pivot coordinates; the section puts
    /// a quotient vector back on those coordinates.
    pub fn quotient_data(&self) -> (Mat, Mat) {
        let n = self.ambient;
        let mut is_pivot = vec![false; n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
        let mut proj = Mat::zeros(free.len(), n);
        let mut sec = Mat::zeros(n, free.len());
        for (fi, &f) in free.iter().enumerate() {
            proj[(fi, f)] = Rat::one();
            sec[(f, fi)] = Rat::one();
            for (r, &p) in self.pivots.iter().enumerate() {
                let b = &self.basis[(r, f)];
                if !b.is_zero() {
                    proj[(fi, p)] = -b;
                }
            }
        }
        (proj, sec)
    }
}

/// Canonical basis of `{v : m v = 0}`.
pub fn kernel_of(m: &Mat) -> Subspace {
    let n = m.cols();
    let (rows, pivots) = rref_rows(m.clone().into_rows(), n);
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut vecs = Vec::new();
    for f in (0..n).filter(|&j| !is_pivot[j]) {
        let mut v = vec![Rat::zero(); n];
        v[f] = Rat::one();
        for (r, &p) in pivots.iter().enumerate() {
            let x = &rows[r][f];
            if !x.is_zero() {
                v[p] = -x;
            }
        }
        vecs.push(v);
    }
    // Basis vectors with a unit at distinct free coordinates; reduce to
    // canonical form.
    Subspace::span(n, vecs)
}

/// Image (column space) of a matrix.
pub fn image_of(m: &Mat) -> Subspace {
    Subspace::column_space(m)
}

/// Solution set of a linear system; empty when inconsistent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSpace {
    particular: Option<Vec<Rat>>,
    direction: Subspace,
}

impl AffineSpace {
    pub fn empty(ambient: usize) -> AffineSpace {
        AffineSpace { particular: None, direction: Subspace::zero(ambient) }
    }

    pub fn is_empty(&self) -> bool {
        self.particular.is_none()
    }

    pub fn particular(&self) -> Option<&[Rat]> {
        self.particular.as_deref()
    }

    pub fn direction(&self) -> &Subspace {
        &self.direction
    }

    /// Dimension of the direction space; `None` if empty.
    pub fn dim(&self) -> Option<usize> {
        self.particular.as_ref().map(|_| self.direction.dim())
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        match &self.particular {
            None => false,
            Some(p) => {
                let d: Vec<Rat> = v.iter().zip(p).map(|(a, b)| a - b).collect();
                self.direction.contains(&d)
            }
        }
    }
}

/// Solves `m x = target`. The particular solution sets every free variable
/// to zero.
pub fn solve_affine(m: &Mat, target: &[Rat]) -> AffineSpace {
    assert_eq!(target.len(), m.rows(), "target length must equal row count");
    let n = m.cols();
    let aug: Vec<Vec<Rat>> = m
        .clone()
        .into_rows()
        .into_iter()
        .zip(target)
        .map(|(mut r, t)| {
            r.push(t.clone());
            r
        })
        .collect();
    let (rows, pivots) = rref_rows(aug, n + 1);
    if pivots.last() == Some(&n) {
        return AffineSpace::empty(n);
    }
    let mut x = vec![Rat::zero(); n];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = rows[r][n].clone();
    }
    let coeff: Vec<Vec<Rat>> = rows.into_iter().map(|mut r| {
        r.pop();
        r
    }).collect();
    AffineSpace { particular: Some(x), direction: kernel_of(&Mat::from_rows(coeff, n)) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_of(&Mat::from_i64(&[&[1, 1], &[1, 1]]));
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[r(1), r(-1)]));
        let inv = Mat::from_i64(&[&[1, 2, 0, 0], &[0, 1, 0, 3], &[1, 0, 1, 0], &[0, 0, 0, 1]]);
        assert_eq!(kernel_of(&inv).dim(), 0);
    }

    #[test]
    fn quotient_examples() {
        let (p, s) = Subspace::zero(3).quotient_data();
        assert_eq!(p, Mat::identity(3));
        assert_eq!(s, Mat::identity(3));
        let (p, _) = Subspace::full(3).quotient_data();
        assert_eq!(p.rows(), 0);
        let line = Subspace::span(3, vec![vec![r(1), r(2), r(3)]]);
        let (p, s) = line.quotient_data();
        assert_eq!(p.rows(), 2);
        assert!(p.mul(&line.inclusion()).is_zero());
        assert_eq!(p.mul(&s), Mat::identity(2));
    }

    #[test]
    fn affine_examples() {
        let t = vec![r(1), r(2)];
        let a = solve_affine(&Mat::identity(2), &t);
        assert_eq!(a.particular().unwrap(), &t[..]);
        assert_eq!(a.dim(), Some(0));
        let z = solve_affine(&Mat::zeros(2, 3), &[r(0), r(0)]);
        assert_eq!(z.dim(), Some(3));
        let bad = solve_affine(&Mat::zeros(1, 1), &[r(1)]);
        assert!(bad.is_empty());
        let m = Mat::from_i64(&[&[1, 0, 1], &[0, 1, 1]]);
        let s = solve_affine(&m, &[r(2), r(3)]);
        assert_eq!(s.dim(), Some(1));
        assert_eq!(m.mul_vec(s.particular().unwrap()), vec![r(2), r(3)]);
    }

    #[test]
    fn intersect_planes() {
        let a = Subspace::span(3, vec![vec![r(1), r(0), r(0)], vec![r(0), r(1), r(0)]]);
        let b = Subspace::span(3, vec![vec![r(0), r(1), r(0)], vec![r(0), r(0), r(1)]]);
        let c = a.intersect(&b).unwrap();
        assert_eq!(c, Subspace::span(3, vec![vec![r(0), r(5), r(0)]]));
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert_eq!(a.intersect(&Subspace::zero(3)).unwrap(), Subspace::zero(3));
        assert!(a.intersect(&Subspace::zero(2)).is_err());
    }
}
