use super::mat::Mat;
use super::rat::Rat;
use super::subspace::{solve_affine, AffineSpace};

/// One summand `coef * left * X * right` of a matrix equation; `None`
/// stands for an identity factor.
pub struct Term<'a> {
    pub unknown: usize,
    pub left: Option<&'a Mat>,
    pub right: Option<&'a Mat>,
    pub coef: Rat,
}

impl<'a> Term<'a> {
    pub fn new(unknown: usize, left: Option<&'a Mat>, right: Option<&'a Mat>) -> Term<'a> {
        Term { unknown, left, right, coef: Rat::one() }
    }

    pub fn neg(mut self) -> Term<'a> {
        self.coef = -self.coef;
        self
    }
}

/// Linear system whose unknowns are matrices.
#[derive(Default)]
pub struct MatSystem {
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    total: usize,
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
}

impl MatSystem {
    pub fn new() -> MatSystem {
        MatSystem::default()
    }

    pub fn unknown(&mut self, rows: usize, cols: usize) -> usize {
        self.shapes.push((rows, cols));
        self.offsets.push(self.total);
        self.total += rows * cols;
        self.shapes.len() - 1
    }

    pub fn num_unknowns(&self) -> usize {
        self.total
    }

    /// Adds the equation `sum(terms) = rhs`.
    pub fn equation(&mut self, terms: &[Term<'_>], rhs: &Mat) {
        let (p, q) = rhs.shape();
        for t in terms {
            let (r, c) = self.shapes[t.unknown];
            let lr = t.left.map_or(r, |m| m.rows());
            let rc = t.right.map_or(c, |m| m.cols());
            assert_eq!((lr, rc), (p, q), "term shape does not match right-hand side");
            if let Some(m) = t.left {
                assert_eq!(m.cols(), r);
            }
            if let Some(m) = t.right {
                assert_eq!(m.rows(), c);
            }
        }
        for i in 0..p {
            for j in 0..q {
                let mut row = vec![Rat::zero(); self.total];
                let mut any = false;
                for t in terms {
                    let (r, c) = self.shapes[t.unknown];
                    let off = self.offsets[t.unknown];
                    let lefts: Vec<(usize, Rat)> = match t.left {
                        None => vec![(i, Rat::one())],
                        Some(m) => (0..r).filter(|&k| !m[(i, k)].is_zero()).map(|k| (k, m[(i, k)].clone())).collect(),
                    };
                    if lefts.is_empty() {
                        continue;
                    }
                    let rights: Vec<(usize, Rat)> = match t.right {
                        None => vec![(j, Rat::one())],
                        Some(m) => (0..c).filter(|&l| !m[(l, j)].is_zero()).map(|l| (l, m[(l, j)].clone())).collect(),
                    };
                    for (k, a) in &lefts {
                        let ca = &t.coef * a;
                        for (l, b) in &rights {
                            row[off + k * c + l] += &ca * b;
                            any = true;
                        }
                    }
                }
                let v = rhs[(i, j)].clone();
                if any && row.iter().any(|x| !x.is_zero()) {
                    self.rows.push(row);
                    self.rhs.push(v);
                } else if !v.is_zero() {
                    self.rows.push(row);
                    self.rhs.push(v);
                }
            }
        }
    }

    /// Adds `X_u = value`.
    pub fn fix(&mut self, u: usize, value: &Mat) {
        self.equation(&[Term::new(u, None, None)], value);
    }

    pub fn solve(&self) -> MatSolution {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.resize(self.total, Rat::zero());
                r
            })
            .collect();
        let m = Mat::from_rows(rows, self.total);
        MatSolution {
            space: solve_affine(&m, &self.rhs),
            shapes: self.shapes.clone(),
            offsets: self.offsets.clone(),
        }
    }
}

/// Solution of a [`MatSystem`], with helpers to read unknowns back as matrices.
#[derive(Clone, Debug)]
pub struct MatSolution {
    pub space: AffineSpace,
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
}

impl MatSolution {
    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.space.dim()
    }

    pub fn read(&self, u: usize, v: &[Rat]) -> Mat {
        let (r, c) = self.shapes[u];
        let off = self.offsets[u];
        Mat::from_fn(r, c, |i, j| v[off + i * c + j].clone())
    }

    /// Canonical representative of unknown `u`.
    pub fn particular(&self, u: usize) -> Option<Mat> {
        self.space.particular().map(|p| self.read(u, p))
    }

    /// Direction basis for unknown `u`, one matrix per basis vector.
    pub fn direction(&self, u: usize) -> Vec<Mat> {
        let d = self.space.direction();
        (0..d.dim()).map(|k| self.read(u, d.basis().row(k))).collect()
    }

    /// Whether the given values (one per unknown) solve the system.
    pub fn contains(&self, values: &[&Mat]) -> bool {
        let total: usize = self.shapes.iter().map(|(r, c)| r * c).sum();
        let mut v = vec![Rat::zero(); total];
        for (u, m) in values.iter().enumerate() {
            let (r, c) = self.shapes[u];
            assert_eq!(m.shape(), (r, c));
            for i in 0..r {
                for j in 0..c {
                    v[self.offsets[u] + i * c + j] = m[(i, j)].clone();
                }
            }
        }
        self.space.contains(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commuting_matrices() {
        // X with X J = J X for a Jordan block: polynomials in J.
        let j = Mat::from_i64(&[&[0, 1], &[0, 0]]);
        let mut s = MatSystem::new();
        let x = s.unknown(2, 2);
        s.equation(&[Term::new(x, None, Some(&j)), Term::new(x, Some(&j), None).neg()], &Mat::zeros(2, 2));
        let sol = s.solve();
        assert_eq!(sol.dim(), Some(2));
        assert!(sol.contains(&[&Mat::identity(2)]));
        assert!(sol.contains(&[&j]));
    }
}
