//! Algebras by structure constants, bimodules, and tensor products over A.

use crate::error::{Error, Result};
use crate::linalg::{check_dim, kernel_of, AffineSpace, Mat, MatSystem, Rat, Subspace, Term};

/// Finite-dimensional unital associative algebra over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    names: Vec<String>,
    mult: Vec<Vec<Vec<Rat>>>,
    unit: Vec<Rat>,
    left: Vec<Mat>,
    right: Vec<Mat>,
    gens: Vec<usize>,
}

impl Algebra {
    /// `mult[i][j]` holds the coordinates of `e_i e_j`. Only shapes are
    /// checked here; see [`Algebra::validate`] for the axioms.
    pub fn new(names: Vec<String>, mult: Vec<Vec<Vec<Rat>>>, unit: Vec<Rat>) -> Result<Algebra> {
        let n = names.len();
        if unit.len() != n || mult.len() != n {
            return Err(Error::Invalid(format!("algebra of dimension {n} has malformed unit or table")));
        }
        for (i, row) in mult.iter().enumerate() {
            if row.len() != n || row.iter().any(|v| v.len() != n) {
                return Err(Error::Invalid(format!("multiplication row {i} has the wrong shape")));
            }
        }
        let left = (0..n).map(|i| Mat::from_fn(n, n, |k, j| mult[i][j][k].clone())).collect();
        let right = (0..n).map(|i| Mat::from_fn(n, n, |k, j| mult[j][i][k].clone())).collect();
        let mut a = Algebra { names, mult, unit, left, right, gens: Vec::new() };
        a.gens = a.find_generators();
        Ok(a)
    }

    /// Like [`Algebra::new`] but rejects tables that fail validation.
    pub fn checked(names: Vec<String>, mult: Vec<Vec<Vec<Rat>>>, unit: Vec<Rat>) -> Result<Algebra> {
        let a = Algebra::new(names, mult, unit)?;
        match a.validate().first() {
            Some(f) => Err(Error::Invalid(f.clone())),
            None => Ok(a),
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<Vec<Rat>>] {
        &self.mult
    }

    pub fn unit(&self) -> &[Rat] {
        &self.unit
    }

    pub fn basis(&self, i: usize) -> Vec<Rat> {
        crate::linalg::unit_vec(self.dim(), i)
    }

    /// Left multiplication by `e_i`.
    pub fn left_mat(&self, i: usize) -> &Mat {
        &self.left[i]
    }

    /// Right multiplication by `e_i`.
    pub fn right_mat(&self, i: usize) -> &Mat {
        &self.right[i]
    }

    pub fn left_of(&self, a: &[Rat]) -> Mat {
        combine(&self.left, a, self.dim())
    }

    pub fn right_of(&self, a: &[Rat]) -> Mat {
        combine(&self.right, a, self.dim())
    }

    pub fn mul(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        self.left_of(a).mul_vec(b)
    }

    /// Basis indices generating the algebra, chosen greedily in basis order.
    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    fn find_generators(&self) -> Vec<usize> {
        let n = self.dim();
        let mut gens = Vec::new();
        let mut sub = Subspace::span(n, vec![self.unit.clone()]);
        for i in 0..n {
            if sub.contains(&self.basis(i)) {
                continue;
            }
            gens.push(i);
            let mut vecs = sub.basis().clone().into_rows();
            vecs.push(self.basis(i));
            sub = Subspace::span(n, vecs);
            loop {
                let mut vecs = sub.basis().clone().into_rows();
                for &g in &gens {
                    for r in 0..sub.dim() {
                        vecs.push(self.left[g].mul_vec(sub.basis().row(r)));
                    }
                }
                let next = Subspace::span(n, vecs);
                if next.dim() == sub.dim() {
                    break;
                }
                sub = next;
            }
        }
        gens
    }

    /// Every violated axiom, in a fixed order. Empty means valid.
    pub fn validate(&self) -> Vec<String> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let ab = &self.mult[i][j];
                    let lhs = self.right_of(&self.basis(k)).mul_vec(ab);
                    let rhs = self.left_mat(i).mul_vec(&self.mult[j][k]);
                    if lhs != rhs {
                        out.push(format!(
                            "associativity fails: ({} {}) {} != {} ({} {})",
                            self.names[i], self.names[j], self.names[k], self.names[i], self.names[j], self.names[k]
                        ));
                    }
                }
            }
        }
        for i in 0..n {
            let e = self.basis(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                out.push(format!("unit law fails on {}", self.names[i]));
            }
        }
        out
    }
}

fn combine(mats: &[Mat], a: &[Rat], n: usize) -> Mat {
    let mut out = Mat::zeros(n, n);
    for (m, c) in mats.iter().zip(a) {
        if !c.is_zero() {
            out = out.add(&m.scale(c));
        }
    }
    out
}

/// The product algebra `Q^n` with its idempotent basis.
pub fn functions_on_points(n: usize) -> Result<Algebra> {
    if n == 0 {
        return Err(Error::Invalid("functions on zero points".into()));
    }
    let names = (1..=n).map(|i| format!("e{i}")).collect();
    let mult = (0..n)
        .map(|i| (0..n).map(|j| if i == j { crate::linalg::unit_vec(n, i) } else { vec![Rat::zero(); n] }).collect())
        .collect();
    Algebra::new(names, mult, vec![Rat::one(); n])
}

/// Quaternions over Q with basis `1, i, j, k`.
pub fn quaternion_algebra() -> Algebra {
    // sign and index of e_a e_b
    const T: [[(i64, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    let mult = (0..4)
        .map(|a| {
            (0..4)
                .map(|b| {
                    let (s, c) = T[a][b];
                    let mut v = vec![Rat::zero(); 4];
                    v[c] = Rat::from_int(s);
                    v
                })
                .collect()
        })
        .collect();
    let names = ["1", "i", "j", "k"].iter().map(|s| s.to_string()).collect();
    Algebra::new(names, mult, crate::linalg::unit_vec(4, 0)).expect("quaternion table is well formed")
}

/// 2x2 rational matrices with basis `E11, E12, E21, E22`.
pub fn matrix_algebra2() -> Algebra {
    let idx = |r: usize, c: usize| 2 * r + c;
    let mut mult = vec![vec![vec![Rat::zero(); 4]; 4]; 4];
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    if b == c {
                        mult[idx(a, b)][idx(c, d)][idx(a, d)] = Rat::one();
                    }
                }
            }
        }
    }
    let names = ["E11", "E12", "E21", "E22"].iter().map(|s| s.to_string()).collect();
    let mut unit = vec![Rat::zero(); 4];
    unit[0] = Rat::one();
    unit[3] = Rat::one();
    Algebra::new(names, mult, unit).expect("matrix table is well formed")
}

/// Finite-dimensional module given by action matrices, one per algebra
/// basis element. `right` is `None` for a plain left module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Module {
    pub dim: usize,
    pub left: Vec<Mat>,
    pub right: Option<Vec<Mat>>,
    pub label: String,
}

impl Module {
    pub fn new(label: impl Into<String>, dim: usize, left: Vec<Mat>, right: Option<Vec<Mat>>) -> Module {
        Module { dim, left, right, label: label.into() }
    }

    /// `A` acting on itself from both sides.
    pub fn regular(alg: &Algebra) -> Module {
        let n = alg.dim();
        Module::new(
            "A",
            n,
            (0..n).map(|i| alg.left_mat(i).clone()).collect(),
            Some((0..n).map(|i| alg.right_mat(i).clone()).collect()),
        )
    }

    pub fn zero(alg: &Algebra, label: impl Into<String>) -> Module {
        let n = alg.dim();
        Module::new(label, 0, vec![Mat::zeros(0, 0); n], Some(vec![Mat::zeros(0, 0); n]))
    }

    pub fn is_bimodule(&self) -> bool {
        self.right.is_some()
    }

    pub fn left_of(&self, a: &[Rat]) -> Mat {
        combine(&self.left, a, self.dim)
    }

    pub fn right_of(&self, a: &[Rat]) -> Option<Mat> {
        self.right.as_ref().map(|r| combine(r, a, self.dim))
    }

    /// Forgets the right action.
    pub fn as_left(&self) -> Module {
        Module { right: None, ..self.clone() }
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Module {
        self.label = label.into();
        self
    }

    /// Violated module axioms; empty means valid.
    pub fn validate(&self, alg: &Algebra) -> Vec<String> {
        let n = alg.dim();
        let mut out = Vec::new();
        if self.left.len() != n || self.right.as_ref().is_some_and(|r| r.len() != n) {
            out.push(format!("{}: action count does not match algebra dimension {n}", self.label));
            return out;
        }
        let id = Mat::identity(self.dim);
        if self.left_of(alg.unit()) != id {
            out.push(format!("{}: unit does not act as identity on the left", self.label));
        }
        for i in 0..n {
            for j in 0..n {
                let prod = self.left_of(&alg.table()[i][j]);
                if self.left[i].mul(&self.left[j]) != prod {
                    out.push(format!("{}: left action not multiplicative at ({}, {})", self.label, alg.names()[i], alg.names()[j]));
                }
            }
        }
        if let Some(right) = &self.right {
            if self.right_of(alg.unit()).unwrap() != id {
                out.push(format!("{}: unit does not act as identity on the right", self.label));
            }
            for i in 0..n {
                for j in 0..n {
                    let prod = self.right_of(&alg.table()[i][j]).unwrap();
                    if right[j].mul(&right[i]) != prod {
                        out.push(format!("{}: right action not multiplicative at ({}, {})", self.label, alg.names()[i], alg.names()[j]));
                    }
                    if self.left[i].mul(&right[j]) != right[j].mul(&self.left[i]) {
                        out.push(format!("{}: left and right actions do not commute at ({}, {})", self.label, alg.names()[i], alg.names()[j]));
                    }
                }
            }
        }
        out
    }

    /// Whether `sub` is stable under both actions.
    pub fn is_stable(&self, sub: &Subspace) -> bool {
        let inc = sub.inclusion();
        let acts = self.left.iter().chain(self.right.iter().flatten());
        acts.into_iter().all(|m| sub.contains_cols(&m.mul(&inc)))
    }

    /// The submodule on a stable subspace, in the subspace's pivot coordinates.
    pub fn restrict(&self, sub: &Subspace, label: impl Into<String>) -> Result<Module> {
        if sub.ambient() != self.dim {
            return Err(Error::AmbientMismatch(sub.ambient(), self.dim));
        }
        let label = label.into();
        if !self.is_stable(sub) {
            return Err(Error::Invalid(format!("{label}: subspace is not a submodule of {}", self.label)));
        }
        let inc = sub.inclusion();
        let c = sub.coord_map();
        let conj = |m: &Mat| c.mul(&m.mul(&inc));
        Ok(Module {
            dim: sub.dim(),
            left: self.left.iter().map(conj).collect(),
            right: self.right.as_ref().map(|r| r.iter().map(conj).collect()),
            label,
        })
    }

    /// The quotient by a stable subspace, with its projection and a section.
    pub fn quotient(&self, sub: &Subspace, label: impl Into<String>) -> Result<(Module, Mat, Mat)> {
        let label = label.into();
        if !self.is_stable(sub) {
            return Err(Error::Invalid(format!("{label}: relation space is not a submodule of {}", self.label)));
        }
        let (p, s) = sub.quotient_data();
        let conj = |m: &Mat| p.mul(&m.mul(&s));
        let module = Module {
            dim: p.rows(),
            left: self.left.iter().map(conj).collect(),
            right: self.right.as_ref().map(|r| r.iter().map(conj).collect()),
            label,
        };
        Ok((module, p, s))
    }

    pub fn direct_sum(&self, other: &Module, label: impl Into<String>) -> Module {
        let right = match (&self.right, &other.right) {
            (Some(a), Some(b)) => Some(a.iter().zip(b).map(|(x, y)| Mat::block_diag(&[x, y])).collect()),
            _ => None,
        };
        Module {
            dim: self.dim + other.dim,
            left: self.left.iter().zip(&other.left).map(|(x, y)| Mat::block_diag(&[x, y])).collect(),
            right,
            label: label.into(),
        }
    }
}

/// Smallest subspace containing `generators` that is stable under both actions.
pub fn sub_bimodule(m: &Module, generators: Vec<Vec<Rat>>) -> Subspace {
    let mut sub = Subspace::span(m.dim, generators);
    loop {
        let inc = sub.inclusion();
        let mut vecs = sub.basis().clone().into_rows();
        for act in m.left.iter().chain(m.right.iter().flatten()) {
            let img = act.mul(&inc);
            for c in 0..img.cols() {
                vecs.push(img.col(c));
            }
        }
        let next = Subspace::span(m.dim, vecs);
        if next.dim() == sub.dim() {
            return sub;
        }
        sub = next;
    }
}

/// `M ⊗_A N`: the quotient of the plain tensor space by the balancing
/// relations, with projection `q` from and section `s` into the plain space.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub module: Module,
    pub q: Mat,
    pub s: Mat,
    pub left_dim: usize,
    pub right_dim: usize,
    sel: Option<Vec<usize>>,
}

impl Tensor {
    pub fn dim(&self) -> usize {
        self.module.dim
    }

    pub fn plain_dim(&self) -> usize {
        self.left_dim * self.right_dim
    }

    /// `kron(a, b) * s`, skipping the full Kronecker product where possible.
    pub fn section_kron(&self, a: &Mat, b: &Mat) -> Mat {
        match &self.sel {
            Some(cols) => a.kron_cols(b, cols),
            None => a.kron(b).mul(&self.s),
        }
    }

    /// Descends a map on the plain space to the tensor, failing if it does
    /// not vanish on the relations.
    pub fn descend(&self, plain: &Mat, what: &str) -> Result<Mat> {
        let f = plain.mul(&self.s);
        if f.mul(&self.q) != *plain {
            return Err(Error::IllDefined(what.to_string()));
        }
        Ok(f)
    }

    /// `f ⊗ g` on tensors, from maps into the plain spaces of `self` and
    /// `target`.
    pub fn map_to(&self, target: &Tensor, f: &Mat, g: &Mat) -> Mat {
        target.q.mul(&self.section_kron(f, g))
    }
}

/// Tensor product over the algebra. `m` must carry a right action.
pub fn tensor_over(alg: &Algebra, m: &Module, n: &Module) -> Result<Tensor> {
    let label = format!("{}⊗{}", m.label, n.label);
    let Some(mr) = &m.right else {
        return Err(Error::Invalid(format!("{}: left factor has no right action", label)));
    };
    if mr.len() != alg.dim() || n.left.len() != alg.dim() {
        return Err(Error::AlgebraMismatch);
    }
    let (a, b) = (m.dim, n.dim);
    check_dim(a * b)?;
    if a == 0 || b == 0 {
        let module = Module {
            dim: 0,
            left: vec![Mat::zeros(0, 0); alg.dim()],
            right: n.right.as_ref().map(|_| vec![Mat::zeros(0, 0); alg.dim()]),
            label,
        };
        return Ok(Tensor { module, q: Mat::zeros(0, a * b), s: Mat::zeros(a * b, 0), left_dim: a, right_dim: b, sel: Some(vec![]) });
    }
    let mut rels = Vec::new();
    for &g in alg.generators() {
        let (r, l) = (&mr[g], &n.left[g]);
        for x in 0..a {
            for y in 0..b {
                let mut v = vec![Rat::zero(); a * b];
                for x2 in 0..a {
                    let c = &r[(x2, x)];
                    if !c.is_zero() {
                        v[x2 * b + y] += c;
                    }
                }
                for y2 in 0..b {
                    let c = &l[(y2, y)];
                    if !c.is_zero() {
                        v[x * b + y2] -= c;
                    }
                }
                if v.iter().any(|c| !c.is_zero()) {
                    rels.push(v);
                }
            }
        }
    }
    let rel = Subspace::span(a * b, rels);
    let (q, s) = rel.quotient_data();
    let sel: Vec<usize> = (0..s.cols()).map(|c| (0..s.rows()).find(|&r| !s[(r, c)].is_zero()).unwrap()).collect();
    let id_a = Mat::identity(a);
    let id_b = Mat::identity(b);
    let left = m.left.iter().map(|l| q.mul(&l.kron_cols(&id_b, &sel))).collect();
    let right = n.right.as_ref().map(|rs| rs.iter().map(|r| q.mul(&id_a.kron_cols(r, &sel))).collect());
    let module = Module { dim: q.rows(), left, right, label };
    Ok(Tensor { module, q, s, left_dim: a, right_dim: b, sel: Some(sel) })
}

/// `A ⊗_A N ≅ N`, with the action map as projection and `x ↦ 1 ⊗ x` as section.
pub fn tensor_unit_left(alg: &Algebra, n: &Module) -> Tensor {
    let (a, b) = (alg.dim(), n.dim);
    let mut q = Mat::zeros(b, a * b);
    for i in 0..a {
        q.set_block(0, i * b, &n.left[i]);
    }
    let s = Mat::column_vec(alg.unit()).kron(&Mat::identity(b));
    Tensor { module: n.clone(), q, s, left_dim: a, right_dim: b, sel: None }
}

/// Which actions a linear map is asked to commute with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Linearity {
    K,
    Left,
    Right,
    Bi,
}

impl Linearity {
    fn left(self) -> bool {
        matches!(self, Linearity::Left | Linearity::Bi)
    }

    fn right(self) -> bool {
        matches!(self, Linearity::Right | Linearity::Bi)
    }
}

/// A linear map between modules whose declared linearity has been checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleMap {
    pub matrix: Mat,
    pub source: String,
    pub target: String,
    pub linearity: Linearity,
}

impl BimoduleMap {
    pub fn new(matrix: Mat, src: &Module, tgt: &Module, linearity: Linearity) -> Result<BimoduleMap> {
        if matrix.shape() != (tgt.dim, src.dim) {
            return Err(Error::Invalid(format!("map {} -> {} has shape {:?}", src.label, tgt.label, matrix.shape())));
        }
        if let Some(bad) = linearity_violation(&matrix, src, tgt, linearity) {
            return Err(Error::Invalid(format!("map {} -> {} is not {bad}", src.label, tgt.label)));
        }
        Ok(BimoduleMap { matrix, source: src.label.clone(), target: tgt.label.clone(), linearity })
    }
}

fn linearity_violation(f: &Mat, src: &Module, tgt: &Module, lin: Linearity) -> Option<&'static str> {
    if lin.left() && src.left.iter().zip(&tgt.left).any(|(a, b)| f.mul(a) != b.mul(f)) {
        return Some("left linear");
    }
    if lin.right() {
        match (&src.right, &tgt.right) {
            (Some(sr), Some(tr)) => {
                if sr.iter().zip(tr).any(|(a, b)| f.mul(a) != b.mul(f)) {
                    return Some("right linear");
                }
            }
            _ => return Some("right linear (missing right action)"),
        }
    }
    None
}

pub fn is_left_linear(f: &Mat, src: &Module, tgt: &Module) -> bool {
    linearity_violation(f, src, tgt, Linearity::Left).is_none()
}

pub fn is_bilinear(f: &Mat, src: &Module, tgt: &Module) -> bool {
    linearity_violation(f, src, tgt, Linearity::Bi).is_none()
}

/// Extra linear condition `Σ_t left_t · f · right_t = rhs` on a map `f`.
pub struct MapConstraint {
    pub terms: Vec<(Option<Mat>, Option<Mat>, Rat)>,
    pub rhs: Mat,
}

impl MapConstraint {
    /// `f · at = value`.
    pub fn agree(at: Mat, value: Mat) -> MapConstraint {
        MapConstraint { terms: vec![(None, Some(at), Rat::one())], rhs: value }
    }
}

/// Affine space of matrices `src -> tgt` with the requested linearity and
/// extra constraints, in row-major coordinates.
pub fn solve_maps(src: &Module, tgt: &Module, linearity: Linearity, extra: &[MapConstraint]) -> Result<AffineSpace> {
    let mut sys = MatSystem::new();
    let f = sys.unknown(tgt.dim, src.dim);
    let zero = Mat::zeros(tgt.dim, src.dim);
    if linearity.left() {
        for (a, b) in src.left.iter().zip(&tgt.left) {
            sys.equation(&[Term::new(f, None, Some(a)), Term::new(f, Some(b), None).neg()], &zero);
        }
    }
    if linearity.right() {
        let (Some(sr), Some(tr)) = (&src.right, &tgt.right) else {
            return Err(Error::Invalid("right linearity needs right actions".into()));
        };
        for (a, b) in sr.iter().zip(tr) {
            sys.equation(&[Term::new(f, None, Some(a)), Term::new(f, Some(b), None).neg()], &zero);
        }
    }
    for c in extra {
        let terms: Vec<Term<'_>> = c
            .terms
            .iter()
            .map(|(l, r, k)| Term { unknown: f, left: l.as_ref(), right: r.as_ref(), coef: k.clone() })
            .collect();
        sys.equation(&terms, &c.rhs);
    }
    Ok(sys.solve().space)
}

/// Reads a point of [`solve_maps`]'s solution space back as a matrix.
pub fn map_from_coords(rows: usize, cols: usize, v: &[Rat]) -> Mat {
    Mat::from_fn(rows, cols, |i, j| v[i * cols + j].clone())
}

/// Kernel of the multiplication map `A ⊗ A -> A`.
pub fn mult_kernel(alg: &Algebra) -> Subspace {
    kernel_of(&mult_map(alg))
}

/// `a ⊗ b ↦ ab` on the plain tensor square.
pub fn mult_map(alg: &Algebra) -> Mat {
    let n = alg.dim();
    Mat::from_fn(n, n * n, |k, c| alg.table()[c / n][c % n][k].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn quaternion_relations() {
        let h = quaternion_algebra();
        assert!(h.validate().is_empty());
        assert_eq!(h.mul(&h.basis(1), &h.basis(2)), h.basis(3));
        assert_eq!(h.mul(&h.basis(3), &h.basis(3)), vec![r(-1), r(0), r(0), r(0)]);
        assert_eq!(h.mul(&h.basis(3), &h.basis(1)), h.basis(2));
        assert_eq!(h.generators(), &[1, 2]);
    }

    #[test]
    fn perturbed_table_is_rejected() {
        let h = quaternion_algebra();
        let mut t = h.table().to_vec();
        t[1][2][3] = r(2);
        let bad = Algebra::new(h.names().to_vec(), t, h.unit().to_vec()).unwrap();
        let report = bad.validate();
        assert!(report.iter().any(|s| s.contains("associativity")));
    }

    #[test]
    fn points_and_matrices() {
        let p = functions_on_points(2).unwrap();
        assert!(p.validate().is_empty());
        assert_eq!(p.mul(&p.basis(0), &p.basis(1)), vec![r(0), r(0)]);
        assert_eq!(p.unit(), &[r(1), r(1)]);
        assert!(functions_on_points(0).is_err());
        assert!(functions_on_points(1).unwrap().validate().is_empty());
        let m = matrix_algebra2();
        assert!(m.validate().is_empty());
        assert_eq!(m.generators(), &[0, 1, 2]);
    }

    #[test]
    fn unit_tensor_is_identity() {
        let h = quaternion_algebra();
        let a = Module::regular(&h);
        let t = tensor_over(&h, &a, &a).unwrap();
        assert_eq!(t.dim(), 4);
        let u = tensor_unit_left(&h, &a);
        assert_eq!(u.q.mul(&u.s), Mat::identity(4));
        let z = tensor_over(&h, &a, &Module::zero(&h, "0")).unwrap();
        assert_eq!(z.dim(), 0);
    }

    #[test]
    fn left_linear_self_maps_are_right_multiplications() {
        let h = quaternion_algebra();
        let a = Module::regular(&h).as_left();
        let sol = solve_maps(&a, &a, Linearity::Left, &[]).unwrap();
        assert_eq!(sol.dim(), Some(4));
        let bad = MapConstraint::agree(Mat::identity(4), Mat::zeros(4, 4));
        let also = MapConstraint::agree(Mat::identity(4), Mat::identity(4));
        assert!(solve_maps(&a, &a, Linearity::Left, &[bad, also]).unwrap().is_empty());
    }
}
