//! First-order calculi, their maximal exterior tower, and forms with values
//! in a module.

use std::sync::{Arc, OnceLock};

use crate::algebra::{mult_map, sub_bimodule, tensor_over, tensor_unit_left, Algebra, Module, Tensor};
use crate::error::{Error, Result};
use crate::linalg::{kernel_of, right_inverse, unit_vec, Mat, Rat, Subspace};

struct Level {
    /// `Ω^{n-1} ⊗_A Ω^1`
    tensor: Tensor,
    /// Projection from `tensor` onto `Ω^n` and its section.
    p: Mat,
    s: Mat,
}

/// A first-order calculus `(Ω^1, d)` together with its maximal prolongation
/// up to `max_degree`.
pub struct Calculus {
    alg: Algebra,
    omega: Vec<Module>,
    levels: Vec<Option<Level>>,
    d: Vec<Mat>,
    relations: Subspace,
    mu_sec: Mat,
    k2: Subspace,
    frame: Option<Vec<Vec<Rat>>>,
    pairs: Vec<Vec<OnceLock<Result<Arc<Tensor>>>>>,
    wplain: Vec<Vec<OnceLock<Result<Arc<Mat>>>>>,
    max_degree: usize,
    name: String,
}

impl std::fmt::Debug for Calculus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Calculus")
            .field("name", &self.name)
            .field("dims", &self.omega.iter().map(|m| m.dim).collect::<Vec<_>>())
            .finish()
    }
}

/// Violations of the first-order calculus axioms; empty means valid.
pub fn validate_fodc(alg: &Algebra, omega1: &Module, d0: &Mat) -> Vec<String> {
    let mut out = omega1.validate(alg);
    if !omega1.is_bimodule() {
        out.push("Ω1 has no right action".into());
    }
    if !out.is_empty() {
        return out;
    }
    let n = alg.dim();
    if d0.shape() != (omega1.dim, n) {
        out.push(format!("d has shape {:?}, expected {:?}", d0.shape(), (omega1.dim, n)));
        return out;
    }
    if d0.mul_vec(alg.unit()).iter().any(|x| !x.is_zero()) {
        out.push("d(1) != 0".into());
    }
    let right = omega1.right.as_ref().unwrap();
    for i in 0..n {
        for j in 0..n {
            let lhs = d0.mul_vec(&alg.table()[i][j]);
            let a = right[j].mul_vec(&d0.col(i));
            let b = omega1.left[i].mul_vec(&d0.col(j));
            let rhs: Vec<Rat> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            if lhs != rhs {
                out.push(format!("Leibniz rule fails at ({}, {})", alg.names()[i], alg.names()[j]));
            }
        }
    }
    if mu(alg, omega1, d0).rank() != omega1.dim {
        out.push("Ω1 is not spanned by a·db".into());
    }
    out
}

/// `a ⊗ b ↦ a·db` on the plain tensor square.
fn mu(alg: &Algebra, omega1: &Module, d0: &Mat) -> Mat {
    let n = alg.dim();
    let mut m = Mat::zeros(omega1.dim, n * n);
    for a in 0..n {
        m.set_block(0, a * n, &omega1.left[a].mul(d0));
    }
    m
}

impl Calculus {
    /// Builds the maximal prolongation of `(omega1, d0)` up to `max_degree`.
    pub fn build(alg: Algebra, omega1: Module, d0: Mat, max_degree: usize, name: impl Into<String>) -> Result<Calculus> {
        if let Some(f) = validate_fodc(&alg, &omega1, &d0).into_iter().next() {
            return Err(Error::Invalid(f));
        }
        let omega1 = omega1.relabel("Ω1");
        let m = mu(&alg, &omega1, &d0);
        let relations = kernel_of(&m);
        let mu_sec = right_inverse(&m).expect("surjectivity was validated");
        let cap = max_degree.max(1);
        let mut calc = Calculus {
            omega: vec![Module::regular(&alg).relabel("Ω0"), omega1],
            alg,
            levels: vec![None, None],
            d: vec![d0],
            relations,
            mu_sec,
            k2: Subspace::zero(0),
            frame: None,
            pairs: (0..=cap).map(|_| (0..=cap).map(|_| OnceLock::new()).collect()).collect(),
            wplain: (0..=cap).map(|_| (0..=cap).map(|_| OnceLock::new()).collect()).collect(),
            max_degree: cap,
            name: name.into(),
        };
        if cap >= 2 {
            calc.build_degree2()?;
        }
        for n in 3..=cap {
            calc.build_degree(n)?;
        }
        for n in 2..cap {
            calc.build_d(n)?;
        }
        Ok(calc)
    }

    fn build_degree2(&mut self) -> Result<()> {
        let w1 = &self.omega[1];
        let t2 = tensor_over(&self.alg, w1, w1)?;
        let d0 = &self.d[0];
        let dd = t2.q.mul(&d0.kron(d0));
        let gens = dd.mul(&self.relations.inclusion());
        let gens = (0..gens.cols()).map(|c| gens.col(c)).collect();
        let k2 = sub_bimodule(&t2.module, gens);
        let (m2, p, s) = t2.module.quotient(&k2, "Ω2")?;
        let w11 = p.mul(&t2.q);
        let d1 = w11.mul(&d0.kron(d0)).mul(&self.mu_sec);
        let m = mu(&self.alg, w1, d0);
        if d1.mul(&m) != w11.mul(&d0.kron(d0)) {
            return Err(Error::IllDefined("d on Ω1".into()));
        }
        self.omega.push(m2);
        self.levels.push(Some(Level { tensor: t2, p, s }));
        self.d.push(d1);
        self.k2 = k2;
        Ok(())
    }

    fn build_degree(&mut self, n: usize) -> Result<()> {
        let tn = tensor_over(&self.alg, &self.omega[n - 1], &self.omega[1])?;
        let t2 = &self.levels[2].as_ref().unwrap().tensor;
        let w = self.wedge_plain_raw(n - 2, 1);
        let lift_k2 = t2.s.mul(&self.k2.inclusion());
        let inner = Mat::identity(self.omega[n - 2].dim).kron(&lift_k2);
        let gens = tn.q.mul(&w.kron(&Mat::identity(self.omega[1].dim))).mul(&inner);
        let gens = (0..gens.cols()).map(|c| gens.col(c)).collect();
        let kn = sub_bimodule(&tn.module, gens);
        let (mn, p, s) = tn.module.quotient(&kn, format!("Ω{n}"))?;
        self.omega.push(mn);
        self.levels.push(Some(Level { tensor: tn, p, s }));
        Ok(())
    }

    fn build_d(&mut self, n: usize) -> Result<()> {
        let lv = self.levels[n].as_ref().unwrap();
        let id1 = Mat::identity(self.omega[1].dim);
        let a = self.wedge_plain_raw(n, 1).mul(&self.d[n - 1].kron(&id1));
        let b = self.wedge_plain_raw(n - 1, 2).mul(&Mat::identity(self.omega[n - 1].dim).kron(&self.d[1]));
        let big = if n % 2 == 0 { a.sub(&b) } else { a.add(&b) };
        let dn = big.mul(&lv.tensor.s).mul(&lv.s);
        if dn.mul(&lv.p).mul(&lv.tensor.q) != big {
            return Err(Error::IllDefined(format!("d on Ω{n}")));
        }
        self.d.push(dn);
        Ok(())
    }

    /// Uncached wedge on the plain tensor space, used during construction.
    fn wedge_plain_raw(&self, p: usize, q: usize) -> Mat {
        let dp = self.omega[p].dim;
        if q == 0 {
            let n = self.alg.dim();
            let right = self.omega[p].right.as_ref().unwrap();
            let mut m = Mat::zeros(dp, dp * n);
            for x in 0..dp {
                for a in 0..n {
                    let c = right[a].col(x);
                    for (r, v) in c.into_iter().enumerate() {
                        m[(r, x * n + a)] = v;
                    }
                }
            }
            return m;
        }
        if p == 0 {
            let n = self.alg.dim();
            let dq = self.omega[q].dim;
            let mut m = Mat::zeros(dq, n * dq);
            for a in 0..n {
                m.set_block(0, a * dq, &self.omega[q].left[a]);
            }
            return m;
        }
        if q == 1 {
            let lv = self.levels[p + 1].as_ref().unwrap();
            return lv.p.mul(&lv.tensor.q);
        }
        let lift = self.lift(q);
        let inner = Mat::identity(dp).kron(&lift);
        let w = self.wedge_plain_raw(p, q - 1).kron(&Mat::identity(self.omega[1].dim));
        self.wedge_plain_raw(p + q - 1, 1).mul(&w.mul(&inner))
    }

    /// Section `Ω^n -> Ω^{n-1} ⊗ Ω^1` (plain) for `n >= 2`.
    fn lift(&self, n: usize) -> Mat {
        let lv = self.levels[n].as_ref().unwrap();
        lv.tensor.s.mul(&lv.s)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.max_degree {
            return Err(Error::DegreeOverflow { requested: n, max: self.max_degree });
        }
        Ok(())
    }

    pub fn omega(&self, n: usize) -> Result<&Module> {
        self.check_degree(n)?;
        Ok(&self.omega[n])
    }

    pub fn dim(&self, n: usize) -> usize {
        self.omega.get(n).map_or(0, |m| m.dim)
    }

    /// `d : Ω^n -> Ω^{n+1}`.
    pub fn d(&self, n: usize) -> Result<&Mat> {
        self.check_degree(n + 1)?;
        Ok(&self.d[n])
    }

    /// `N^1 = ker(a ⊗ b ↦ a db)` inside the plain `A ⊗ A`.
    pub fn relations(&self) -> &Subspace {
        &self.relations
    }

    /// A section of `a ⊗ b ↦ a db`.
    pub fn mu_section(&self) -> &Mat {
        &self.mu_sec
    }

    /// Projection from `(Ω^1)^{⊗n}` presented as `Ω^{n-1} ⊗_A Ω^1`.
    pub fn presentation(&self, n: usize) -> Result<(&Tensor, &Mat)> {
        self.check_degree(n)?;
        match self.levels.get(n).and_then(|l| l.as_ref()) {
            Some(lv) => Ok((&lv.tensor, &lv.p)),
            None => Err(Error::Invalid(format!("degree {n} has no tensor presentation"))),
        }
    }

    /// `Ω^p ⊗_A Ω^q`, cached.
    pub fn pair(&self, p: usize, q: usize) -> Result<Arc<Tensor>> {
        self.check_degree(p + q)?;
        self.pairs[p][q]
            .get_or_init(|| {
                if p == 0 {
                    Ok(Arc::new(tensor_unit_left(&self.alg, &self.omega[q])))
                } else {
                    tensor_over(&self.alg, &self.omega[p], &self.omega[q]).map(Arc::new)
                }
            })
            .clone()
    }

    /// Wedge product on the plain space `Ω^p ⊗ Ω^q`, cached.
    pub fn wedge_plain(&self, p: usize, q: usize) -> Result<Arc<Mat>> {
        self.check_degree(p + q)?;
        self.wedge_plain_cached(p, q)
    }

    fn wedge_plain_cached(&self, p: usize, q: usize) -> Result<Arc<Mat>> {
        self.wplain[p][q].get_or_init(|| Ok(Arc::new(self.wedge_plain_raw(p, q)))).clone()
    }

    /// `∧ : Ω^p ⊗_A Ω^q -> Ω^{p+q}`.
    pub fn wedge(&self, p: usize, q: usize) -> Result<Mat> {
        let t = self.pair(p, q)?;
        t.descend(&*self.wedge_plain(p, q)?, &format!("wedge ({p}, {q})"))
    }

    pub fn with_frame(mut self, frame: Vec<Vec<Rat>>) -> Result<Calculus> {
        let phi = self.frame_matrix(&frame);
        if phi.rows() != phi.cols() || phi.rank() != phi.rows() {
            return Err(Error::Invalid("frame is not a free left basis of Ω1".into()));
        }
        self.frame = Some(frame);
        Ok(self)
    }

    pub fn frame(&self) -> Option<&[Vec<Rat>]> {
        self.frame.as_deref()
    }

    /// `(a_1, .., a_r) ↦ Σ a_s θ_s`.
    fn frame_matrix(&self, frame: &[Vec<Rat>]) -> Mat {
        let n = self.alg.dim();
        let mut m = Mat::zeros(self.omega[1].dim, frame.len() * n);
        for (s, th) in frame.iter().enumerate() {
            for a in 0..n {
                let v = self.omega[1].left[a].mul_vec(th);
                for (r, x) in v.into_iter().enumerate() {
                    m[(r, s * n + a)] = x;
                }
            }
        }
        m
    }

    /// Frame coefficients of `d`: `dh = Σ_s ∂_s(h) θ_s`.
    pub fn partials(&self) -> Result<Vec<Mat>> {
        let frame = self.frame.as_ref().ok_or_else(|| Error::Invalid("calculus has no declared frame".into()))?;
        let phi = self.frame_matrix(frame);
        let inv = crate::linalg::left_inverse(&phi).expect("frame matrix is invertible");
        let all = inv.mul(&self.d[0]);
        let n = self.alg.dim();
        Ok((0..frame.len()).map(|s| all.block(s * n, 0, n, n)).collect())
    }

    /// `d_{n+1} d_n = 0` for every built degree; returns failing degrees.
    pub fn check_d_squared(&self) -> Vec<usize> {
        (0..self.d.len().saturating_sub(1)).filter(|&n| !self.d[n + 1].mul(&self.d[n]).is_zero()).collect()
    }

    /// Graded Leibniz rule on the plain spanning sets; returns failing `(p, q)`.
    pub fn check_leibniz(&self) -> Result<Vec<(usize, usize)>> {
        let mut bad = Vec::new();
        for p in 0..self.max_degree {
            for q in 0..self.max_degree - p {
                let lhs = self.d[p + q].mul(&*self.wedge_plain(p, q)?);
                let a = self.wedge_plain(p + 1, q)?.mul(&self.d[p].kron(&Mat::identity(self.dim(q))));
                let b = self.wedge_plain(p, q + 1)?.mul(&Mat::identity(self.dim(p)).kron(&self.d[q]));
                let rhs = if p % 2 == 0 { a.add(&b) } else { a.sub(&b) };
                if lhs != rhs {
                    bad.push((p, q));
                }
            }
        }
        Ok(bad)
    }

    /// Associativity of the wedge on plain triples; returns failing `(p, q, r)`.
    pub fn check_wedge_assoc(&self) -> Result<Vec<(usize, usize, usize)>> {
        let mut bad = Vec::new();
        let top = self.max_degree;
        for p in 1..=top {
            for q in 1..=top - p {
                for r in 1..=top - p - q {
                    let lhs = self.wedge_plain(p + q, r)?.mul(&self.wedge_plain(p, q)?.kron(&Mat::identity(self.dim(r))));
                    let rhs = self.wedge_plain(p, q + r)?.mul(&Mat::identity(self.dim(p)).kron(&*self.wedge_plain(q, r)?));
                    if lhs != rhs {
                        bad.push((p, q, r));
                    }
                }
            }
        }
        Ok(bad)
    }
}

/// Universal calculus: `Ω^1 = ker(A ⊗ A -> A)` and `da = 1 ⊗ a - a ⊗ 1`.
pub fn universal_calculus(alg: Algebra, max_degree: usize, name: impl Into<String>) -> Result<Calculus> {
    let n = alg.dim();
    let id = Mat::identity(n);
    let plain = Module::new(
        "A⊗A",
        n * n,
        (0..n).map(|i| alg.left_mat(i).kron(&id)).collect(),
        Some((0..n).map(|i| id.kron(alg.right_mat(i))).collect()),
    );
    let ker = kernel_of(&mult_map(&alg));
    let omega1 = plain.restrict(&ker, "Ω1")?;
    let unit = Mat::column_vec(alg.unit());
    let d_plain = unit.kron(&id).sub(&id.kron(&unit));
    let d0 = ker.coords_of(&d_plain);
    Calculus::build(alg, omega1, d0, max_degree, name)
}

/// Quaternions with the calculus free on `di, dj`.
pub fn quaternion_calculus(max_degree: usize) -> Result<Calculus> {
    let alg = crate::algebra::quaternion_algebra();
    // coordinate 4θ + b is e_b dθ; dθ q = φ(q) dθ with φ(i) = -i, φ(j) = -j
    let phi = Mat::from_i64(&[&[1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, 1]]);
    let id2 = Mat::identity(2);
    let left = (0..4).map(|i| id2.kron(alg.left_mat(i))).collect();
    let right = (0..4)
        .map(|i| id2.kron(&alg.right_of(&phi.mul_vec(&alg.basis(i)))))
        .collect();
    let omega1 = Module::new("Ω1", 8, left, Some(right));
    let mut d0 = Mat::zeros(8, 4);
    d0[(0, 1)] = Rat::one();
    d0[(4, 2)] = Rat::one();
    d0[(2, 3)] = Rat::from_int(-1);
    d0[(5, 3)] = Rat::one();
    Calculus::build(alg, omega1, d0, max_degree, "quaternion")?.with_frame(vec![unit_vec(8, 0), unit_vec(8, 4)])
}

/// Forms with values in a module: `Ω^k ⊗_A X`, built on demand.
pub struct FormBundle {
    calc: Arc<Calculus>,
    x: Module,
    tensors: Vec<OnceLock<Result<Arc<Tensor>>>>,
}

impl FormBundle {
    pub fn new(calc: &Arc<Calculus>, x: Module) -> FormBundle {
        let tensors = (0..=calc.max_degree()).map(|_| OnceLock::new()).collect();
        FormBundle { calc: calc.clone(), x, tensors }
    }

    pub fn calculus(&self) -> &Arc<Calculus> {
        &self.calc
    }

    pub fn module(&self) -> &Module {
        &self.x
    }

    pub fn tensor(&self, k: usize) -> Result<Arc<Tensor>> {
        self.calc.check_degree(k)?;
        self.tensors[k]
            .get_or_init(|| {
                if k == 0 {
                    Ok(Arc::new(tensor_unit_left(self.calc.algebra(), &self.x)))
                } else {
                    let mut t = tensor_over(self.calc.algebra(), &self.calc.omega[k], &self.x)?;
                    t.module.label = format!("Ω{k}{}", self.x.label);
                    Ok(Arc::new(t))
                }
            })
            .clone()
    }

    pub fn dim(&self, k: usize) -> Result<usize> {
        Ok(self.tensor(k)?.dim())
    }

    /// `Ω^k(f) = id ⊗ f` for a left-linear `f : X -> Y`.
    pub fn apply(&self, k: usize, target: &FormBundle, f: &Mat) -> Result<Mat> {
        let src = self.tensor(k)?;
        let tgt = target.tensor(k)?;
        let id = Mat::identity(self.calc.dim(k));
        Ok(src.map_to(&tgt, &id, f))
    }

    /// Wedge `Ω^p ⊗ (Ω^q ⊗_A X) -> Ω^{p+q} ⊗_A X` on the plain left factor.
    pub fn wedge_plain(&self, p: usize, q: usize) -> Result<Mat> {
        let out = self.tensor(p + q)?;
        let inner = self.tensor(q)?;
        let w = self.calc.wedge_plain(p, q)?;
        let (dp, dx) = (self.calc.dim(p), self.x.dim);
        let dqx = inner.dim();
        let plain_out = self.calc.dim(p + q) * dx;
        let mut cols = Vec::with_capacity(dp * dqx);
        for x in 0..dp {
            for z in 0..dqx {
                let mut acc = vec![Rat::zero(); plain_out];
                for r in 0..inner.s.rows() {
                    let c = &inner.s[(r, z)];
                    if c.is_zero() {
                        continue;
                    }
                    let (u, y) = (r / dx, r % dx);
                    let wcol = x * self.calc.dim(q) + u;
                    for wr in 0..w.rows() {
                        let a = &w[(wr, wcol)];
                        if !a.is_zero() {
                            acc[wr * dx + y] += a * c;
                        }
                    }
                }
                cols.push(out.q.mul_vec(&acc));
            }
        }
        Ok(Mat::from_cols(&cols, out.dim()))
    }

    /// `Ω^p ⊗_A (Ω^q ⊗_A X) -> Ω^{p+q} ⊗_A X` for another bundle whose
    /// module is `Ω^q ⊗_A X`.
    pub fn wedge(&self, p: usize, q: usize, outer: &FormBundle) -> Result<Mat> {
        let t = outer.tensor(p)?;
        t.descend(&self.wedge_plain(p, q)?, &format!("wedge ({p}, {q}) on {}", self.x.label))
    }

    /// The pair `Ω^1 X ⊕ Ω^2 X` with left action
    /// `a·(α, β) = (aα, da ∧ α + aβ)`.
    pub fn twisted_pair(&self) -> Result<Module> {
        let t1 = self.tensor(1)?;
        let t2 = self.tensor(2)?;
        let w = self.wedge_plain(1, 1)?;
        let n = self.calc.algebra().dim();
        let d0 = &self.calc.d[0];
        let id1 = Mat::identity(t1.dim());
        let left = (0..n)
            .map(|a| {
                let da = Mat::column_vec(&d0.col(a));
                let mut m = Mat::block_diag(&[&t1.module.left[a], &t2.module.left[a]]);
                m.set_block(t1.dim(), 0, &w.mul(&da.kron(&id1)));
                m
            })
            .collect();
        let right = match (&t1.module.right, &t2.module.right) {
            (Some(r1), Some(r2)) => Some(r1.iter().zip(r2).map(|(a, b)| Mat::block_diag(&[a, b])).collect()),
            _ => None,
        };
        Ok(Module::new(format!("TP({})", self.x.label), t1.dim() + t2.dim(), left, right))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternion_dims() {
        let c = quaternion_calculus(3).unwrap();
        assert_eq!(c.dim(1), 8);
        assert_eq!(c.dim(2), 12);
        assert!(c.check_d_squared().is_empty());
        assert_eq!(c.wedge(1, 1).unwrap().rank(), 12);
        assert_eq!(c.pair(1, 1).unwrap().dim(), 16);
    }

    #[test]
    fn two_points_universal() {
        let c = universal_calculus(crate::algebra::functions_on_points(2).unwrap(), 3, "two-point").unwrap();
        assert_eq!(c.dim(1), 2);
        assert!(c.check_d_squared().is_empty());
        assert!(c.check_leibniz().unwrap().is_empty());
    }
}
