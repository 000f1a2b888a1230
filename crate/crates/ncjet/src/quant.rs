//! Differential operators through their jet lifts, quantization maps built
//! from connections on symmetric forms, truncations, total symbols and star
//! products.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{is_bilinear, is_left_linear, map_from_coords, solve_maps, Linearity, Module};
use crate::calculus::FormBundle;
use crate::connections::{tensor_connection, BimoduleConnection, Connection};
use crate::error::{Error, Result};
use crate::jets::JetTower;
use crate::linalg::{right_inverse, solve_left, Mat, MatSystem, Rat, Term};

/// Degree ↦ symbol `S^k E -> F`. Zero entries are dropped.
pub type GradedSymbol = BTreeMap<usize, Mat>;

/// Power of `h` ↦ graded symbol.
pub type HPoly = BTreeMap<i32, GradedSymbol>;

/// Adds `b` into `a`, dropping components that cancel.
pub fn gs_add(a: &mut GradedSymbol, b: &GradedSymbol, coef: &Rat) {
    for (k, m) in b {
        let term = m.scale(coef);
        let sum = match a.get(k) {
            Some(x) => x.add(&term),
            None => term,
        };
        if sum.is_zero() {
            a.remove(k);
        } else {
            a.insert(*k, sum);
        }
    }
}

fn gs_single(k: usize, m: Mat) -> GradedSymbol {
    let mut g = GradedSymbol::new();
    if !m.is_zero() {
        g.insert(k, m);
    }
    g
}

fn hp_add(a: &mut HPoly, p: i32, g: &GradedSymbol, coef: &Rat) {
    let entry = a.entry(p).or_default();
    gs_add(entry, g, coef);
    if entry.is_empty() {
        a.remove(&p);
    }
}

/// `Σ ℏ^p c_p`.
pub fn hp_eval(a: &HPoly, hbar: &Rat) -> Result<GradedSymbol> {
    let mut out = GradedSymbol::new();
    for (p, g) in a {
        if *p < 0 && hbar.is_zero() {
            return Err(Error::ZeroHbar);
        }
        gs_add(&mut out, g, &hbar.pow(*p));
    }
    Ok(out)
}

/// A differential operator with its order and jet lift.
#[derive(Clone, Debug)]
pub struct DiffOp {
    pub matrix: Mat,
    pub order: usize,
    /// `Δ̃ : J^order E -> F` with `Δ̃ ∘ j = Δ`.
    pub lift: Mat,
}

/// An `A`-linear `Δ̃ : J^n E -> F` with `Δ̃ ∘ j^n = Δ`, if one exists.
pub fn op_lift(tower: &JetTower, target: &Module, delta: &Mat, n: usize) -> Result<Option<Mat>> {
    let lv = tower.level(n)?;
    let e = tower.level(0)?.module();
    if delta.shape() != (target.dim, e.dim) {
        return Err(Error::Invalid(format!("operator is {:?}, expected {:?}", delta.shape(), (target.dim, e.dim))));
    }
    let na = tower.calculus().algebra().dim();
    let vs: Vec<Mat> = (0..na).map(|a| lv.module().left[a].mul(&lv.prolong)).collect();
    let ws: Vec<Mat> = (0..na).map(|a| target.left[a].mul(delta)).collect();
    let v = Mat::hstack(&vs.iter().collect::<Vec<_>>());
    let w = Mat::hstack(&ws.iter().collect::<Vec<_>>());
    let lift = if v.rank() == lv.dim() {
        solve_left(&v, &w)
    } else {
        let mut sys = MatSystem::new();
        let x = sys.unknown(target.dim, lv.dim());
        sys.equation(&[Term::new(x, None, Some(&lv.prolong))], delta);
        let zero = Mat::zeros(target.dim, lv.dim());
        for a in 0..na {
            sys.equation(&[Term::new(x, None, Some(&lv.module().left[a])), Term::new(x, Some(&target.left[a]), None).neg()], &zero);
        }
        sys.solve().particular(x)
    };
    Ok(lift.filter(|l| is_left_linear(l, lv.module(), target) && l.mul(&lv.prolong) == *delta))
}

/// Smallest order within the built jets, if any.
pub fn op_order(tower: &JetTower, target: &Module, delta: &Mat) -> Result<Option<usize>> {
    for n in 0..=tower.order() {
        if op_lift(tower, target, delta, n)?.is_some() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

pub fn analyze(tower: &JetTower, target: &Module, delta: &Mat) -> Result<DiffOp> {
    for n in 0..=tower.order() {
        if let Some(lift) = op_lift(tower, target, delta, n)? {
            return Ok(DiffOp { matrix: delta.clone(), order: n, lift });
        }
    }
    Err(Error::Unsolvable(format!("operator has no order within the built jets (up to {})", tower.order())))
}

/// Restriction symbol `Δ̃ ∘ ι^n : S^n E -> F`.
pub fn symbol_of(tower: &JetTower, target: &Module, delta: &Mat, n: usize) -> Result<Mat> {
    let lift = op_lift(tower, target, delta, n)?.ok_or_else(|| Error::Unsolvable(format!("operator has order above {n}")))?;
    Ok(lift.mul(&tower.sym(n)?.iota))
}

/// Basis of the left-linear maps `S^k E -> F`.
pub fn symbol_basis(tower: &JetTower, target: &Module, k: usize) -> Result<Vec<Mat>> {
    let s = tower.sym(k)?;
    let space = solve_maps(s.forms.module(), target, Linearity::Left, &[])?;
    let dir = space.direction();
    Ok((0..dir.dim()).map(|i| map_from_coords(target.dim, s.dim(), dir.basis().row(i))).collect())
}

/// Canonical linear left inverse `Ω^1 S^k -> S^{k+1}` of `ι_∧`, bilinear when
/// the modules carry right actions.
pub fn solve_retraction(tower: &JetTower, k: usize) -> Result<Option<Mat>> {
    let up = tower.sym(k + 1)?;
    let amb = up.ambient.as_ref().unwrap().module();
    let tgt = up.forms.module();
    let mut sys = MatSystem::new();
    let s = sys.unknown(tgt.dim, amb.dim);
    sys.equation(&[Term::new(s, None, Some(&up.incl))], &Mat::identity(tgt.dim));
    let zero = Mat::zeros(tgt.dim, amb.dim);
    for a in 0..tower.calculus().algebra().dim() {
        sys.equation(&[Term::new(s, None, Some(&amb.left[a])), Term::new(s, Some(&tgt.left[a]), None).neg()], &zero);
        if let (Some(ra), Some(rt)) = (&amb.right, &tgt.right) {
            sys.equation(&[Term::new(s, None, Some(&ra[a])), Term::new(s, Some(&rt[a]), None).neg()], &zero);
        }
    }
    Ok(sys.solve().particular(s))
}

/// `s ∘ ι_∧ = id` and `s` is linear over the available actions.
pub fn is_retraction(tower: &JetTower, k: usize, s: &Mat) -> Result<bool> {
    let up = tower.sym(k + 1)?;
    let amb = up.ambient.as_ref().unwrap().module();
    let tgt = up.forms.module();
    if s.shape() != (tgt.dim, amb.dim) {
        return Ok(false);
    }
    let lin = if amb.right.is_some() && tgt.right.is_some() { is_bilinear(s, amb, tgt) } else { is_left_linear(s, amb, tgt) };
    Ok(lin && s.mul(&up.incl) == Mat::identity(tgt.dim))
}

fn regular_tower(tower: &JetTower) -> Result<()> {
    if tower.level(0)?.dim() != tower.calculus().algebra().dim() {
        return Err(Error::Invalid("needs E = A".into()));
    }
    Ok(())
}

/// `ω ↦ ω ⊗ 1 : Ω^1 -> Ω^1 ⊗ A`, for `E = A`.
pub fn unit_forms(tower: &JetTower) -> Result<Mat> {
    regular_tower(tower)?;
    let calc = tower.calculus();
    let unit = Mat::column_vec(calc.algebra().unit());
    Ok(tower.level(0)?.forms.tensor(1)?.q.mul(&Mat::identity(calc.dim(1)).kron(&unit)))
}

/// `∇ = d` on `E = A`.
pub fn exterior_connection(tower: &JetTower) -> Result<Connection> {
    let u = unit_forms(tower)?;
    Connection::new(tower.level(0)?.forms.clone(), u.mul(tower.calculus().d(0)?))
}

/// `Ω^1 ⊗ Ω^1 -> Ω^1 ⊗ S^1` induced by [`unit_forms`]; invertible.
pub fn pair_to_sym_ambient(tower: &JetTower) -> Result<Mat> {
    let u = unit_forms(tower)?;
    let calc = tower.calculus();
    let p = FormBundle::new(calc, calc.omega(1)?.clone()).tensor(1)?;
    let amb = tower.sym(1)?.forms.tensor(1)?;
    Ok(p.map_to(&amb, &Mat::identity(calc.dim(1)), &u))
}

/// `½(id + σ)` as a map `Ω^1 S^1 -> S^2`, for `E = A`.
pub fn braiding_retraction(tower: &JetTower, b: &BimoduleConnection) -> Result<Mat> {
    let big_u = pair_to_sym_ambient(tower)?;
    let inv = right_inverse(&big_u)
        .filter(|_| big_u.rows() == big_u.cols())
        .ok_or_else(|| Error::Check("Ω1 ⊗ Ω1 and Ω1 ⊗ S1 are not identified".into()))?;
    let sigma = big_u.mul(&b.sigma).mul(&inv);
    let s = Mat::identity(sigma.rows()).add(&sigma).scale(&Rat::new(1, 2));
    let s2 = tower.sym(2)?;
    if !s2.carrier.contains_cols(&s) {
        return Err(Error::Check("½(id + σ) does not land in S2".into()));
    }
    Ok(s2.carrier.coords_of(&s))
}

/// `∇^{S^k}` for `k = 0..=top`: `∇^E`, the tensor connection, then
/// `Ω^1(s^{1,k-1}) ∘ ∇^{Ω^1 S^{k-1}} ∘ ι_∧`.
pub fn sym_connection_chain(
    tower: &JetTower,
    b: &BimoduleConnection,
    conn_e: &Connection,
    retractions: &BTreeMap<usize, Mat>,
    top: usize,
) -> Result<Vec<Connection>> {
    let mut chain = vec![Connection::new(tower.level(0)?.forms.clone(), conn_e.matrix.clone())?];
    for k in 1..=top {
        let s = tower.sym(k)?;
        let tc = tensor_connection(b, &chain[k - 1])?;
        let m = if k == 1 {
            tc.matrix
        } else {
            let r = retraction(tower, retractions, k - 1)?;
            tc.forms.apply(1, &s.forms, &r)?.mul(&tc.matrix).mul(&s.incl)
        };
        chain.push(Connection::new(s.forms.clone(), m)?);
    }
    Ok(chain)
}

fn retraction(tower: &JetTower, retractions: &BTreeMap<usize, Mat>, k: usize) -> Result<Mat> {
    let up = tower.sym(k + 1)?;
    if up.dim() == 0 {
        return Ok(Mat::zeros(0, up.ambient.as_ref().unwrap().module().dim));
    }
    let s = retractions.get(&k).ok_or_else(|| Error::Invalid(format!("missing retraction s^(1,{k})")))?;
    if !is_retraction(tower, k, s)? {
        return Err(Error::Check(format!("s^(1,{k}) is not a retraction of the symmetric inclusion")));
    }
    Ok(s.clone())
}

/// A full quantization for `(E, E)`: `q^k(σ) = σ ∘ ∇^k`.
pub struct Quantization {
    tower: Arc<JetTower>,
    top: usize,
    /// `∇^k : E -> S^k E`.
    chain: Vec<Mat>,
    connections: Vec<Connection>,
}

impl Quantization {
    pub fn build(
        tower: Arc<JetTower>,
        b: &BimoduleConnection,
        conn_e: &Connection,
        retractions: &BTreeMap<usize, Mat>,
    ) -> Result<Quantization> {
        let top = (0..=tower.order())
            .find(|&k| tower.sym(k).map(|s| s.dim() == 0).unwrap_or(false))
            .ok_or_else(|| Error::Invalid(format!("symmetric forms do not vanish up to order {}", tower.order())))?
            .saturating_sub(1);
        let connections = sym_connection_chain(&tower, b, conn_e, retractions, top.saturating_sub(1))?;
        let mut chain = vec![Mat::identity(tower.level(0)?.dim())];
        if top >= 1 {
            chain.push(conn_e.matrix.clone());
        }
        for k in 1..top {
            let s = retraction(&tower, retractions, k)?;
            chain.push(s.mul(&connections[k].matrix).mul(&chain[k]));
        }
        let q = Quantization { tower, top, chain, connections };
        for k in 0..=top {
            for sigma in symbol_basis(&q.tower, q.module(), k)? {
                if q.symbol(&q.q(k, &sigma), k)? != sigma {
                    return Err(Error::Check(format!("section property fails in degree {k}")));
                }
            }
        }
        Ok(q)
    }

    pub fn tower(&self) -> &Arc<JetTower> {
        &self.tower
    }

    pub fn module(&self) -> &Module {
        self.tower.level(0).unwrap().module()
    }

    /// Highest degree with nonzero symmetric forms.
    pub fn top(&self) -> usize {
        self.top
    }

    /// `∇^k : E -> S^k E`.
    pub fn chain(&self, k: usize) -> Option<&Mat> {
        self.chain.get(k)
    }

    /// `∇^{S^k}` for `k < top`.
    pub fn connections(&self) -> &[Connection] {
        &self.connections
    }

    pub fn q(&self, k: usize, sigma: &Mat) -> Mat {
        match self.chain.get(k) {
            Some(c) => sigma.mul(c),
            None => Mat::zeros(self.module().dim, self.module().dim),
        }
    }

    pub fn q_total(&self, s: &GradedSymbol) -> Mat {
        let n = self.module().dim;
        s.iter().fold(Mat::zeros(n, n), |acc, (k, m)| acc.add(&self.q(*k, m)))
    }

    /// `q_ℏ = Σ ℏ^k q^k`.
    pub fn q_hbar(&self, s: &GradedSymbol, hbar: &Rat) -> Mat {
        let n = self.module().dim;
        s.iter().fold(Mat::zeros(n, n), |acc, (k, m)| acc.add(&self.q(*k, m).scale(&hbar.pow(*k as i32))))
    }

    /// Formal `q̂_h`, power of `h` ↦ operator.
    pub fn q_formal(&self, a: &HPoly) -> BTreeMap<i32, Mat> {
        let mut out: BTreeMap<i32, Mat> = BTreeMap::new();
        for (p, g) in a {
            for (k, m) in g {
                let e = p + *k as i32;
                let v = self.q(*k, m);
                let sum = match out.get(&e) {
                    Some(x) => x.add(&v),
                    None => v,
                };
                out.insert(e, sum);
            }
        }
        out.retain(|_, m| !m.is_zero());
        out
    }

    pub fn order(&self, delta: &Mat) -> Result<usize> {
        op_order(&self.tower, self.module(), delta)?
            .ok_or_else(|| Error::Unsolvable("operator has no order within the built jets".into()))
    }

    /// `ζ^k(Δ)`; zero above the top degree.
    pub fn symbol(&self, delta: &Mat, k: usize) -> Result<Mat> {
        if k > self.top {
            return Ok(Mat::zeros(self.module().dim, 0));
        }
        symbol_of(&self.tower, self.module(), delta, k)
    }

    /// `⌊Δ⌋^k`.
    pub fn truncate(&self, delta: &Mat, k: usize) -> Result<Mat> {
        let n = self.order(delta)?;
        let mut t = delta.clone();
        for j in (k + 1..=n).rev() {
            let s = self.symbol(&t, j)?;
            t = t.sub(&self.q(j, &s));
        }
        Ok(t)
    }

    /// `[Δ]^k = ζ^k(⌊Δ⌋^k)`.
    pub fn graded_piece(&self, delta: &Mat, k: usize) -> Result<Mat> {
        if k > self.top {
            return Ok(Mat::zeros(self.module().dim, 0));
        }
        self.symbol(&self.truncate(delta, k)?, k)
    }

    /// `Δ^{(k)} = q^k([Δ]^k)`.
    pub fn homogeneous(&self, delta: &Mat, k: usize) -> Result<Mat> {
        Ok(self.q(k, &self.graded_piece(delta, k)?))
    }

    /// `ς_q(Δ) = Σ_k [Δ]^k`.
    pub fn total_symbol(&self, delta: &Mat) -> Result<GradedSymbol> {
        let n = self.order(delta)?;
        let mut out = GradedSymbol::new();
        for k in 0..=n.min(self.top) {
            gs_add(&mut out, &gs_single(k, self.graded_piece(delta, k)?), &Rat::one());
        }
        Ok(out)
    }

    /// `ς_{q_ℏ}(Δ) = Σ_k ℏ^{-k} [Δ]^k`.
    pub fn total_symbol_deformed(&self, delta: &Mat, hbar: &Rat) -> Result<GradedSymbol> {
        if hbar.is_zero() {
            return Err(Error::ZeroHbar);
        }
        hp_eval(&self.total_symbol_formal(delta)?, hbar)
    }

    /// `ς̂_{q_h}(Δ) = Σ_k h^{-k} [Δ]^k`.
    pub fn total_symbol_formal(&self, delta: &Mat) -> Result<HPoly> {
        let mut out = HPoly::new();
        for (k, m) in self.total_symbol(delta)? {
            hp_add(&mut out, -(k as i32), &gs_single(k, m), &Rat::one());
        }
        Ok(out)
    }

    /// `ς̂_{q_h}` extended `h`-linearly to operator polynomials.
    pub fn total_symbol_formal_poly(&self, ops: &BTreeMap<i32, Mat>) -> Result<HPoly> {
        let mut out = HPoly::new();
        for (p, m) in ops {
            for (e, g) in self.total_symbol_formal(m)? {
                hp_add(&mut out, p + e, &g, &Rat::one());
            }
        }
        Ok(out)
    }

    pub fn unit(&self) -> GradedSymbol {
        gs_single(0, Mat::identity(self.module().dim))
    }

    /// Symbol multiplication `a · b = [q(a) ∘ q(b)]^{n+m}`.
    pub fn symbol_product(&self, a: &GradedSymbol, b: &GradedSymbol) -> Result<GradedSymbol> {
        let mut out = GradedSymbol::new();
        for (n, x) in a {
            for (m, y) in b {
                let comp = self.q(*n, x).mul(&self.q(*m, y));
                gs_add(&mut out, &gs_single(n + m, self.graded_piece(&comp, n + m)?), &Rat::one());
            }
        }
        Ok(out)
    }

    /// `a ⋆̂ b = Σ_k h^k [q(a) ∘ q(b)]^{n+m-k}`, bilinearly over degrees.
    pub fn star_formal(&self, a: &GradedSymbol, b: &GradedSymbol) -> Result<HPoly> {
        let mut out = HPoly::new();
        for (n, x) in a {
            for (m, y) in b {
                let comp = self.q(*n, x).mul(&self.q(*m, y));
                let total = n + m;
                for k in 0..=total {
                    let piece = self.graded_piece(&comp, total - k)?;
                    hp_add(&mut out, k as i32, &gs_single(total - k, piece), &Rat::one());
                }
            }
        }
        Ok(out)
    }

    /// `⋆̂` extended `h`-bilinearly.
    pub fn star_poly(&self, a: &HPoly, b: &HPoly) -> Result<HPoly> {
        let mut out = HPoly::new();
        for (p, x) in a {
            for (r, y) in b {
                for (e, g) in self.star_formal(x, y)? {
                    hp_add(&mut out, p + r + e, &g, &Rat::one());
                }
            }
        }
        Ok(out)
    }

    /// `a ⋆ b` over all ordered pairs of `gens`, row-major.
    pub fn star_table(&self, gens: &[GradedSymbol], hbar: &Rat) -> Result<Vec<GradedSymbol>> {
        let pairs: Vec<(usize, usize)> = (0..gens.len()).flat_map(|i| (0..gens.len()).map(move |j| (i, j))).collect();
        let one = |&(i, j): &(usize, usize)| self.star(&gens[i], &gens[j], hbar);
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            pairs.par_iter().map(one).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            pairs.iter().map(one).collect()
        }
    }

    /// `a ⋆ b` at `h = ℏ`.
    pub fn star(&self, a: &GradedSymbol, b: &GradedSymbol, hbar: &Rat) -> Result<GradedSymbol> {
        hp_eval(&self.star_formal(a, b)?, hbar)
    }
}

/// `x ↦ x` lifted to an `HPoly` in degree `h^0`.
pub fn hp_const(g: &GradedSymbol) -> HPoly {
    let mut out = HPoly::new();
    if !g.is_empty() {
        out.insert(0, g.clone());
    }
    out
}

/// A single symbol of degree `k` as a graded symbol.
pub fn graded(k: usize, m: Mat) -> GradedSymbol {
    gs_single(k, m)
}
