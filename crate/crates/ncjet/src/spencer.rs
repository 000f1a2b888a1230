//! Spencer operators, the Spencer complex and bicomplex, and related checks.

use std::sync::Arc;

use crate::algebra::Module;
use crate::calculus::FormBundle;
use crate::error::{Error, Result};
use crate::jets::{d_tilde, delta, JetTower};
use crate::linalg::{kernel_of, solve_left, Mat, Subspace};

/// `ω ⊗ y ↦ dω ⊗ π(y) - (-1)^m ω ∧ ρ(y)` on `Ω^m ⊗_A Y`, for an
/// `A`-linear `π : Y -> X` and a `k`-linear `ρ : Y -> Ω^1 X`.
pub fn spencer_generic(x: &FormBundle, y: &FormBundle, pi: &Mat, rho: &Mat, m: usize) -> Result<Mat> {
    let calc = x.calculus();
    calc.check_degree(m + 1)?;
    let src = y.tensor(m)?;
    let out = x.tensor(m + 1)?;
    let a = out.q.mul(&calc.d(m)?.kron(pi));
    let b = x.wedge_plain(m, 1)?.mul(&Mat::identity(calc.dim(m)).kron(rho));
    let plain = if m % 2 == 0 { a.sub(&b) } else { a.add(&b) };
    src.descend(&plain, &format!("Spencer operator on Ω{m}{}", y.module().label))
}

/// Holonomic `S^{n,m} : Ω^m J^n -> Ω^{m+1} J^{n-1}`.
pub fn spencer(tower: &JetTower, n: usize, m: usize) -> Result<Mat> {
    if n == 0 {
        return Err(Error::Invalid("Spencer operators start at jet order 1".into()));
    }
    let lv = tower.level(n)?;
    let prev = tower.level(n - 1)?;
    spencer_generic(&prev.forms, &lv.forms, &lv.pi, &lv.rho_l, m)
}

/// Jets of order `n` with the sesquiholonomic carrier when `n ≥ 2`, and the
/// inclusion `t` of holonomic jets into them.
fn sesqui_parts(tower: &JetTower, n: usize) -> Result<(Arc<FormBundle>, Mat)> {
    if n >= 2 {
        let s = tower.sesqui(n)?;
        Ok((s.forms.clone(), s.t.clone()))
    } else {
        let lv = tower.level(n)?;
        Ok((lv.forms.clone(), Mat::identity(lv.dim())))
    }
}

/// Sesquiholonomic `S^{{n,m}} : Ω^m J^{{n}} -> Ω^{m+1} J^{{n-1}}`.
pub fn spencer_sesqui(tower: &JetTower, n: usize, m: usize) -> Result<Mat> {
    if n < 2 {
        return spencer(tower, n, m);
    }
    let s = tower.sesqui(n)?;
    let pair = tower.level(n)?.pair.clone().unwrap();
    let prev = tower.level(n - 1)?;
    let (low_forms, t_low) = sesqui_parts(tower, n - 1)?;
    let pi = t_low.mul(&pair.pi()).mul(&s.l);
    let w = prev.forms.apply(1, &low_forms, &t_low)?;
    let rho = w.mul(&pair.rho()).mul(&s.l);
    spencer_generic(&low_forms, &s.forms, &pi, &rho, m)
}

/// `S̄^{{n,m}} : Ω^m J^{{n}} -> Ω^{m+1} J^{n-1}`.
pub fn spencer_bar(tower: &JetTower, n: usize, m: usize) -> Result<Mat> {
    let s = tower.sesqui(n)?;
    let pair = tower.level(n)?.pair.clone().unwrap();
    let prev = tower.level(n - 1)?;
    spencer_generic(&prev.forms, &s.forms, &pair.pi().mul(&s.l), &pair.rho().mul(&s.l), m)
}

/// `Ω^k(f)` between two jet levels of the tower.
fn forms_map(src: &FormBundle, tgt: &FormBundle, k: usize, f: &Mat) -> Result<Mat> {
    src.apply(k, tgt, f)
}

/// The Spencer sequence `0 -> E -> J^n -> Ω^1 J^{n-1} -> ... -> Ω^n E -> 0`.
#[derive(Clone, Debug)]
pub struct SpencerComplex {
    pub n: usize,
    /// `j^n` followed by `S^{n-k,k}` for `k = 0..n`.
    pub maps: Vec<Mat>,
    pub term_dims: Vec<usize>,
    pub is_complex: bool,
    /// Cohomology dimension at each term, starting with `E`.
    pub cohomology: Vec<usize>,
    /// `ker S^{n,0} = im j^n` as subspaces.
    pub kernel_is_prolongation: bool,
}

pub fn spencer_complex(tower: &JetTower, n: usize) -> Result<SpencerComplex> {
    if n == 0 {
        return Err(Error::Invalid("Spencer complex needs order at least 1".into()));
    }
    tower.calculus().check_degree(n)?;
    let mut maps = vec![tower.level(n)?.prolong.clone()];
    let mut term_dims = vec![tower.level(0)?.dim()];
    for k in 0..n {
        maps.push(spencer(tower, n - k, k)?);
        term_dims.push(tower.level(n - k)?.forms.dim(k)?);
    }
    term_dims.push(tower.level(0)?.forms.dim(n)?);
    let is_complex = maps.windows(2).all(|w| w[1].mul(&w[0]).is_zero());
    let mut cohomology = Vec::new();
    for (i, &dim) in term_dims.iter().enumerate() {
        let rank_in = if i == 0 { 0 } else { maps[i - 1].rank() };
        let rank_out = if i < maps.len() { maps[i].rank() } else { 0 };
        cohomology.push(dim - rank_out - rank_in);
    }
    let kernel_is_prolongation = kernel_of(&maps[1]) == Subspace::column_space(&maps[0]);
    Ok(SpencerComplex { n, maps, term_dims, is_complex, cohomology, kernel_is_prolongation })
}

/// Cohomology of `0 -> S^n -> Ω^1 S^{n-1} -> ... -> Ω^n E -> 0` under δ.
pub fn delta_cohomology(tower: &JetTower, n: usize) -> Result<Vec<usize>> {
    tower.calculus().check_degree(n)?;
    let mut maps = Vec::new();
    let mut dims = Vec::new();
    for k in 0..=n {
        dims.push(tower.sym(n - k)?.forms.dim(k)?);
        if k < n {
            maps.push(delta(tower, n - k, k)?);
        }
    }
    Ok((0..dims.len())
        .map(|i| {
            let rank_in = if i == 0 { 0 } else { maps[i - 1].rank() };
            let rank_out = if i < maps.len() { maps[i].rank() } else { 0 };
            dims[i] - rank_out - rank_in
        })
        .collect())
}

/// One commuting-square or composite-zero verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Default)]
pub struct BicomplexReport {
    pub cells: Vec<Cell>,
}

impl BicomplexReport {
    pub fn pass(&self) -> bool {
        self.cells.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Cell> {
        self.cells.iter().filter(|c| !c.pass).collect()
    }

    fn push(&mut self, name: String, pass: bool) {
        self.cells.push(Cell { name, pass });
    }
}

/// Checks every square of the bicomplex with rows
/// `0 -> Ω^k S^{n-k} -> Ω^k J^{n-k} -> Ω^k J^{n-k-1} -> 0`, left column `-δ`
/// and the other columns Spencer operators. `corrupt_sign` flips δ.
pub fn bicomplex_check(tower: &JetTower, n: usize, corrupt_sign: bool) -> Result<BicomplexReport> {
    let calc = tower.calculus();
    calc.check_degree(n)?;
    let mut rep = BicomplexReport::default();
    let top = tower.level(n)?;
    let below = tower.level(n - 1)?;
    rep.push("top: π j^n = j^(n-1)".into(), top.pi.mul(&top.prolong) == below.prolong);
    rep.push("top: S^(n,0) j^n = 0".into(), spencer(tower, n, 0)?.mul(&top.prolong).is_zero());
    for k in 0..=n {
        let h = n - k;
        let jh = tower.level(h)?;
        let sh = tower.sym(h)?;
        let iota_k = forms_map(&sh.forms, &jh.forms, k, &sh.iota)?;
        if h >= 1 {
            let jl = tower.level(h - 1)?;
            let pi_k = forms_map(&jh.forms, &jl.forms, k, &jh.pi)?;
            rep.push(format!("row {k}: composite zero"), pi_k.mul(&iota_k).is_zero());
            let exact = kernel_of(&pi_k) == Subspace::column_space(&iota_k)
                && pi_k.rank() == jl.forms.dim(k)?
                && iota_k.rank() == sh.forms.dim(k)?;
            rep.push(format!("row {k}: exact"), exact);
        }
        if k == n || h == 0 {
            continue;
        }
        let s_hk = spencer(tower, h, k)?;
        let mut minus_delta = delta(tower, h, k)?.neg();
        if corrupt_sign {
            minus_delta = minus_delta.neg();
        }
        let sl = tower.sym(h - 1)?;
        let jl = tower.level(h - 1)?;
        let iota_next = forms_map(&sl.forms, &jl.forms, k + 1, &sl.iota)?;
        rep.push(format!("square S^{h} -> J^{h}, degree {k}"), s_hk.mul(&iota_k) == iota_next.mul(&minus_delta));
        if h >= 2 {
            let jll = tower.level(h - 2)?;
            let pi_k = forms_map(&jh.forms, &jl.forms, k, &jh.pi)?;
            let pi_next = forms_map(&jl.forms, &jll.forms, k + 1, &jl.pi)?;
            let lhs = pi_next.mul(&s_hk);
            let rhs = spencer(tower, h - 1, k)?.mul(&pi_k);
            rep.push(format!("square J^{h} -> J^{}, degree {k}", h - 1), lhs == rhs);
        }
        if k + 2 <= n && h >= 2 && k + 2 <= calc.max_degree() {
            let dd = delta(tower, h - 1, k + 1)?.mul(&delta(tower, h, k)?);
            rep.push(format!("column δ: δ δ = 0 at (S^{h}, degree {k})"), dd.is_zero());
            let ss = spencer(tower, h - 1, k + 1)?.mul(&s_hk);
            rep.push(format!("column S: S S = 0 at (J^{h}, degree {k})"), ss.is_zero());
        }
    }
    Ok(rep)
}

/// `ν^m : Ω^m ⊗ TP(E) -> Ω^{m+2} E`, `ω ⊗ (α, β) ↦ (-1)^m dω ∧ α + ω ∧ β`.
pub fn nu(e: &FormBundle, m: usize) -> Result<(Mat, Arc<FormBundle>)> {
    let calc = e.calculus();
    calc.check_degree(m + 2)?;
    let tp = e.twisted_pair()?;
    let (da, db) = (e.dim(1)?, e.dim(2)?);
    let sel_a = Mat::hstack(&[&Mat::identity(da), &Mat::zeros(da, db)]);
    let sel_b = Mat::hstack(&[&Mat::zeros(db, da), &Mat::identity(db)]);
    let tp_forms = Arc::new(FormBundle::new(calc, tp));
    let a = e.wedge_plain(m + 1, 1)?.mul(&calc.d(m)?.kron(&sel_a));
    let b = e.wedge_plain(m, 2)?.mul(&Mat::identity(calc.dim(m)).kron(&sel_b));
    let plain = if m % 2 == 0 { a.add(&b) } else { b.sub(&a) };
    let nu = tp_forms.tensor(m)?.descend(&plain, "ν")?;
    Ok((nu, tp_forms))
}

/// `S^{1,m+1} ∘ S^{1,m}_{J^1} = -ν^m ∘ Ω^m(D̃)` on `Ω^m J^1 J^1 E`.
pub fn nu_identity(tower: &JetTower, m: usize) -> Result<bool> {
    let j1 = tower.level(1)?.pair.clone().unwrap();
    let outer = tower.outer(2).cloned().ok_or_else(|| Error::Invalid("needs jets of order 2".into()))?;
    let e = tower.level(0)?.forms.clone();
    let dt = d_tilde(&j1, &outer)?.stacked();
    let (nu, tp_forms) = nu(&e, m)?;
    let om_dt = outer.forms().apply(m, &tp_forms, &dt)?;
    let s_outer = spencer_generic(j1.forms(), outer.forms(), &outer.pi(), &outer.rho(), m)?;
    let s_inner = spencer_generic(&e, j1.forms(), &j1.pi(), &j1.rho(), m + 1)?;
    Ok(s_inner.mul(&s_outer) == nu.mul(&om_dt).neg())
}

/// Kernel of `S^{n-1,1} ∘ S̄^{{n,0}}`, mapped into `J^1 J^{n-1}`.
pub fn holonomic_via_spencer(tower: &JetTower, n: usize) -> Result<Subspace> {
    if n < 2 {
        return Err(Error::Invalid("needs order at least 2".into()));
    }
    let s = tower.sesqui(n)?;
    let comp = spencer(tower, n - 1, 1)?.mul(&spencer_bar(tower, n, 0)?);
    let k = kernel_of(&comp);
    Ok(Subspace::column_space(&s.l.mul(&k.inclusion())))
}

/// `S^{n-1,1} ∘ S̄^{{n,0}} = -D̃^II ∘ J^1(l) ∘ l^{{n}}`.
pub fn sesqui_curvature_identity(tower: &JetTower, n: usize) -> Result<bool> {
    let s = tower.sesqui(n)?;
    let lv = tower.level(n)?;
    let two = &lv.obstruction.as_ref().unwrap().two;
    let comp = spencer(tower, n - 1, 1)?.mul(&spencer_bar(tower, n, 0)?);
    Ok(comp == two.mul(&s.l).neg())
}

/// `Ω^{m+1}(t) ∘ S^{n,m} = S^{{n,m}} ∘ Ω^m(t)`.
pub fn flavor_compatibility(tower: &JetTower, n: usize, m: usize) -> Result<bool> {
    let (hi, t_hi) = sesqui_parts(tower, n)?;
    let (lo, t_lo) = sesqui_parts(tower, n - 1)?;
    let lhs = tower.level(n - 1)?.forms.apply(m + 1, &lo, &t_lo)?.mul(&spencer(tower, n, m)?);
    let rhs = spencer_sesqui(tower, n, m)?.mul(&tower.level(n)?.forms.apply(m, &hi, &t_hi)?);
    Ok(lhs == rhs)
}

/// The unique `σ : Ω^1 X -> Z` making `[Δ | σ]` an `A`-linear map on
/// `J^1 X = X ⊕ Ω^1 X`, i.e. the restriction symbol of a first-order `Δ`.
pub fn first_order_symbol(x: &FormBundle, z: &Module, op: &Mat) -> Result<Mat> {
    let calc = x.calculus();
    let alg = calc.algebra();
    let t1 = x.tensor(1)?;
    let xm = x.module();
    let d0 = calc.d(0)?;
    let idx = Mat::identity(xm.dim);
    // Images of `c·(d e_a ⊗ x)` and the values forced on them.
    let mut vs = Vec::new();
    let mut ws = Vec::new();
    for a in 0..alg.dim() {
        let da_x = t1.q.mul(&Mat::column_vec(&d0.col(a)).kron(&idx));
        let value = op.mul(&xm.left[a]).sub(&z.left[a].mul(op));
        for c in 0..alg.dim() {
            vs.push(t1.module.left[c].mul(&da_x));
            ws.push(z.left[c].mul(&value));
        }
    }
    let v = Mat::hstack(&vs.iter().collect::<Vec<_>>());
    let w = Mat::hstack(&ws.iter().collect::<Vec<_>>());
    if v.rank() < t1.dim() {
        return Err(Error::NonUniqueLift(1));
    }
    solve_left(&v, &w).ok_or_else(|| Error::Unsolvable("operator is not of order one".into()))
}

/// The restriction symbol of `S^{n,m}` equals `(∧ ⊗ id) ∘ Ω^1(Ω^m(π))`.
pub fn restriction_symbol_check(tower: &JetTower, n: usize, m: usize) -> Result<bool> {
    let calc = tower.calculus();
    let lv = tower.level(n)?;
    let prev = tower.level(n - 1)?;
    let x = lv.forms.tensor(m)?;
    let y = prev.forms.tensor(m)?;
    let z = prev.forms.tensor(m + 1)?;
    let xb = FormBundle::new(calc, x.module.clone());
    let yb = FormBundle::new(calc, y.module.clone());
    let sym = first_order_symbol(&xb, &z.module, &spencer(tower, n, m)?)?;
    let om_pi = lv.forms.apply(m, &prev.forms, &lv.pi)?;
    let expected = prev.forms.wedge(1, m, &yb)?.mul(&xb.apply(1, &yb, &om_pi)?);
    Ok(sym == expected)
}
