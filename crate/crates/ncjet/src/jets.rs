//! Jet modules inside iterated pair spaces, symmetric forms, and the
//! obstruction maps cutting holonomic jets out of iterated 1-jets.

use std::sync::{Arc, OnceLock};

use crate::algebra::{sub_bimodule, Module};
use crate::calculus::{Calculus, FormBundle};
use crate::error::{Error, Result};
use crate::linalg::{kernel_of, Mat, Subspace};

/// `J^1 F = F ⊕ Ω^1 F` with left action `a·(x, ω) = (ax, aω - da ⊗ x)`.
pub struct Jet1 {
    base: Arc<FormBundle>,
    module: Module,
    forms: OnceLock<Arc<FormBundle>>,
}

impl Jet1 {
    pub fn new(base: Arc<FormBundle>) -> Result<Jet1> {
        let calc = base.calculus().clone();
        let f = base.module();
        let t1 = base.tensor(1)?;
        let d0 = calc.d(0)?;
        let n = calc.algebra().dim();
        let idf = Mat::identity(f.dim);
        let left = (0..n)
            .map(|a| {
                let da = Mat::column_vec(&d0.col(a));
                let mut m = Mat::block_diag(&[&f.left[a], &t1.module.left[a]]);
                m.set_block(f.dim, 0, &t1.q.mul(&da.kron(&idf)).neg());
                m
            })
            .collect();
        let right = match (&f.right, &t1.module.right) {
            (Some(a), Some(b)) => Some(a.iter().zip(b).map(|(x, y)| Mat::block_diag(&[x, y])).collect()),
            _ => None,
        };
        let module = Module::new(format!("J1({})", f.label), f.dim + t1.dim(), left, right);
        Ok(Jet1 { base, module, forms: OnceLock::new() })
    }

    pub fn base(&self) -> &Arc<FormBundle> {
        &self.base
    }

    pub fn module(&self) -> &Module {
        &self.module
    }

    /// Forms with values in `J^1 F`.
    pub fn forms(&self) -> &Arc<FormBundle> {
        self.forms.get_or_init(|| Arc::new(FormBundle::new(self.base.calculus(), self.module.clone())))
    }

    fn split(&self) -> (usize, usize) {
        let f = self.base.module().dim;
        (f, self.module.dim - f)
    }

    /// `π(x, ω) = x`.
    pub fn pi(&self) -> Mat {
        let (f, w) = self.split();
        Mat::hstack(&[&Mat::identity(f), &Mat::zeros(f, w)])
    }

    /// `ρ(x, ω) = ω`.
    pub fn rho(&self) -> Mat {
        let (f, w) = self.split();
        Mat::hstack(&[&Mat::zeros(w, f), &Mat::identity(w)])
    }

    /// `ι^1(ω) = (0, ω)`.
    pub fn iota(&self) -> Mat {
        self.rho().transpose()
    }

    /// `j^1(x) = (x, 0)`.
    pub fn prolong(&self) -> Mat {
        self.pi().transpose()
    }

    /// `J^1(f) = f ⊕ Ω^1(f)` for a left-linear `f : F -> G`.
    pub fn functor(&self, target: &Jet1, f: &Mat) -> Result<Mat> {
        let w = self.base.apply(1, &target.base, f)?;
        Ok(Mat::block_diag(&[f, &w]))
    }
}

/// The two obstruction maps on `J^1 J^1 F`.
pub struct DTilde {
    /// `(ξ, α) ↦ Ω^1(π)(α) - ρ(ξ)`, into `Ω^1 F`.
    pub one: Mat,
    /// `(ξ, α) ↦ Σ dω ⊗ π(η) + ω ∧ ρ(η)` for `α = Σ ω ⊗ η`, into `Ω^2 F`.
    pub two: Mat,
}

impl DTilde {
    pub fn stacked(&self) -> Mat {
        Mat::vstack(&[&self.one, &self.two])
    }
}

/// Obstruction maps for `inner = J^1 F`, `outer = J^1(J^1 F)`.
pub fn d_tilde(inner: &Jet1, outer: &Jet1) -> Result<DTilde> {
    let f = inner.base();
    let calc = f.calculus();
    let (pi, rho) = (inner.pi(), inner.rho());
    let xi = inner.module.dim;
    let w1 = outer.base().apply(1, f, &pi)?;
    let one = Mat::hstack(&[&rho.neg(), &w1]);
    let t1j = outer.base().tensor(1)?;
    let t2f = f.tensor(2)?;
    let a = t2f.q.mul(&calc.d(1)?.kron(&pi));
    let b = f.wedge_plain(1, 1)?.mul(&Mat::identity(calc.dim(1)).kron(&rho));
    let second = t1j.descend(&a.add(&b), "second obstruction map")?;
    let two = Mat::hstack(&[&Mat::zeros(second.rows(), xi), &second]);
    Ok(DTilde { one, two })
}

/// Which obstruction maps cut out a jet space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Nonholonomic,
    Sesquiholonomic,
    Holonomic,
}

/// One order of the holonomic tower.
pub struct JetLevel {
    pub n: usize,
    pub forms: Arc<FormBundle>,
    /// `J^1 J^{n-1}`; absent at order 0.
    pub pair: Option<Arc<Jet1>>,
    /// Jets inside `pair`.
    pub carrier: Subspace,
    /// Inclusion into `pair`.
    pub l: Mat,
    /// `π^{n,n-1}`.
    pub pi: Mat,
    /// `ρ ∘ l`, into `Ω^1 J^{n-1}`.
    pub rho_l: Mat,
    /// `j^n`, from `E`.
    pub prolong: Mat,
    /// `D̃^I ∘ J^1(l)` and `D̃^II ∘ J^1(l)` on `pair` (order ≥ 2).
    pub obstruction: Option<DTilde>,
}

impl JetLevel {
    pub fn module(&self) -> &Module {
        self.forms.module()
    }

    pub fn dim(&self) -> usize {
        self.forms.module().dim
    }
}

/// Sesquiholonomic jets of order `n ≥ 2` inside `J^1 J^{n-1}`.
pub struct SesquiLevel {
    pub n: usize,
    pub forms: Arc<FormBundle>,
    pub carrier: Subspace,
    pub l: Mat,
    /// Inclusion of holonomic jets.
    pub t: Mat,
}

/// `S^h E` inside `Ω^1 ⊗ S^{h-1} E`.
pub struct SymLevel {
    pub h: usize,
    pub forms: Arc<FormBundle>,
    /// Forms with values in `Ω^1 S^{h-1}`; absent at `h = 0`.
    pub ambient: Option<Arc<FormBundle>>,
    pub carrier: Subspace,
    /// `ι_∧ : S^h -> Ω^1 S^{h-1}`.
    pub incl: Mat,
    /// `ι^h : S^h -> J^h`.
    pub iota: Mat,
}

impl SymLevel {
    pub fn dim(&self) -> usize {
        self.forms.module().dim
    }
}

/// Holonomic jets, symmetric forms and sesquiholonomic jets of `E` up to
/// a fixed order.
pub struct JetTower {
    calc: Arc<Calculus>,
    levels: Vec<JetLevel>,
    syms: Vec<SymLevel>,
    sesqui: Vec<Option<SesquiLevel>>,
    outer: Vec<Option<Arc<Jet1>>>,
}

impl JetTower {
    /// Builds orders `0..=order`.
    pub fn build(calc: &Arc<Calculus>, e: Module, order: usize) -> Result<JetTower> {
        if order >= 2 {
            calc.check_degree(2)?;
        }
        let e_forms = Arc::new(FormBundle::new(calc, e.clone()));
        let id = Mat::identity(e.dim);
        let level0 = JetLevel {
            n: 0,
            forms: e_forms.clone(),
            pair: None,
            carrier: Subspace::full(e.dim),
            l: id.clone(),
            pi: Mat::zeros(0, e.dim),
            rho_l: Mat::zeros(0, e.dim),
            prolong: id.clone(),
            obstruction: None,
        };
        let sym0 = SymLevel {
            h: 0,
            forms: e_forms.clone(),
            ambient: None,
            carrier: Subspace::full(e.dim),
            incl: Mat::zeros(0, e.dim),
            iota: id,
        };
        let mut tower = JetTower { calc: calc.clone(), levels: vec![level0], syms: vec![sym0], sesqui: vec![None], outer: vec![None] };
        for n in 1..=order {
            tower.push_level()?;
            tower.push_sym(n)?;
        }
        Ok(tower)
    }

    pub fn calculus(&self) -> &Arc<Calculus> {
        &self.calc
    }

    pub fn order(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> Result<&JetLevel> {
        self.levels.get(n).ok_or_else(|| Error::Invalid(format!("jets built to order {} only, {n} requested", self.order())))
    }

    pub fn sym(&self, h: usize) -> Result<&SymLevel> {
        self.syms.get(h).ok_or_else(|| Error::Invalid(format!("symmetric forms built to order {} only", self.order())))
    }

    /// `J^1(J^1 J^{n-2})`, the space in which the obstruction maps of
    /// order `n` live.
    pub fn outer(&self, n: usize) -> Option<&Arc<Jet1>> {
        self.outer.get(n).and_then(|o| o.as_ref())
    }

    /// Sesquiholonomic jets; orders below 2 coincide with holonomic jets.
    pub fn sesqui(&self, n: usize) -> Result<&SesquiLevel> {
        self.sesqui
            .get(n)
            .and_then(|s| s.as_ref())
            .ok_or_else(|| Error::Invalid(format!("no sesquiholonomic level of order {n}")))
    }

    fn push_level(&mut self) -> Result<()> {
        let n = self.levels.len();
        let prev = &self.levels[n - 1];
        let pair = Arc::new(Jet1::new(prev.forms.clone())?);
        let pm = pair.module().clone();
        let (carrier, obstruction, outer, sesqui_carrier) = if n == 1 {
            (Subspace::full(pm.dim), None, None, None)
        } else {
            let inner = self.levels[n - 1].pair.clone().unwrap();
            let outer = Arc::new(Jet1::new(Arc::new(FormBundle::new(&self.calc, inner.module().clone())))?);
            let dt = d_tilde(&inner, &outer)?;
            let jl = pair.functor(&outer, &prev.l)?;
            let obs = DTilde { one: dt.one.mul(&jl), two: dt.two.mul(&jl) };
            let hol = kernel_of(&obs.stacked());
            let ses = kernel_of(&obs.one);
            (hol, Some(obs), Some(outer), Some(ses))
        };
        let module = pm.restrict(&carrier, format!("J{n}"))?;
        let l = carrier.inclusion();
        let pi = pair.pi().mul(&l);
        let rho_l = pair.rho().mul(&l);
        let prolong_pair = pair.prolong().mul(&prev.prolong);
        if !carrier.contains_cols(&prolong_pair) {
            return Err(Error::Check(format!("prolongation of order {n} is not holonomic")));
        }
        let prolong = carrier.coords_of(&prolong_pair);
        let forms = Arc::new(FormBundle::new(&self.calc, module));
        let sesqui = match sesqui_carrier {
            Some(ses) => {
                let smod = pm.restrict(&ses, format!("J{{{{{n}}}}}"))?;
                if !ses.contains_subspace(&carrier) {
                    return Err(Error::Check(format!("holonomic jets of order {n} are not sesquiholonomic")));
                }
                Some(SesquiLevel {
                    n,
                    forms: Arc::new(FormBundle::new(&self.calc, smod)),
                    t: ses.coords_of(&l),
                    l: ses.inclusion(),
                    carrier: ses,
                })
            }
            None => None,
        };
        self.levels.push(JetLevel { n, forms, pair: Some(pair), carrier, l, pi, rho_l, prolong, obstruction });
        self.sesqui.push(sesqui);
        self.outer.push(outer);
        Ok(())
    }

    fn push_sym(&mut self, h: usize) -> Result<()> {
        let prev = &self.syms[h - 1];
        let t1 = prev.forms.tensor(1)?;
        let ambient = Arc::new(FormBundle::new(&self.calc, t1.module.clone()));
        let (carrier, module) = if h == 1 {
            (Subspace::full(t1.dim()), t1.module.clone().relabel("S1"))
        } else {
            let pp = &self.syms[h - 2];
            let prev_ambient = prev.ambient.as_ref().unwrap();
            let lifted = prev.forms.apply(1, prev_ambient, &prev.incl)?;
            let map = pp.forms.wedge(1, 1, prev_ambient)?.mul(&lifted);
            let c = kernel_of(&map);
            let m = t1.module.restrict(&c, format!("S{h}"))?;
            (c, m)
        };
        let incl = carrier.inclusion();
        let forms = Arc::new(FormBundle::new(&self.calc, module));
        let lv = &self.levels[h];
        let pair = lv.pair.as_ref().unwrap();
        let lifted = prev.forms.apply(1, &self.levels[h - 1].forms, &prev.iota)?;
        let in_pair = pair.iota().mul(&lifted).mul(&incl);
        if !lv.carrier.contains_cols(&in_pair) {
            return Err(Error::Check(format!("symbol inclusion of order {h} leaves the jet space")));
        }
        let iota = lv.carrier.coords_of(&in_pair);
        self.syms.push(SymLevel { h, forms, ambient: Some(ambient), carrier, incl, iota });
        Ok(())
    }
}

/// Nonholonomic jets: `P^n = J^1(P^{n-1})`, all of it.
pub struct NonholonomicTower {
    pub levels: Vec<Arc<Jet1>>,
    pub base: Arc<FormBundle>,
}

impl NonholonomicTower {
    pub fn build(calc: &Arc<Calculus>, e: Module, order: usize) -> Result<NonholonomicTower> {
        let base = Arc::new(FormBundle::new(calc, e));
        let mut levels: Vec<Arc<Jet1>> = Vec::new();
        for _ in 0..order {
            let under = match levels.last() {
                Some(j) => j.forms().clone(),
                None => base.clone(),
            };
            levels.push(Arc::new(Jet1::new(under)?));
        }
        Ok(NonholonomicTower { levels, base })
    }

    pub fn dim(&self, n: usize) -> usize {
        if n == 0 {
            self.base.module().dim
        } else {
            self.levels[n - 1].module().dim
        }
    }

    /// `j^n : E -> P^n`.
    pub fn prolong(&self, n: usize) -> Mat {
        let mut j = Mat::identity(self.base.module().dim);
        for lv in &self.levels[..n] {
            j = lv.prolong().mul(&j);
        }
        j
    }

    /// `π : P^n -> P^{n-1}`.
    pub fn pi(&self, n: usize) -> Mat {
        self.levels[n - 1].pi()
    }
}

/// `A`-span of the prolongations inside `J^n`.
pub fn elemental_span(tower: &JetTower, n: usize) -> Result<Subspace> {
    let lv = tower.level(n)?;
    let gens = (0..lv.prolong.cols()).map(|c| lv.prolong.col(c)).collect();
    Ok(sub_bimodule(&lv.module().as_left(), gens))
}

/// Verdicts on `0 -> S^n -> J^n -> J^{n-1} -> 0` at one order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub n: usize,
    pub dim_sym: usize,
    pub dim_jet: usize,
    pub dim_prev: usize,
    pub pi_surjective: bool,
    pub iota_injective: bool,
    pub image_is_kernel: bool,
    pub composite_zero: bool,
    /// Carrier meets `J^{n-1} ⊕ 0` exactly in the prolongations.
    pub pullback: bool,
    pub pullback_dim: usize,
}

impl ExactnessReport {
    pub fn exact(&self) -> bool {
        self.pi_surjective && self.iota_injective && self.image_is_kernel && self.composite_zero && self.dim_jet == self.dim_sym + self.dim_prev
    }
}

pub fn exactness_report(tower: &JetTower, n: usize) -> Result<ExactnessReport> {
    if n == 0 {
        return Err(Error::Invalid("exactness starts at order 1".into()));
    }
    let lv = tower.level(n)?;
    let sym = tower.sym(n)?;
    let prev = tower.level(n - 1)?;
    let pair = lv.pair.as_ref().unwrap();
    let ker_pi = kernel_of(&lv.pi);
    let im_iota = Subspace::column_space(&sym.iota);
    let zero_part = Subspace::column_space(&pair.prolong());
    let meet = lv.carrier.intersect(&zero_part)?;
    let expected = Subspace::column_space(&lv.l.mul(&lv.prolong));
    Ok(ExactnessReport {
        n,
        dim_sym: sym.dim(),
        dim_jet: lv.dim(),
        dim_prev: prev.dim(),
        pi_surjective: lv.pi.rank() == prev.dim(),
        iota_injective: sym.iota.rank() == sym.dim(),
        image_is_kernel: ker_pi == im_iota,
        composite_zero: lv.pi.mul(&sym.iota).is_zero(),
        pullback: meet == expected,
        pullback_dim: meet.dim(),
    })
}

/// `δ^{h,k} : Ω^k S^h -> Ω^{k+1} S^{h-1}`, `(-1)^k (∧ ⊗ id) ∘ (id ⊗ ι_∧)`.
pub fn delta(tower: &JetTower, h: usize, k: usize) -> Result<Mat> {
    if h == 0 {
        return Err(Error::Invalid("δ needs symmetric degree at least 1".into()));
    }
    tower.calc.check_degree(k + 1)?;
    let sym = tower.sym(h)?;
    let lower = tower.sym(h - 1)?;
    let ambient = sym.ambient.as_ref().unwrap();
    let lifted = sym.forms.apply(k, ambient, &sym.incl)?;
    let w = lower.forms.wedge(k, 1, ambient)?;
    let m = w.mul(&lifted);
    Ok(if k % 2 == 0 { m } else { m.neg() })
}
