//! Left and bimodule connections, torsion, curvature, and higher-order
//! connections on jet modules.

use std::sync::Arc;

use crate::algebra::{is_bilinear, is_left_linear, Module};
use crate::calculus::{Calculus, FormBundle};
use crate::error::{Error, Result};
use crate::jets::{delta, JetTower};
use crate::linalg::{kron_vec, right_inverse, solve_left, Mat, MatSolution, MatSystem, Rat, Subspace, Term};
use crate::spencer::{spencer, spencer_generic};

/// `d(e_a) ⊗ -` as a map `X -> Ω^1 ⊗_A X`.
fn da_tensor(forms: &FormBundle, a: usize) -> Result<Mat> {
    let calc = forms.calculus();
    let t1 = forms.tensor(1)?;
    let da = Mat::column_vec(&calc.d(0)?.col(a));
    Ok(t1.q.mul(&da.kron(&Mat::identity(forms.module().dim))))
}

/// Algebra basis indices at which `∇(a x) = a ∇x + da ⊗ x` fails.
pub fn leibniz_defects(forms: &FormBundle, nabla: &Mat) -> Result<Vec<usize>> {
    let t1 = forms.tensor(1)?;
    let x = forms.module();
    if nabla.shape() != (t1.dim(), x.dim) {
        return Err(Error::Invalid(format!("connection matrix is {:?}, expected {:?}", nabla.shape(), (t1.dim(), x.dim))));
    }
    let mut bad = Vec::new();
    for a in 0..forms.calculus().algebra().dim() {
        let lhs = nabla.mul(&x.left[a]).sub(&t1.module.left[a].mul(nabla));
        if lhs != da_tensor(forms, a)? {
            bad.push(a);
        }
    }
    Ok(bad)
}

/// A left connection `∇ : X -> Ω^1 ⊗_A X`.
#[derive(Clone)]
pub struct Connection {
    pub forms: Arc<FormBundle>,
    pub matrix: Mat,
}

impl std::fmt::Debug for Connection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Connection on {}: {:?}", self.forms.module().label, self.matrix)
    }
}

impl Connection {
    /// Checks the Leibniz rule on every basis pair.
    pub fn new(forms: Arc<FormBundle>, matrix: Mat) -> Result<Connection> {
        let bad = leibniz_defects(&forms, &matrix)?;
        if !bad.is_empty() {
            return Err(Error::Check(format!(
                "Leibniz rule fails on {} for algebra basis elements {bad:?}",
                forms.module().label
            )));
        }
        Ok(Connection { forms, matrix })
    }

    pub fn module(&self) -> &Module {
        self.forms.module()
    }

    /// `d_∇ : Ω^m ⊗ X -> Ω^{m+1} ⊗ X`, `ω ⊗ x ↦ dω ⊗ x + (-1)^m ω ∧ ∇x`.
    pub fn covariant_exterior(&self, m: usize) -> Result<Mat> {
        let id = Mat::identity(self.module().dim);
        spencer_generic(&self.forms, &self.forms, &id, &self.matrix.neg(), m)
    }

    /// `R_∇ = d_∇ ∘ ∇ : X -> Ω^2 ⊗ X`.
    pub fn curvature(&self) -> Result<Mat> {
        let r = self.covariant_exterior(1)?.mul(&self.matrix);
        if !is_left_linear(&r, self.module(), &self.forms.tensor(2)?.module) {
            return Err(Error::Check("curvature is not left A-linear".into()));
        }
        Ok(r)
    }

    pub fn is_flat(&self) -> Result<bool> {
        Ok(self.curvature()?.is_zero())
    }
}

/// The affine space of left connections on a module.
pub struct ConnectionSpace {
    forms: Arc<FormBundle>,
    sol: MatSolution,
}

impl ConnectionSpace {
    pub fn is_empty(&self) -> bool {
        self.sol.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.sol.dim()
    }

    pub fn representative(&self) -> Option<Connection> {
        self.sol.particular(0).map(|m| Connection { forms: self.forms.clone(), matrix: m })
    }

    /// Basis of the space of left-linear maps `X -> Ω^1 ⊗ X`.
    pub fn direction(&self) -> Vec<Mat> {
        self.sol.direction(0)
    }

    pub fn contains(&self, nabla: &Mat) -> bool {
        self.sol.contains(&[nabla])
    }
}

pub fn solve_left_connections(forms: &Arc<FormBundle>) -> Result<ConnectionSpace> {
    let t1 = forms.tensor(1)?;
    let x = forms.module();
    let mut sys = MatSystem::new();
    let u = sys.unknown(t1.dim(), x.dim);
    for a in 0..forms.calculus().algebra().dim() {
        let rhs = da_tensor(forms, a)?;
        sys.equation(&[Term::new(u, None, Some(&x.left[a])), Term::new(u, Some(&t1.module.left[a]), None).neg()], &rhs);
    }
    Ok(ConnectionSpace { forms: forms.clone(), sol: sys.solve() })
}

/// `Ω^1` viewed as a module with its own form bundle.
pub fn omega1_bundle(calc: &Arc<Calculus>) -> Result<Arc<FormBundle>> {
    Ok(Arc::new(FormBundle::new(calc, calc.omega(1)?.clone().relabel("Ω1"))))
}

/// A left connection on `Ω^1` with a bilinear `σ` on `Ω^1 ⊗_A Ω^1` such that
/// `∇(ω a) = (∇ω) a + σ(ω ⊗ da)`.
#[derive(Clone, Debug)]
pub struct BimoduleConnection {
    pub base: Connection,
    pub sigma: Mat,
}

/// `ω ⊗ d(e_a)` as a map `Ω^1 -> Ω^1 ⊗_A Ω^1`.
fn tensor_da(forms: &FormBundle, a: usize) -> Result<Mat> {
    let calc = forms.calculus();
    let t1 = forms.tensor(1)?;
    let da = Mat::column_vec(&calc.d(0)?.col(a));
    Ok(t1.q.mul(&Mat::identity(calc.dim(1)).kron(&da)))
}

/// Violations of the right Leibniz rule and of bilinearity of `σ`.
pub fn bimodule_defects(b: &BimoduleConnection) -> Result<Vec<String>> {
    let forms = &b.base.forms;
    let t1 = forms.tensor(1)?;
    let om = forms.module();
    let right = om.right.as_ref().ok_or_else(|| Error::Invalid("Ω1 has no right action".into()))?;
    let tr = t1.module.right.as_ref().ok_or_else(|| Error::Invalid("Ω1 ⊗ Ω1 has no right action".into()))?;
    let mut out = Vec::new();
    if !leibniz_defects(forms, &b.base.matrix)?.is_empty() {
        out.push("left Leibniz rule".to_string());
    }
    for a in 0..forms.calculus().algebra().dim() {
        let lhs = b.base.matrix.mul(&right[a]).sub(&tr[a].mul(&b.base.matrix));
        if lhs != b.sigma.mul(&tensor_da(forms, a)?) {
            out.push(format!("right Leibniz rule at basis element {a}"));
        }
    }
    if !is_bilinear(&b.sigma, &t1.module, &t1.module) {
        out.push("σ is not bilinear".to_string());
    }
    Ok(out)
}

/// The affine space of bimodule connections on `Ω^1`, solved jointly in `(∇, σ)`.
pub struct BimoduleSpace {
    forms: Arc<FormBundle>,
    sol: MatSolution,
}

impl BimoduleSpace {
    pub fn is_empty(&self) -> bool {
        self.sol.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.sol.dim()
    }

    pub fn representative(&self) -> Option<BimoduleConnection> {
        let n = self.sol.particular(0)?;
        let s = self.sol.particular(1)?;
        Some(BimoduleConnection { base: Connection { forms: self.forms.clone(), matrix: n }, sigma: s })
    }

    pub fn direction(&self) -> Vec<(Mat, Mat)> {
        self.sol.direction(0).into_iter().zip(self.sol.direction(1)).collect()
    }

    pub fn contains(&self, b: &BimoduleConnection) -> bool {
        self.sol.contains(&[&b.base.matrix, &b.sigma])
    }
}

/// Which connections on `Ω^1` the bimodule solver ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Ansatz {
    /// Every left connection.
    #[default]
    General,
    /// `∇θ_s = Σ c_{s,p,q} θ_p ⊗ θ_q` with scalar `c` on the declared frame.
    FrameConstant,
}

pub fn solve_bimodule_connections(calc: &Arc<Calculus>, ansatz: Ansatz) -> Result<BimoduleSpace> {
    let forms = omega1_bundle(calc)?;
    let t1 = forms.tensor(1)?;
    let om = forms.module();
    let right = om.right.as_ref().ok_or_else(|| Error::Invalid("Ω1 has no right action".into()))?;
    let tl = &t1.module.left;
    let tr = t1.module.right.as_ref().ok_or_else(|| Error::Invalid("Ω1 ⊗ Ω1 has no right action".into()))?;
    let (p, w) = (t1.dim(), om.dim);
    let mut sys = MatSystem::new();
    let n = sys.unknown(p, w);
    let s = sys.unknown(p, p);
    let zero_pw = Mat::zeros(p, w);
    let zero_pp = Mat::zeros(p, p);
    for a in 0..calc.algebra().dim() {
        let da = da_tensor(&forms, a)?;
        sys.equation(&[Term::new(n, None, Some(&om.left[a])), Term::new(n, Some(&tl[a]), None).neg()], &da);
        let tda = tensor_da(&forms, a)?;
        sys.equation(
            &[Term::new(n, None, Some(&right[a])), Term::new(n, Some(&tr[a]), None).neg(), Term::new(s, None, Some(&tda)).neg()],
            &zero_pw,
        );
        sys.equation(&[Term::new(s, None, Some(&tl[a])), Term::new(s, Some(&tl[a]), None).neg()], &zero_pp);
        sys.equation(&[Term::new(s, None, Some(&tr[a])), Term::new(s, Some(&tr[a]), None).neg()], &zero_pp);
    }
    if ansatz == Ansatz::FrameConstant {
        let frame = calc.frame().ok_or_else(|| Error::Invalid("frame-constant ansatz needs a declared frame".into()))?;
        let r = frame.len();
        let theta = Mat::from_cols(frame, w);
        let pairs: Vec<Vec<Rat>> = frame.iter().flat_map(|x| frame.iter().map(|y| t1.q.mul_vec(&kron_vec(x, y)))).collect();
        let b = Mat::from_cols(&pairs, p);
        let c = sys.unknown(r * r, r);
        sys.equation(&[Term::new(n, None, Some(&theta)), Term::new(c, Some(&b), None).neg()], &Mat::zeros(p, r));
    }
    Ok(BimoduleSpace { forms, sol: sys.solve() })
}

/// `T_∇ = ∧ ∘ ∇ - d : Ω^1 -> Ω^2`.
pub fn torsion(conn: &Connection) -> Result<Mat> {
    let calc = conn.forms.calculus();
    let t1 = conn.forms.tensor(1)?;
    if conn.module().dim != calc.dim(1) {
        return Err(Error::Invalid("torsion needs a connection on Ω1".into()));
    }
    let wedge = t1.descend(&*calc.wedge_plain(1, 1)?, "wedge on Ω1 ⊗ Ω1")?;
    Ok(wedge.mul(&conn.matrix).sub(calc.d(1)?))
}

/// `∇(ω ⊗ f) = ∇ω ⊗ f + (σ ⊗ id)(ω ⊗ ∇f)` on `Ω^1 ⊗_A F`.
pub fn tensor_connection(b: &BimoduleConnection, f: &Connection) -> Result<Connection> {
    let calc = f.forms.calculus().clone();
    let p = b.base.forms.tensor(1)?;
    let f1 = f.forms.tensor(1)?;
    let g = Arc::new(FormBundle::new(&calc, f1.module.clone()));
    let t3 = g.tensor(1)?;
    let (w, fd) = (calc.dim(1), f.module().dim);
    let idf = Mat::identity(fd);
    let idw = Mat::identity(w);
    let regroup = t3.q.mul(&idw.kron(&f1.q));
    let first = p.s.mul(&b.base.matrix).kron(&idf);
    let second = p.s.mul(&b.sigma).mul(&p.q).kron(&idf).mul(&idw.kron(&f1.s.mul(&f.matrix)));
    let plain = regroup.mul(&first.add(&second));
    let m = f1.descend(&plain, "tensor connection")?;
    Connection::new(g, m)
}

/// `(∇ ⊗ id) g + (σ ⊗ id)(id ⊗ ∇) g` for `g ∈ Ω^1 ⊗_A Ω^1`.
pub fn metric_compat(b: &BimoduleConnection, g: &[Rat]) -> Result<Vec<Rat>> {
    let t = tensor_connection(b, &b.base)?;
    Ok(t.matrix.mul_vec(g))
}

/// `θ_1 ⊗ θ_2 - θ_2 ⊗ θ_1` for a two-element frame, when it lies in `ker ∧`.
pub fn frame_metric(calc: &Arc<Calculus>) -> Result<Option<Vec<Rat>>> {
    let Some(frame) = calc.frame() else { return Ok(None) };
    if frame.len() != 2 || calc.max_degree() < 2 {
        return Ok(None);
    }
    let p = omega1_bundle(calc)?.tensor(1)?;
    let a = kron_vec(&frame[0], &frame[1]);
    let b = kron_vec(&frame[1], &frame[0]);
    let plain: Vec<Rat> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
    let g = p.q.mul_vec(&plain);
    let wedge = p.descend(&*calc.wedge_plain(1, 1)?, "wedge on Ω1 ⊗ Ω1")?;
    Ok(if wedge.mul_vec(&g).iter().all(Rat::is_zero) { Some(g) } else { None })
}

/// An `n`-connection: a left-linear section `C` of `π : J^n -> J^{n-1}` with
/// its left split `∇̃ : J^n -> S^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct HigherConnection {
    pub n: usize,
    pub c: Mat,
    pub split: Mat,
}

impl HigherConnection {
    fn verify(tower: &JetTower, n: usize, c: &Mat, split: &Mat) -> Result<()> {
        let jn = tower.level(n)?;
        let jp = tower.level(n - 1)?;
        let s = tower.sym(n)?;
        if !is_left_linear(c, jp.module(), jn.module()) {
            return Err(Error::Check(format!("{n}-connection is not left A-linear")));
        }
        if !is_left_linear(split, jn.module(), s.forms.module()) {
            return Err(Error::Check(format!("left split of order {n} is not left A-linear")));
        }
        let whole = c.mul(&jn.pi).add(&s.iota.mul(split));
        if jn.pi.mul(c) != Mat::identity(jp.dim()) || split.mul(&s.iota) != Mat::identity(s.dim()) || whole != Mat::identity(jn.dim()) {
            return Err(Error::Check(format!("section and split of order {n} are not complementary")));
        }
        Ok(())
    }

    pub fn from_section(tower: &JetTower, n: usize, c: Mat) -> Result<HigherConnection> {
        if n == 0 {
            return Err(Error::Invalid("connections have order at least 1".into()));
        }
        let iota = &tower.sym(n)?.iota;
        let phi = Mat::hstack(&[&c, iota]);
        if phi.rows() != phi.cols() {
            return Err(Error::NotExact(n));
        }
        let inv = right_inverse(&phi).ok_or(Error::NotExact(n))?;
        let split = inv.block(c.cols(), 0, iota.cols(), inv.cols());
        Self::verify(tower, n, &c, &split)?;
        Ok(HigherConnection { n, c, split })
    }

    pub fn from_split(tower: &JetTower, n: usize, split: Mat) -> Result<HigherConnection> {
        if n == 0 {
            return Err(Error::Invalid("connections have order at least 1".into()));
        }
        let pi = &tower.level(n)?.pi;
        let psi = Mat::vstack(&[pi, &split]);
        if psi.rows() != psi.cols() {
            return Err(Error::NotExact(n));
        }
        let inv = right_inverse(&psi).ok_or(Error::NotExact(n))?;
        let c = inv.block(0, 0, inv.rows(), pi.rows());
        Self::verify(tower, n, &c, &split)?;
        Ok(HigherConnection { n, c, split })
    }

    /// The 1-connection with left split `∇ ∘ π + ρ`.
    pub fn from_connection(tower: &JetTower, conn: &Connection) -> Result<HigherConnection> {
        let j1 = tower.level(1)?;
        let pair = j1.pair.as_ref().unwrap();
        let split = conn.matrix.mul(&pair.pi()).add(&pair.rho()).mul(&j1.l);
        Self::from_split(tower, 1, split)
    }

    /// `Ω^m(C) : Ω^m J^{n-1} -> Ω^m J^n`.
    pub fn section_forms(&self, tower: &JetTower, m: usize) -> Result<Mat> {
        tower.level(self.n - 1)?.forms.apply(m, &tower.level(self.n)?.forms, &self.c)
    }

    /// `d_C = S^{n,m} ∘ Ω^m(C)`.
    pub fn exterior(&self, tower: &JetTower, m: usize) -> Result<Mat> {
        Ok(spencer(tower, self.n, m)?.mul(&self.section_forms(tower, m)?))
    }
}

/// All `n`-connections: a canonical one and the left-linear maps
/// `J^{n-1} -> J^n` by which any two differ.
pub fn solve_higher_connections(tower: &JetTower, n: usize) -> Result<(Option<HigherConnection>, Vec<Mat>)> {
    if n == 0 {
        return Err(Error::Invalid("connections have order at least 1".into()));
    }
    let jn = tower.level(n)?;
    let jp = tower.level(n - 1)?;
    let mut sys = MatSystem::new();
    let c = sys.unknown(jn.dim(), jp.dim());
    sys.equation(&[Term::new(c, Some(&jn.pi), None)], &Mat::identity(jp.dim()));
    let zero = Mat::zeros(jn.dim(), jp.dim());
    for a in 0..tower.calculus().algebra().dim() {
        sys.equation(&[Term::new(c, None, Some(&jp.module().left[a])), Term::new(c, Some(&jn.module().left[a]), None).neg()], &zero);
    }
    let sol = sys.solve();
    let hc = match sol.particular(c) {
        Some(m) => Some(HigherConnection::from_section(tower, n, m)?),
        None => None,
    };
    Ok((hc, sol.direction(c)))
}

/// `R_C = -D̃^II ∘ J^1(l) ∘ J^1(C) ∘ l ∘ C : J^{n-1} -> Ω^2 J^{n-1}`; needs
/// jets of order `n + 1`.
pub fn higher_curvature(tower: &JetTower, hc: &HigherConnection) -> Result<Mat> {
    let n = hc.n;
    let lv = tower.level(n)?;
    let up = tower.level(n + 1)?;
    let two = &up.obstruction.as_ref().ok_or_else(|| Error::Invalid("curvature needs the next jet order".into()))?.two;
    let jc = lv.pair.as_ref().unwrap().functor(up.pair.as_ref().unwrap(), &hc.c)?;
    let r = two.mul(&jc).mul(&lv.l).mul(&hc.c).neg();
    let prev = tower.level(n - 1)?;
    if !is_left_linear(&r, prev.module(), &prev.forms.tensor(2)?.module) {
        return Err(Error::Check(format!("curvature of the {n}-connection is not left A-linear")));
    }
    Ok(r)
}

/// Whether `R_C` takes values in `Ω^2 S^{n-1}`.
pub fn curvature_in_symbols(tower: &JetTower, hc: &HigherConnection) -> Result<bool> {
    let r = higher_curvature(tower, hc)?;
    let s = tower.sym(hc.n - 1)?;
    let inc = s.forms.apply(2, &tower.level(hc.n - 1)?.forms, &s.iota)?;
    Ok(Subspace::column_space(&inc).contains_cols(&r))
}

/// `∇^C = S^{n,0} ∘ C`, a connection on `J^{n-1}`.
pub fn associated_connection(tower: &JetTower, hc: &HigherConnection) -> Result<Connection> {
    Connection::new(tower.level(hc.n - 1)?.forms.clone(), hc.exterior(tower, 0)?)
}

/// The unique `n`-connection whose associated connection is `conn`.
pub fn higher_from_jet_connection(tower: &JetTower, n: usize, conn: &Connection) -> Result<HigherConnection> {
    if n == 0 {
        return Err(Error::Invalid("connections have order at least 1".into()));
    }
    let prev = tower.level(n - 1)?;
    if conn.module().dim != prev.dim() {
        return Err(Error::Invalid(format!("connection is not on jets of order {}", n - 1)));
    }
    if n >= 2 {
        let low = tower.level(n - 2)?;
        let lhs = prev.forms.apply(1, &low.forms, &prev.pi)?.mul(&conn.matrix);
        if lhs != spencer(tower, n - 1, 0)? {
            return Err(Error::Hypothesis("(i): Ω1(π) ∘ ∇ differs from the Spencer operator".into()));
        }
        let s = tower.sym(n - 1)?;
        let inc = s.forms.apply(2, &prev.forms, &s.iota)?;
        if !Subspace::column_space(&inc).contains_cols(&conn.curvature()?) {
            return Err(Error::Hypothesis("(ii): curvature does not take values in Ω2 of the symbol module".into()));
        }
    }
    let jn = tower.level(n)?;
    let sp = spencer(tower, n, 0)?;
    let stacked = Mat::vstack(&[&sp, &jn.pi]);
    if stacked.rank() != jn.dim() {
        return Err(Error::NonUniqueLift(n));
    }
    let rhs = Mat::vstack(&[&conn.matrix, &Mat::identity(prev.dim())]);
    let ct = solve_left(&stacked.transpose(), &rhs.transpose())
        .ok_or_else(|| Error::Unsolvable(format!("connection does not factor through jets of order {n}")))?;
    HigherConnection::from_section(tower, n, ct.transpose())
}

/// `∇^J = Ω^1(C) ∘ S^{n,0} + Ω^1(ι^n) ∘ ∇^S ∘ ∇̃`, a connection on `J^n`.
pub fn jet_connection(tower: &JetTower, hc: &HigherConnection, sym_conn: &Connection) -> Result<Connection> {
    let n = hc.n;
    let jn = tower.level(n)?;
    let s = tower.sym(n)?;
    let a = hc.section_forms(tower, 1)?.mul(&spencer(tower, n, 0)?);
    let b = s.forms.apply(1, &jn.forms, &s.iota)?.mul(&sym_conn.matrix).mul(&hc.split);
    Connection::new(jn.forms.clone(), a.add(&b))
}

/// `∇^S = Ω^1(∇̃) ∘ ∇^J ∘ ι^n`, a connection on `S^n`.
pub fn sym_connection_from_jet(tower: &JetTower, hc: &HigherConnection, jet_conn: &Connection) -> Result<Connection> {
    let jn = tower.level(hc.n)?;
    let s = tower.sym(hc.n)?;
    let m = jn.forms.apply(1, &s.forms, &hc.split)?.mul(&jet_conn.matrix).mul(&s.iota);
    Connection::new(s.forms.clone(), m)
}

/// Verdicts of the block-matrix identities for a split jet sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockReport {
    /// `d_{∇^J}` is upper triangular with the expected blocks, per degree.
    pub exterior: Vec<bool>,
    /// Curvature of `∇^J` in block form.
    pub curvature: bool,
    /// `S^{n,m}` as `[d_C | -Ω^{m+1}(ι^{n-1}) ∘ δ^{n,m}]`, per degree.
    pub spencer: Vec<bool>,
}

impl BlockReport {
    pub fn pass(&self) -> bool {
        self.curvature && self.exterior.iter().all(|&b| b) && self.spencer.iter().all(|&b| b)
    }
}

/// Checks the block forms of `d_{∇^J}`, `R_{∇^J}` and `S^{n,m}` with respect
/// to `J^n = J^{n-1} ⊕ S^n`, for degrees `m` with `m + 1` forms available.
pub fn block_forms(tower: &JetTower, hc: &HigherConnection, sym_conn: &Connection) -> Result<BlockReport> {
    let calc = tower.calculus();
    let n = hc.n;
    let jn = tower.level(n)?;
    let jp = tower.level(n - 1)?;
    let s = tower.sym(n)?;
    let sl = tower.sym(n - 1)?;
    let nj = jet_connection(tower, hc, sym_conn)?;
    let phi = |m: usize| -> Result<Mat> {
        Ok(Mat::hstack(&[&hc.section_forms(tower, m)?, &s.forms.apply(m, &jn.forms, &s.iota)?]))
    };
    let psi = |m: usize| -> Result<Mat> {
        Ok(Mat::vstack(&[&jn.forms.apply(m, &jp.forms, &jn.pi)?, &jn.forms.apply(m, &s.forms, &hc.split)?]))
    };
    let off = |m: usize| -> Result<Mat> { Ok(sl.forms.apply(m + 1, &jp.forms, &sl.iota)?.mul(&delta(tower, n, m)?).neg()) };
    let mut exterior = Vec::new();
    let mut spencer_ok = Vec::new();
    for m in 0..calc.max_degree() {
        let dc = hc.exterior(tower, m)?;
        let o = off(m)?;
        let ds = sym_conn.covariant_exterior(m)?;
        let rows_s = s.forms.dim(m + 1)?;
        let lower = Mat::hstack(&[&Mat::zeros(rows_s, dc.cols()), &ds]);
        let expected = Mat::vstack(&[&Mat::hstack(&[&dc, &o]), &lower]);
        exterior.push(psi(m + 1)?.mul(&nj.covariant_exterior(m)?).mul(&phi(m)?) == expected);
        spencer_ok.push(spencer(tower, n, m)?.mul(&phi(m)?) == Mat::hstack(&[&dc, &o]));
    }
    let curvature = if calc.max_degree() >= 2 {
        let dc0 = hc.exterior(tower, 0)?;
        let dc1 = hc.exterior(tower, 1)?;
        let rc = dc1.mul(&dc0);
        let corner = dc1.mul(&off(0)?).add(&off(1)?.mul(&sym_conn.matrix));
        let rs = sym_conn.curvature()?;
        let lower = Mat::hstack(&[&Mat::zeros(rs.rows(), rc.cols()), &rs]);
        let expected = Mat::vstack(&[&Mat::hstack(&[&rc, &corner]), &lower]);
        psi(2)?.mul(&nj.curvature()?).mul(&phi(0)?) == expected
    } else {
        true
    };
    Ok(BlockReport { exterior, curvature, spencer: spencer_ok })
}
