//! End-to-end run on the quaternion fixture with every claim checked.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::Module;
use crate::calculus::Calculus;
use crate::connections::{bimodule_defects, frame_metric, metric_compat, solve_bimodule_connections, torsion, Ansatz};
use crate::error::Result;
use crate::fixtures;
use crate::jets::{elemental_span, exactness_report, JetTower};
use crate::linalg::{kron_vec, Mat, Rat};
use crate::quant::{
    braiding_retraction, exterior_connection, gs_add, graded, is_retraction, pair_to_sym_ambient, GradedSymbol,
    Quantization,
};
use crate::spencer::spencer_complex;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct DemoReport {
    pub claims: Vec<Claim>,
}

impl DemoReport {
    fn claim(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.claims.push(Claim { name: name.into(), pass, detail: detail.into() });
    }

    pub fn pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Claim> {
        self.claims.iter().find(|c| !c.pass)
    }
}

fn basis(n: usize, i: usize) -> Mat {
    Mat::column_vec(&crate::linalg::unit_vec(n, i))
}

fn fmt_vec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Runs the quaternion pipeline. With `corrupt`, the braiding is negated
/// before building the degree-two retraction, so the chain must fail.
pub fn quaternion_demo(corrupt: bool) -> Result<DemoReport> {
    let mut r = DemoReport::default();
    let calc: Arc<Calculus> = Arc::new(fixtures::calculus("quaternion")?);
    let alg = calc.algebra().clone();

    // bimodule connection
    let space = solve_bimodule_connections(&calc, Ansatz::FrameConstant)?;
    r.claim("bimodule connections: unique", space.dim() == Some(0), match space.dim() {
        Some(d) => format!("affine dimension {d}"),
        None => "no solution".into(),
    });
    let Some(mut b) = space.representative() else {
        r.claim("bimodule connections: exists", false, "no solution");
        return Ok(r);
    };
    let frame = calc.frame().unwrap().to_vec();
    let nabla_frame = frame.iter().all(|th| b.base.matrix.mul_vec(th).iter().all(Rat::is_zero));
    r.claim("∇di = ∇dj = 0", nabla_frame, "connection vanishes on the frame");
    let p = b.base.forms.tensor(1)?;
    let flip = (0..2).all(|s| {
        (0..2).all(|t| {
            let lhs = b.sigma.mul_vec(&p.q.mul_vec(&kron_vec(&frame[s], &frame[t])));
            let rhs: Vec<Rat> = p.q.mul_vec(&kron_vec(&frame[t], &frame[s])).iter().map(|x| -x).collect();
            lhs == rhs
        })
    });
    r.claim("σ(ω⊗ν) = −ν⊗ω on frame pairs", flip, "");
    r.claim("bimodule axioms", bimodule_defects(&b)?.is_empty(), "");
    r.claim("torsion = 0", torsion(&b.base)?.is_zero(), "");
    r.claim("curvature = 0", b.base.curvature()?.is_zero(), "");
    let g = frame_metric(&calc)?;
    let metric_ok = match &g {
        Some(g) => metric_compat(&b, g)?.iter().all(Rat::is_zero),
        None => false,
    };
    r.claim("∇g = 0", metric_ok, "g = di⊗dj − dj⊗di");

    // jets
    let tower = Arc::new(JetTower::build(&calc, Module::regular(&alg), 3)?);
    let jdims: Vec<usize> = (0..=3).map(|n| tower.level(n).map(|l| l.dim())).collect::<Result<_>>()?;
    r.claim("dim J^0..J^3 = (4, 12, 16, 16)", jdims == [4, 12, 16, 16], format!("{jdims:?}"));
    let sdims: Vec<usize> = (1..=3).map(|n| tower.sym(n).map(|s| s.dim())).collect::<Result<_>>()?;
    r.claim("dim S^1..S^3 = (8, 4, 0)", sdims == [8, 4, 0], format!("{sdims:?}"));
    for n in 1..=3 {
        let rep = exactness_report(&tower, n)?;
        r.claim(format!("jet sequence exact at order {n}"), rep.exact(), "");
        let el = elemental_span(&tower, n)?;
        r.claim(format!("elemental jets fill J^{n}"), el.dim() == tower.level(n)?.dim(), format!("{} of {}", el.dim(), tower.level(n)?.dim()));
    }
    for n in 2..=3 {
        let cx = spencer_complex(&tower, n)?;
        let zero = cx.is_complex && cx.cohomology.iter().all(|&h| h == 0);
        r.claim(format!("Spencer cohomology vanishes at order {n}"), zero, format!("{:?}", cx.cohomology));
    }

    // retraction and chain
    if corrupt {
        b.sigma = b.sigma.neg();
    }
    let s11 = match braiding_retraction(&tower, &b) {
        Ok(s) => s,
        Err(e) => {
            r.claim("s^(1,1) = ½(id + σ) is a retraction", false, e.to_string());
            return Ok(r);
        }
    };
    r.claim("s^(1,1) = ½(id + σ) is a retraction", is_retraction(&tower, 1, &s11)?, "");
    let retractions = BTreeMap::from([(1, s11)]);
    let q = Quantization::build(tower.clone(), &b, &exterior_connection(&tower)?, &retractions)?;
    let s2 = tower.sym(2)?;
    let g_pair = Mat::column_vec(g.as_deref().unwrap_or(&[]));
    let g_s2 = if g.is_some() { s2.carrier.coords_of(&pair_to_sym_ambient(&tower)?.mul(&g_pair)) } else { Mat::zeros(s2.dim(), 1) };
    let nabla2 = q.chain(2).cloned().unwrap_or_else(|| Mat::zeros(0, 0));
    for (hb, name) in ["1", "i", "j", "k"].iter().enumerate() {
        let re = alg.mul(&alg.basis(3), &alg.basis(hb))[0].clone();
        let expected = g_s2.scale(&-re.clone());
        let got = nabla2.mul(&basis(4, hb));
        r.claim(format!("∇²({name}) = −Re(k{name})·g"), got == expected, format!("Re(k{name}) = {re}"));
    }

    // ι²(g)
    let j2 = tower.level(2)?;
    let jet = |x: usize| j2.prolong.mul(&basis(4, x));
    let act = |a: usize, v: &Mat| j2.module().left[a].mul(v);
    let rhs = act(2, &jet(1)).sub(&act(1, &jet(2))).add(&jet(3)).add(&act(3, &jet(0)));
    r.claim("ι²(g) = j·j²(i) − i·j²(j) + j²(k) + k·j²(1)", s2.iota.mul(&g_s2) == rhs && !rhs.is_zero(), "");

    // L_k
    let lk = alg.left_mat(3).clone();
    let order = q.order(&lk)?;
    r.claim("order(L_k) = 2", order == 2, format!("order {order}"));
    let c: Vec<Mat> = (0..=2).map(|k| q.homogeneous(&lk, k)).collect::<Result<_>>()?;
    let mut e2 = Mat::zeros(4, 4);
    e2[(0, 3)] = Rat::from_int(-4);
    let mut e1 = Mat::zeros(4, 4);
    e1[(2, 1)] = Rat::from_int(2);
    e1[(1, 2)] = Rat::from_int(-2);
    e1[(0, 3)] = Rat::from_int(4);
    let values = |m: &Mat| (0..4).map(|x| fmt_vec(&m.col(x))).collect::<Vec<_>>().join(" ");
    r.claim("(L_k)^(2)(h) = −4h_k", c[2] == e2, values(&c[2]));
    r.claim("(L_k)^(1)(h) = 2h_i j − 2h_j i + 4h_k", c[1] == e1, values(&c[1]));
    r.claim("(L_k)^(0) = R_k", c[0] == *alg.right_mat(3), values(&c[0]));
    r.claim("L_k = Σ (L_k)^(k)", c[0].add(&c[1]).add(&c[2]) == lk, "");
    let parts = calc.partials()?;
    let comm = parts[0].mul(&parts[1]).sub(&parts[1].mul(&parts[0])).scale(&Rat::from_int(2));
    let convention = if c[2] == comm {
        "equals 2(∂_i∘∂_j − ∂_j∘∂_i)"
    } else if c[2] == comm.neg() {
        "equals 2(∂_j∘∂_i − ∂_i∘∂_j)"
    } else {
        "matches neither commutator sign"
    };
    r.claim("(L_k)^(2) is twice a commutator of partials", c[2] == comm || c[2] == comm.neg(), convention);

    // star table
    let names = ["x_i", "x_j", "p_i", "p_j"];
    let gens: Vec<GradedSymbol> = vec![
        graded(0, alg.right_mat(1).clone()),
        graded(0, alg.right_mat(2).clone()),
        graded(1, q.symbol(&parts[0], 1)?),
        graded(1, q.symbol(&parts[1], 1)?),
    ];
    let prod: Vec<GradedSymbol> = (0..4)
        .flat_map(|a| (0..4).map(move |b| (a, b)))
        .map(|(a, b)| q.symbol_product(&gens[a], &gens[b]))
        .collect::<Result<_>>()?;
    for hbar in [Rat::zero(), Rat::one(), Rat::new(2, 3)] {
        let table = q.star_table(&gens, &hbar)?;
        let at = |a: usize, b: usize| &table[4 * a + b];
        let dot = |a: usize, b: usize| &prod[4 * a + b];
        let mut fails = Vec::new();
        for a in 0..4 {
            for bb in 0..4 {
                let (px, xb) = (a >= 2, bb < 2);
                let expected = if px && xb {
                    let mut e: GradedSymbol = dot(bb, a).iter().map(|(k, m)| (*k, m.neg())).collect();
                    if a - 2 == bb {
                        gs_add(&mut e, &q.unit(), &hbar);
                    }
                    e
                } else {
                    dot(a, bb).clone()
                };
                if *at(a, bb) != expected {
                    fails.push(format!("{}⋆{}", names[a], names[bb]));
                }
            }
        }
        r.claim(format!("star relations at ℏ = {hbar}"), fails.is_empty(), fails.join(", "));
        let anti = at(2, 2).is_empty() && at(3, 3).is_empty() && {
            let mut s = at(2, 3).clone();
            gs_add(&mut s, at(3, 2), &Rat::one());
            s.is_empty()
        };
        r.claim(format!("p_i⋆p_i = p_j⋆p_j = 0, p_i⋆p_j = −p_j⋆p_i at ℏ = {hbar}"), anti, "");
        if hbar.is_zero() {
            r.claim("ℏ = 0 table equals symbol products", table == prod, "");
        }
        if hbar == Rat::one() {
            let ok = (0..16).all(|t| q.q_total(&table[t]) == q.q_total(&gens[t / 4]).mul(&q.q_total(&gens[t % 4])));
            r.claim("ℏ = 1 table quantizes to compositions", ok, "");
        }
    }
    Ok(r)
}
