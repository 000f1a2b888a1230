use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;
use std::sync::Arc;

use ncjet::algebra::Module;
use ncjet::calculus::Calculus;
use ncjet::connections::{
    bimodule_defects, frame_metric, metric_compat, omega1_bundle, solve_bimodule_connections, solve_left_connections,
    torsion, Ansatz, BimoduleConnection,
};
use ncjet::jets::{elemental_span, exactness_report, JetTower};
use ncjet::quant::{braiding_retraction, exterior_connection, graded, solve_retraction, GradedSymbol, Quantization};
use ncjet::spencer::{bicomplex_check, spencer_complex};
use ncjet::{demo as ncdemo, fixtures, Mat, Rat};
use serde_json::{json, Value};

use crate::spec_file::{load, mat, mat_strs, rat, read_op, CalculusSpecFile};
use crate::{AnsatzArg, CliError, Outcome, RetractionArg};

const ORDER_CAP: usize = 4;

fn ok(value: Value, text: String) -> Result<Outcome, CliError> {
    Ok(Outcome { value, text, pass: true, failure: None })
}

fn judged(value: Value, text: String, failure: Option<String>) -> Result<Outcome, CliError> {
    Ok(Outcome { value, text, pass: failure.is_none(), failure })
}

fn verdict(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn dim_text(d: Option<usize>) -> String {
    match d {
        Some(d) => format!("affine space of dimension {d}"),
        None => "no solution".into(),
    }
}

fn gs_json(g: &GradedSymbol) -> Value {
    Value::Object(g.iter().map(|(k, m)| (k.to_string(), json!(mat_strs(m)))).collect())
}

fn gs_text(g: &GradedSymbol) -> String {
    if g.is_empty() {
        return "0".into();
    }
    g.iter().map(|(k, m)| format!("deg {k}: {:?}", mat_strs(m))).collect::<Vec<_>>().join("; ")
}

pub fn dump_fixture(name: &str) -> Result<Outcome, CliError> {
    let calc = fixtures::calculus(name)?;
    let spec = CalculusSpecFile::from_calculus(&calc);
    let value = serde_json::to_value(&spec).expect("spec serializes");
    let text = serde_json::to_string_pretty(&spec).expect("spec serializes") + "\n";
    ok(value, text)
}

pub fn validate(input: &str) -> Result<Outcome, CliError> {
    let calc = load(input)?;
    let mut checks: Vec<(String, bool)> = vec![("algebra axioms".into(), true), ("first-order calculus axioms".into(), true)];
    let dd = calc.check_d_squared();
    checks.push(("d∘d = 0".into(), dd.is_empty()));
    for (p, q) in calc.check_leibniz()? {
        checks.push((format!("graded Leibniz at ({p}, {q})"), false));
    }
    checks.push(("graded Leibniz".into(), checks.iter().all(|c| c.1)));
    for (p, q, r) in calc.check_wedge_assoc()? {
        checks.push((format!("wedge associativity at ({p}, {q}, {r})"), false));
    }
    let dims: Vec<usize> = (0..=calc.max_degree()).map(|k| calc.dim(k)).collect();
    let failure = checks.iter().find(|c| !c.1).map(|c| c.0.clone());
    let mut text = format!("calculus {} with dim Ω^k = {dims:?}\n", calc.name());
    for (name, pass) in &checks {
        let _ = writeln!(text, "{} {name}", if *pass { "pass" } else { "FAIL" });
    }
    let value = json!({
        "name": calc.name(),
        "formDims": dims,
        "checks": checks.iter().map(|(n, p)| json!({"name": n, "pass": p})).collect::<Vec<_>>(),
    });
    match failure {
        Some(f) => Err(CliError::Invalid(format!("{f} fails"))),
        None => ok(value, text),
    }
}

fn tower(calc: &Arc<Calculus>, order: usize) -> Result<JetTower, CliError> {
    Ok(JetTower::build(calc, Module::regular(calc.algebra()), order)?)
}

pub fn jets(input: &str, n: usize) -> Result<Outcome, CliError> {
    let calc = load(input)?;
    let tw = tower(&calc, n)?;
    let mut rows = Vec::new();
    let mut text = format!("{:>3} {:>6} {:>6} {:>6} {:>10}\n", "k", "J^k", "S^k", "exact", "elemental");
    for k in 0..=n {
        let jd = tw.level(k)?.dim();
        let sd = tw.sym(k)?.dim();
        let (exact, elemental) = if k == 0 {
            (true, true)
        } else {
            (exactness_report(&tw, k)?.exact(), elemental_span(&tw, k)?.dim() == jd)
        };
        let _ = writeln!(text, "{k:>3} {jd:>6} {sd:>6} {:>6} {:>10}", verdict(exact), verdict(elemental));
        rows.push(json!({"k": k, "jet": jd, "sym": sd, "exact": exact, "elemental": elemental}));
    }
    ok(json!({"name": calc.name(), "order": n, "rows": rows}), text)
}

pub fn spencer(input: &str, order: usize, corrupt_sign: bool) -> Result<Outcome, CliError> {
    let calc = load(input)?;
    if order == 0 {
        return Err(CliError::Invalid("Spencer order must be at least 1".into()));
    }
    let tw = tower(&calc, order)?;
    let mut text = String::new();
    let mut complexes = Vec::new();
    let mut failure = None;
    for n in 1..=order {
        let cx = spencer_complex(&tw, n)?;
        let _ = writeln!(
            text,
            "order {n}: terms {:?} complex {} ker = im j {} cohomology {:?}",
            cx.term_dims,
            verdict(cx.is_complex),
            verdict(cx.kernel_is_prolongation),
            cx.cohomology
        );
        if !(cx.is_complex && cx.kernel_is_prolongation) && failure.is_none() {
            failure = Some(format!("Spencer sequence of order {n}"));
        }
        complexes.push(json!({
            "order": n, "terms": cx.term_dims, "isComplex": cx.is_complex,
            "kernelIsProlongation": cx.kernel_is_prolongation, "cohomology": cx.cohomology,
        }));
    }
    let bi = bicomplex_check(&tw, order, corrupt_sign)?;
    let _ = writeln!(text, "bicomplex at order {order}:");
    for c in &bi.cells {
        let _ = writeln!(text, "  {} {}", if c.pass { "pass" } else { "FAIL" }, c.name);
    }
    if failure.is_none() {
        failure = bi.failures().first().map(|c| format!("bicomplex cell {}", c.name));
    }
    let value = json!({
        "name": calc.name(),
        "complexes": complexes,
        "bicomplex": bi.cells.iter().map(|c| json!({"name": c.name, "pass": c.pass})).collect::<Vec<_>>(),
    });
    judged(value, text, failure)
}

fn ansatz(calc: &Calculus, a: Option<AnsatzArg>) -> Ansatz {
    match a {
        Some(AnsatzArg::General) => Ansatz::General,
        Some(AnsatzArg::Frame) => Ansatz::FrameConstant,
        None if calc.frame().is_some() => Ansatz::FrameConstant,
        None => Ansatz::General,
    }
}

pub fn connections(input: &str, bimodule: bool, a: Option<AnsatzArg>) -> Result<Outcome, CliError> {
    let calc = load(input)?;
    let mut text = String::new();
    if !bimodule {
        let space = solve_left_connections(&omega1_bundle(&calc)?)?;
        let rep = space.representative();
        let _ = writeln!(text, "left connections on Ω1: {}", dim_text(space.dim()));
        if let Some(c) = &rep {
            let _ = writeln!(text, "representative: {:?}", mat_strs(&c.matrix));
        }
        let value = json!({"name": calc.name(), "dimension": space.dim(), "representative": rep.map(|c| mat_strs(&c.matrix))});
        return ok(value, text);
    }
    let ans = ansatz(&calc, a);
    let space = solve_bimodule_connections(&calc, ans)?;
    let _ = writeln!(text, "bimodule connections on Ω1 ({ans:?} ansatz): {}", dim_text(space.dim()));
    let mut value = json!({"name": calc.name(), "ansatz": format!("{ans:?}"), "dimension": space.dim()});
    let Some(b) = space.representative() else {
        return ok(value, text);
    };
    let tor = torsion(&b.base)?.is_zero();
    let curv = b.base.curvature()?.is_zero();
    let defects = bimodule_defects(&b)?;
    let metric = match calc.max_degree() >= 2 {
        true => frame_metric(&calc)?,
        false => None,
    };
    let metric_ok = match &metric {
        Some(g) => Some(metric_compat(&b, g)?.iter().all(Rat::is_zero)),
        None => None,
    };
    let _ = writeln!(text, "∇: {:?}", mat_strs(&b.base.matrix));
    let _ = writeln!(text, "σ: {:?}", mat_strs(&b.sigma));
    let _ = writeln!(text, "axioms hold: {}", verdict(defects.is_empty()));
    let _ = writeln!(text, "torsion zero: {}", verdict(tor));
    let _ = writeln!(text, "curvature zero: {}", verdict(curv));
    if let Some(m) = metric_ok {
        let _ = writeln!(text, "∇g = 0: {}", verdict(m));
    }
    value["connection"] = json!(mat_strs(&b.base.matrix));
    value["sigma"] = json!(mat_strs(&b.sigma));
    value["axiomDefects"] = json!(defects);
    value["torsionZero"] = json!(tor);
    value["curvatureZero"] = json!(curv);
    value["metricCompatible"] = json!(metric_ok);
    ok(value, text)
}

fn stable_tower(calc: &Arc<Calculus>) -> Result<Arc<JetTower>, CliError> {
    for n in 1..=ORDER_CAP {
        let tw = tower(calc, n)?;
        if tw.sym(n)?.dim() == 0 {
            return Ok(Arc::new(tw));
        }
    }
    Err(CliError::Failed(format!("symmetric forms do not vanish up to order {ORDER_CAP}")))
}

fn build_quantization(
    calc: &Arc<Calculus>,
    retraction: RetractionArg,
    a: Option<AnsatzArg>,
) -> Result<(Quantization, BimoduleConnection), CliError> {
    let tw = stable_tower(calc)?;
    let b = solve_bimodule_connections(calc, ansatz(calc, a))?
        .representative()
        .ok_or_else(|| CliError::Failed("missing bimodule connection on Ω1".into()))?;
    let mut rs = BTreeMap::new();
    for k in 1..tw.order() {
        if tw.sym(k + 1)?.dim() == 0 {
            continue;
        }
        let s = match (k, retraction) {
            (1, RetractionArg::Braiding) => Some(braiding_retraction(&tw, &b)?),
            _ => solve_retraction(&tw, k)?,
        };
        let s = s.ok_or_else(|| CliError::Failed(format!("missing retraction s^(1,{k})")))?;
        rs.insert(k, s);
    }
    let q = Quantization::build(tw.clone(), &b, &exterior_connection(&tw)?, &rs)?;
    Ok((q, b))
}

pub fn quantize(
    input: &str,
    hbar: &str,
    op: Option<&Path>,
    star_gens: bool,
    retraction: RetractionArg,
    a: Option<AnsatzArg>,
) -> Result<Outcome, CliError> {
    let calc = load(input)?;
    let hbar = rat(hbar)?;
    let (q, _) = build_quantization(&calc, retraction, a)?;
    let mut text = format!("quantization up to degree {}\n", q.top());
    let mut chain = Vec::new();
    for k in 0..=q.top() {
        let m = q.chain(k).expect("chain covers the top degree");
        let _ = writeln!(text, "∇^{k}: {:?}", mat_strs(m));
        chain.push(json!(mat_strs(m)));
    }
    let mut value = json!({"name": calc.name(), "top": q.top(), "hbar": hbar.to_string(), "chain": chain});
    let mut failure = None;
    if let Some(path) = op {
        let spec = read_op(path)?;
        if spec.source != "A" || spec.target != "A" {
            return Err(CliError::Invalid("operators must act on the regular module \"A\"".into()));
        }
        let n = calc.algebra().dim();
        let delta = mat(&spec.matrix, (n, n), "operator matrix")?;
        let order = q.order(&delta)?;
        let mut comps = Vec::new();
        let mut sum = Mat::zeros(n, n);
        let _ = writeln!(text, "operator of order {order}");
        for k in 0..=order.min(q.top()) {
            let piece = q.graded_piece(&delta, k)?;
            let c = q.homogeneous(&delta, k)?;
            sum = sum.add(&c);
            let _ = writeln!(text, "  component {k}: {:?}", mat_strs(&c));
            comps.push(json!({"degree": k, "symbol": mat_strs(&piece), "component": mat_strs(&c)}));
        }
        let recon = sum == delta;
        let _ = writeln!(text, "  components sum to the operator: {}", verdict(recon));
        if !recon {
            failure = Some("reconstruction from homogeneous components".into());
        }
        value["operator"] = json!({"order": order, "components": comps, "reconstructs": recon});
    }
    if star_gens {
        let alg = calc.algebra();
        let mut names = Vec::new();
        let mut gens: Vec<GradedSymbol> = Vec::new();
        for &a in alg.generators() {
            names.push(format!("x_{}", alg.names()[a]));
            gens.push(graded(0, alg.right_mat(a).clone()));
        }
        if calc.frame().is_some() {
            for (s, p) in calc.partials()?.iter().enumerate() {
                names.push(format!("p_{}", frame_label(&calc, s)));
                gens.push(graded(1, q.symbol(p, 1)?));
            }
        }
        let table = q.star_table(&gens, &hbar)?;
        let m = gens.len();
        let mut entries = Vec::new();
        let mut morphism = true;
        let _ = writeln!(text, "star table at ℏ = {hbar}:");
        for i in 0..m {
            for j in 0..m {
                let t = &table[i * m + j];
                let lhs = q.q_hbar(t, &hbar);
                let rhs = q.q_hbar(&gens[i], &hbar).mul(&q.q_hbar(&gens[j], &hbar));
                morphism &= lhs == rhs;
                let _ = writeln!(text, "  {} ⋆ {} = {}", names[i], names[j], gs_text(t));
                entries.push(json!({"left": names[i], "right": names[j], "value": gs_json(t)}));
            }
        }
        let _ = writeln!(text, "q_ℏ maps ⋆ to composition: {}", verdict(morphism));
        if !morphism && failure.is_none() {
            failure = Some("q_ℏ is not multiplicative on the generators".into());
        }
        value["generators"] = json!(names);
        value["star"] = json!(entries);
        value["morphism"] = json!(morphism);
    }
    judged(value, text, failure)
}

fn frame_label(calc: &Calculus, s: usize) -> String {
    // a frame element equal to d(e_b) is labelled by b
    let frame = calc.frame().expect("checked by caller");
    let d0 = calc.d(0).expect("d0 is always built");
    (0..d0.cols())
        .find(|&b| d0.col(b) == frame[s])
        .map(|b| calc.algebra().names()[b].clone())
        .unwrap_or_else(|| s.to_string())
}

pub fn demo(name: &str, corrupt: bool) -> Result<Outcome, CliError> {
    if name != "quaternion" {
        return Err(CliError::Invalid(format!("no demo named {name:?}; available: quaternion")));
    }
    let report = ncdemo::quaternion_demo(corrupt)?;
    let mut text = String::new();
    for c in &report.claims {
        let detail = if c.detail.is_empty() { String::new() } else { format!("  [{}]", c.detail) };
        let _ = writeln!(text, "{} {}{detail}", if c.pass { "pass" } else { "FAIL" }, c.name);
    }
    let value = json!({
        "demo": name,
        "pass": report.pass(),
        "claims": report.claims.iter().map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail})).collect::<Vec<_>>(),
    });
    judged(value, text, report.first_failure().map(|c| c.name.clone()))
}
