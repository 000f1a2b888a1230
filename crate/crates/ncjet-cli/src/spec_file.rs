//! JSON input and output formats. Every rational is a `"p/q"` or `"p"` string.

use std::path::Path;
use std::sync::Arc;

use ncjet::algebra::{Algebra, Module};
use ncjet::calculus::{validate_fodc, Calculus};
use ncjet::{fixtures, Mat, Rat};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CalculusSpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub algebra: AlgebraSpec,
    pub omega1: Omega1Spec,
    pub max_degree: usize,
    /// Free left basis of `Ω1`, as coordinate vectors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub dim: usize,
    pub basis: Vec<String>,
    pub unit: Vec<String>,
    pub mult: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Omega1Spec {
    pub dim: usize,
    pub left: Vec<Vec<Vec<String>>>,
    pub right: Vec<Vec<Vec<String>>>,
    pub d: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpSpecFile {
    pub source: String,
    pub target: String,
    pub matrix: Vec<Vec<String>>,
}

pub fn rat(s: &str) -> Result<Rat, CliError> {
    s.parse().map_err(|_| CliError::Parse(format!("not a rational: {s:?}")))
}

pub fn rats(v: &[String]) -> Result<Vec<Rat>, CliError> {
    v.iter().map(|s| rat(s)).collect()
}

pub fn strs(v: &[Rat]) -> Vec<String> {
    v.iter().map(Rat::to_string).collect()
}

pub fn mat(rows: &[Vec<String>], shape: (usize, usize), what: &str) -> Result<Mat, CliError> {
    let parsed: Vec<Vec<Rat>> = rows.iter().map(|r| rats(r)).collect::<Result<_, _>>()?;
    if parsed.len() != shape.0 || parsed.iter().any(|r| r.len() != shape.1) {
        return Err(CliError::Invalid(format!("{what} must be {} x {}", shape.0, shape.1)));
    }
    Ok(Mat::from_rows(parsed, shape.1))
}

pub fn mat_strs(m: &Mat) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| strs(m.row(r))).collect()
}

impl CalculusSpecFile {
    pub fn from_calculus(calc: &Calculus) -> CalculusSpecFile {
        let alg = calc.algebra();
        let w = calc.omega(1).expect("degree one is always built");
        let mats = |ms: &[Mat]| ms.iter().map(mat_strs).collect::<Vec<_>>();
        CalculusSpecFile {
            name: Some(calc.name().to_string()),
            algebra: AlgebraSpec {
                dim: alg.dim(),
                basis: alg.names().to_vec(),
                unit: strs(alg.unit()),
                mult: alg.table().iter().map(|row| row.iter().map(|v| strs(v)).collect()).collect(),
            },
            omega1: Omega1Spec {
                dim: w.dim,
                left: mats(&w.left),
                right: mats(w.right.as_deref().unwrap_or(&[])),
                d: mat_strs(calc.d(0).expect("d0 is always built")),
            },
            max_degree: calc.max_degree(),
            frame: calc.frame().map(|f| f.iter().map(|v| strs(v)).collect()),
        }
    }

    /// Algebra and FODC axioms are checked; the first violation is reported.
    pub fn to_calculus(&self) -> Result<Calculus, CliError> {
        let n = self.algebra.dim;
        if self.algebra.basis.len() != n || self.algebra.unit.len() != n || self.algebra.mult.len() != n {
            return Err(CliError::Invalid(format!("algebra of dimension {n} has malformed basis, unit or table")));
        }
        let mult = self
            .algebra
            .mult
            .iter()
            .map(|row| row.iter().map(|v| rats(v)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let alg = Algebra::checked(self.algebra.basis.clone(), mult, rats(&self.algebra.unit)?)?;
        let w = self.omega1.dim;
        let actions = |ms: &[Vec<Vec<String>>], side: &str| -> Result<Vec<Mat>, CliError> {
            if ms.len() != n {
                return Err(CliError::Invalid(format!("Ω1 needs {n} {side} action matrices")));
            }
            ms.iter().map(|m| mat(m, (w, w), &format!("{side} action matrix"))).collect()
        };
        let omega1 = Module::new("Ω1", w, actions(&self.omega1.left, "left")?, Some(actions(&self.omega1.right, "right")?));
        let d0 = mat(&self.omega1.d, (w, n), "d")?;
        if let Some(f) = validate_fodc(&alg, &omega1, &d0).into_iter().next() {
            return Err(CliError::Invalid(f));
        }
        let name = self.name.clone().unwrap_or_else(|| "input".into());
        let mut calc = Calculus::build(alg, omega1, d0, self.max_degree, name)?;
        if let Some(frame) = &self.frame {
            let vs = frame.iter().map(|v| rats(v)).collect::<Result<Vec<_>, _>>()?;
            if vs.iter().any(|v| v.len() != w) {
                return Err(CliError::Invalid(format!("frame vectors must have length {w}")));
            }
            calc = calc.with_frame(vs)?;
        }
        Ok(calc)
    }
}

pub fn read_spec(path: &Path) -> Result<CalculusSpecFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// A fixture name or a path to a calculus file.
pub fn load(input: &str) -> Result<Arc<Calculus>, CliError> {
    if fixtures::NAMES.contains(&input) {
        return Ok(Arc::new(fixtures::calculus(input)?));
    }
    Ok(Arc::new(read_spec(Path::new(input))?.to_calculus()?))
}

pub fn read_op(path: &Path) -> Result<OpSpecFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}
