//! Job specs and the JSON-producing commands behind the `hh` binary.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::cuptable::{structure_constants, CupConfig, CupEngine};
use crate::cyclotomic::CycField;
use crate::fixedlocus::{monomial_basis, sector_dump, SectorClass};
use crate::grading_pairing::bidegree;
use crate::group::{fixed_data, parse_diag_word, Group, GroupElement, GroupError};
use crate::invariants::{hh_algebra, InvariantError};
use crate::verify::{run_all, PropertyReport, VerifyLevel};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("{0} propert(ies) failed")]
    Verification(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) => 2,
            CliError::Group(GroupError::TooLarge(_)) => 3,
            CliError::Group(_) => 2,
            CliError::Invariant(_) => 4,
            CliError::Verification(_) => 1,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GeneratorSpec {
    #[serde(default)]
    pub perm: String,
    #[serde(default)]
    pub diag: Vec<i64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct JobOptions {
    #[serde(default)]
    pub require_sl: bool,
    #[serde(default)]
    pub verify_level: VerifyLevel,
    #[serde(default)]
    pub output: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct JobSpec {
    pub n: u32,
    #[serde(rename = "N")]
    pub nvars: usize,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub options: JobOptions,
}

impl JobSpec {
    pub fn from_json(s: &str) -> Result<Self, CliError> {
        let spec: JobSpec = serde_json::from_str(s).map_err(|e| CliError::Spec(e.to_string()))?;
        if spec.n < 2 {
            return Err(CliError::Spec("n must be at least 2".into()));
        }
        if spec.nvars == 0 {
            return Err(CliError::Spec("N must be at least 1".into()));
        }
        Ok(spec)
    }

    pub fn generators(&self) -> Result<Vec<GroupElement>, CliError> {
        self.generators
            .iter()
            .map(|g| Ok(GroupElement::parse(self.nvars, self.n, &g.perm, &g.diag)?))
            .collect()
    }

    pub fn group(&self, cap: usize) -> Result<Group, CliError> {
        let g = Group::generate(self.nvars, self.n, &self.generators()?, cap)?;
        if self.options.require_sl && !g.diagonal_in_sl() {
            return Err(CliError::Spec("require_sl is set but G^d is not in SL_N".into()));
        }
        Ok(g)
    }
}

/// Parse an element such as `(1,2)(3,4)*t1*t2^3`, `t1*t2*t3` or `id`.
pub fn parse_element(nvars: usize, n: u32, s: &str) -> Result<GroupElement, CliError> {
    let s = s.trim();
    if s == "id" || s.is_empty() {
        return Ok(GroupElement::identity(nvars, n));
    }
    let split = s.rfind(')').map_or(0, |i| i + 1);
    let (perm, rest) = s.split_at(split);
    let rest = rest.trim_start_matches(['*', '·', ' ']).replace('·', "*");
    let diag = parse_diag_word(nvars, &rest)?;
    Ok(GroupElement::parse(nvars, n, perm, &diag)?)
}

/// Wraps a result with the spec and the field header.
pub fn envelope(spec: &JobSpec, command: &str, result: Value) -> Value {
    let field = CycField::for_fermat(spec.n, spec.nvars);
    json!({
        "command": command,
        "field": { "zeta_order": field.l, "notation": "(p/q)·ζm^e is p/q times exp(2πi·e/m)" },
        "spec": spec,
        "result": result,
    })
}

fn engine() -> CupEngine {
    CupEngine::new(CupConfig::default())
}

pub fn cmd_closure(g: &Group) -> Value {
    json!({
        "order": g.order(),
        "diagonal_in_sl": g.diagonal_in_sl(),
        "elements": g.elements.iter().map(|u| u.label()).collect::<Vec<_>>(),
        "conjugacy_classes": g.conjugacy_classes().iter().map(|(r, m)| json!({"representative": r.label(), "size": m.len()})).collect::<Vec<_>>(),
    })
}

pub fn cmd_sectors(g: &Group) -> Value {
    let rows: Vec<Value> = g
        .elements
        .iter()
        .map(|u| {
            let fd = fixed_data(u);
            let dump = sector_dump(u);
            json!({
                "u": u.label(),
                "N_u": fd.n_u,
                "d_u": fd.d_u,
                "age": fd.age.to_string(),
                "special": fd.special,
                "dim_jac": monomial_basis(u).len(),
                "variables": dump.variables,
                "monomials": dump.monomials,
            })
        })
        .collect();
    json!({ "sectors": rows })
}

pub fn cmd_product(g: &Group, left: &str, right: &str) -> Result<Value, CliError> {
    let a = parse_element(g.nvars, g.n, left)?;
    let b = parse_element(g.nvars, g.n, right)?;
    for x in [&a, &b] {
        if !g.contains(x) {
            return Err(CliError::Spec(format!("{x} is not in the group")));
        }
    }
    let p = engine().cup_classes(&SectorClass::unit(&a), &SectorClass::unit(&b));
    Ok(json!({
        "left": a.label(),
        "right": b.label(),
        "sector": p.u.label(),
        "value": p.poly.to_string(),
    }))
}

pub fn cmd_table(g: &Group) -> Value {
    json!({ "entries": structure_constants(&engine(), g) })
}

pub fn cmd_invariants(g: &Group) -> Result<Value, CliError> {
    let report = hh_algebra(&engine(), g)?;
    Ok(serde_json::to_value(&report).expect("report serializes"))
}

pub fn cmd_gradings(g: &Group) -> Value {
    let rows: Vec<Value> = g
        .elements
        .iter()
        .flat_map(monomial_basis)
        .map(|s| {
            let b = bidegree(&s).expect("monomials are homogeneous");
            json!({ "u": s.u.label(), "class": s.poly.to_string(), "q_l": b.q_l.to_string(), "q_r": b.q_r.to_string() })
        })
        .collect();
    json!({ "bidegrees": rows })
}

pub fn cmd_verify(g: &Group, level: VerifyLevel) -> (Value, Vec<PropertyReport>) {
    let reports = run_all(&engine(), g, level);
    let v = json!({
        "level": level,
        "passed": reports.iter().all(|r| r.passed()),
        "properties": reports,
    });
    (v, reports)
}
