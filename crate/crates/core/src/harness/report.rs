use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ext_real::ExtReal;

pub const REPORT_SCHEMA: u32 = 1;
/// Slack tolerance for closed-form (Gaussian) evaluations.
pub const ANALYTIC_TOL: f64 = 1e-9;
/// Slack tolerance for grid estimates; covers discretization error.
pub const GRID_TOL: f64 = 5e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Lemma1,
    Theorem1,
    Theorem1Extended,
    Theorem2,
    Theorem3,
    Birula,
    Huang,
    Guanlei,
}

impl Relation {
    pub const ALL: [Relation; 8] = [
        Relation::Lemma1,
        Relation::Theorem1,
        Relation::Theorem1Extended,
        Relation::Theorem2,
        Relation::Theorem3,
        Relation::Birula,
        Relation::Huang,
        Relation::Guanlei,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Lemma1 => "lemma1",
            Relation::Theorem1 => "theorem1",
            Relation::Theorem1Extended => "theorem1_extended",
            Relation::Theorem2 => "theorem2",
            Relation::Theorem3 => "theorem3",
            Relation::Birula => "birula",
            Relation::Huang => "huang",
            Relation::Guanlei => "guanlei",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Relation::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown relation '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    /// The bound is `-inf`; nothing was tested.
    Vacuous,
    Violation,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Vacuous => "vacuous",
            Status::Violation => "violation",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalPath {
    Analytic,
    Grid,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub det_k: Option<f64>,
    /// Largest `|‖ψ‖² - 1|` over the transformed grid states.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_drift: Option<f64>,
    /// Largest probability found within a few cells of a grid edge.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_mass: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Diagnostics {
    pub fn value(&mut self, key: &str, v: f64) {
        self.values.insert(key.to_string(), v);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub(crate) fn absorb_grid(&mut self, drift: f64, edge: f64) {
        self.norm_drift = Some(self.norm_drift.unwrap_or(0.0).max(drift));
        self.edge_mass = Some(self.edge_mass.unwrap_or(0.0).max(edge));
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub relation: Relation,
    pub n: usize,
    #[serde(rename = "N")]
    pub modes: usize,
    pub lhs: f64,
    pub bound: ExtReal,
    pub slack: ExtReal,
    pub status: Status,
    pub path: EvalPath,
    pub tolerance: f64,
    pub diagnostics: Diagnostics,
    pub inputs_digest: String,
    /// Seconds; the only field that differs between identical runs.
    pub wall_time: f64,
}

impl VerificationReport {
    pub fn new(
        relation: Relation,
        n: usize,
        modes: usize,
        lhs: f64,
        bound: ExtReal,
        grid: bool,
        diagnostics: Diagnostics,
    ) -> Self {
        let (path, tolerance) = if grid { (EvalPath::Grid, GRID_TOL) } else { (EvalPath::Analytic, ANALYTIC_TOL) };
        let slack = bound.slack_of(lhs);
        let status = if bound.is_neg_infinity() {
            Status::Vacuous
        } else if slack.to_f64() >= -tolerance {
            Status::Pass
        } else {
            Status::Violation
        };
        VerificationReport {
            schema: REPORT_SCHEMA,
            relation,
            n,
            modes,
            lhs,
            bound,
            slack,
            status,
            path,
            tolerance,
            diagnostics,
            inputs_digest: String::new(),
            wall_time: 0.0,
        }
    }

    pub fn with_relation(mut self, relation: Relation) -> Self {
        self.relation = relation;
        self
    }

    pub(crate) fn with_digest(mut self, digest: String) -> Self {
        self.inputs_digest = digest;
        self
    }

    /// Downgrades a passing report, e.g. when a side check failed.
    pub(crate) fn fail(&mut self, note: impl Into<String>) {
        self.diagnostics.note(note);
        if self.status == Status::Pass {
            self.status = Status::Violation;
        }
    }

    pub fn slack_f64(&self) -> f64 {
        self.slack.to_f64()
    }

    /// Copy with the wall time cleared, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        VerificationReport { wall_time: 0.0, ..self.clone() }
    }

    pub const CSV_HEADER: &'static str = "relation,n,N,path,lhs,bound,slack,status,tolerance,inputs_digest";

    pub fn csv_fields(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.relation,
            self.n,
            self.modes,
            match self.path {
                EvalPath::Analytic => "analytic",
                EvalPath::Grid => "grid",
            },
            csv_number(self.lhs),
            csv_ext(self.bound),
            csv_ext(self.slack),
            self.status,
            csv_number(self.tolerance),
            self.inputs_digest
        )
    }
}

/// Shortest round-trip form, switching to exponent notation for tiny values.
pub fn csv_number(v: f64) -> String {
    if v != 0.0 && v.abs() < 1e-4 {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn csv_ext(v: ExtReal) -> String {
    match v {
        ExtReal::Finite(x) => csv_number(x),
        other => other.to_string(),
    }
}

/// Hex SHA-256 of the canonical JSON encoding of `value`.
pub fn digest_of<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let bytes = serde_json::to_vec(value)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}
