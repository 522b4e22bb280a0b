use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{csv_number, VerificationReport};
use super::spec::{ExperimentSpec, StateSource};
use crate::entropy::RenyiOrderPair;
use crate::error::{Error, Result};

/// The experiment field a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Theta,
    Phi,
    /// `θ - φ`, keeping the template's `φ` (default 0).
    AngleGap,
    /// Same squeezing on every mode of the template state.
    Squeeze,
    /// `α` with `β` conjugate.
    Alpha,
    Seed,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::Theta => "theta",
            SweepAxis::Phi => "phi",
            SweepAxis::AngleGap => "angle_gap",
            SweepAxis::Squeeze => "squeeze",
            SweepAxis::Alpha => "alpha",
            SweepAxis::Seed => "seed",
        }
    }

    fn apply(self, template: &ExperimentSpec, value: f64) -> Result<ExperimentSpec> {
        let mut spec = template.clone();
        match self {
            SweepAxis::Theta => spec.theta = Some(value),
            SweepAxis::Phi => spec.phi = Some(value),
            SweepAxis::AngleGap => {
                let phi = template.phi.unwrap_or(0.0);
                spec.phi = Some(phi);
                spec.theta = Some(phi + value);
            }
            SweepAxis::Squeeze => {
                let modes = match &template.state {
                    StateSource::Vacuum { modes } | StateSource::Correlated { modes, .. } => *modes,
                    StateSource::Squeezed { s } => s.len(),
                    StateSource::Gaussian { state } => state.modes(),
                    _ => return Err(Error::Invalid("squeeze sweeps need a Gaussian template state".into())),
                };
                spec.state = StateSource::Squeezed { s: vec![value; modes] };
            }
            SweepAxis::Alpha => {
                spec.orders =
                    Some(if value == 1.0 { RenyiOrderPair::shannon() } else { RenyiOrderPair::conjugate(value)? })
            }
            SweepAxis::Seed => {
                if value < 0.0 || value.fract() != 0.0 {
                    return Err(Error::Invalid(format!("seed must be a non-negative integer, got {value}")));
                }
                spec.seed = value as u64;
            }
        }
        Ok(spec)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [SweepAxis::Theta, SweepAxis::Phi, SweepAxis::AngleGap, SweepAxis::Squeeze, SweepAxis::Alpha, SweepAxis::Seed]
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown sweep axis '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// `steps` evenly spaced values from `from` to `to` inclusive.
pub fn linspace(from: f64, to: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => vec![],
        1 => vec![from],
        _ => (0..steps).map(|k| from + (to - from) * k as f64 / (steps - 1) as f64).collect(),
    }
}

/// Runs the template once per value. Rows are evaluated in parallel and
/// returned sorted by value; failures are recorded per row.
pub fn sweep(template: &ExperimentSpec, axis: SweepAxis, values: &[f64]) -> Vec<SweepRow> {
    let mut rows: Vec<SweepRow> = values
        .par_iter()
        .map(|&value| match axis.apply(template, value).and_then(|s| s.run()) {
            Ok(report) => SweepRow { value, report: Some(report), error: None },
            Err(e) => SweepRow { value, report: None, error: Some(e.to_string()) },
        })
        .collect();
    rows.sort_by(|a, b| a.value.total_cmp(&b.value));
    rows
}

pub fn write_sweep_csv<W: Write>(mut out: W, axis: SweepAxis, rows: &[SweepRow]) -> Result<()> {
    writeln!(out, "axis,value,{},error", VerificationReport::CSV_HEADER)?;
    let blanks = ",".repeat(VerificationReport::CSV_HEADER.matches(',').count());
    for row in rows {
        let body = row.report.as_ref().map(|r| r.csv_fields()).unwrap_or_else(|| blanks.clone());
        let err = row.error.as_deref().unwrap_or("").replace([',', '\n'], ";");
        writeln!(out, "{axis},{},{body},{err}", csv_number(row.value))?;
    }
    Ok(())
}
