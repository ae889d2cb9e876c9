//! Machine-readable experiment reports (JSON, with optional CSV branch table).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::protocol::{Ancilla, OutcomeRecord};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub n: usize,
    pub mode: String,
    pub shots: Option<u64>,
    pub seed: u64,
    pub un_path: String,
    pub channel_y: Vec<f64>,
    pub message_re: Vec<f64>,
    pub message_im: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchRow {
    pub m: String,
    pub n: String,
    pub ancilla: u8,
    pub probability: f64,
    pub fidelity: f64,
    pub bob_re: Vec<f64>,
    pub bob_im: Vec<f64>,
}

impl BranchRow {
    pub fn from_record(r: &OutcomeRecord<f64>) -> Self {
        let (bob_re, bob_im) = match &r.bob_state {
            Some(s) => s.amplitudes().iter().map(|a| (a.re, a.im)).unzip(),
            None => (Vec::new(), Vec::new()),
        };
        Self {
            m: r.outcome.m_string(),
            n: r.outcome.n_string(),
            ancilla: u8::from(r.outcome.ancilla() == Ancilla::One),
            probability: r.probability,
            fidelity: r.fidelity,
            bob_re,
            bob_im,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShotTally {
    pub shots: u64,
    pub successes: u64,
    pub failures: u64,
    pub standard_error: f64,
    /// Keyed by `m/n/ancilla`, e.g. `"01/10/0"`.
    pub outcome_counts: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub worst_residual: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn residual(name: &str, worst: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            passed: worst <= tolerance,
            worst_residual: worst,
            tolerance,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn failed(name: &str, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed: false,
            worst_residual: f64::INFINITY,
            tolerance,
            detail: Some(detail.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<ConfigEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success_probability_theoretical: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success_probability_observed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_success_fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branches: Option<Vec<BranchRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tally: Option<ShotTally>,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            config: None,
            success_probability_theoretical: None,
            success_probability_observed: None,
            mean_success_fidelity: None,
            branches: None,
            tally: None,
            checks: Vec::new(),
            wall_time_seconds: None,
            passed: true,
        }
    }

    pub fn push_check(&mut self, check: CheckResult) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| crate::Error::Config {
            field: "report".into(),
            msg: e.to_string(),
        })?;
        s.push('\n');
        Ok(s)
    }

    /// Branch table as CSV with 17 significant digits. Empty when the
    /// report has no branch table.
    pub fn branches_csv(&self) -> String {
        let mut out = String::from("m,n,ancilla,probability,fidelity\n");
        for b in self.branches.iter().flatten() {
            let _ = writeln!(
                out,
                "{},{},{},{:.16e},{:.16e}",
                b.m, b.n, b.ancilla, b.probability, b.fidelity
            );
        }
        out
    }
}
