//! Report model and its JSON / CSV writers.

use std::io::Write;
use std::path::Path;

use gamma_lagrangians::dynamics::{ConnectionComparison, Trajectory};
use gamma_lagrangians::lagrangians::ThetaConvention;
use serde::{Deserialize, Serialize};

use crate::claims::{Bound, Claim};
use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL: &str = "gammalag";
pub const RNG_NAME: &str = "ChaCha8 (rand_chacha 0.3), seeded per suite with the run seed";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    /// A vanishing `(f*f)` or `f` the theory predicts; counts as passing.
    ExpectedDegenerate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    /// `None` when the quantity could not be evaluated (see `note`).
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub bound: Bound,
    pub outcome: Outcome,
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn measured(claim: &Claim, tolerance: f64, residual: f64, trials: usize) -> Self {
        let ok = residual.is_finite()
            && match claim.bound {
                Bound::AtMost => residual <= tolerance,
                Bound::AtLeast => residual >= tolerance,
            };
        Self {
            name: claim.name.to_string(),
            anchor: claim.anchor.to_string(),
            max_residual: residual.is_finite().then_some(residual),
            tolerance,
            bound: claim.bound,
            outcome: if ok { Outcome::Pass } else { Outcome::Fail },
            trials,
            note: None,
        }
    }

    pub fn unevaluated(claim: &Claim, tolerance: f64, outcome: Outcome, note: String) -> Self {
        Self {
            name: claim.name.to_string(),
            anchor: claim.anchor.to_string(),
            max_residual: None,
            tolerance,
            bound: claim.bound,
            outcome,
            trials: 0,
            note: Some(note),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.outcome != Outcome::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub signature: String,
    pub epsilon: String,
    pub antisymmetrization: String,
    pub curvature: String,
    pub kappa_definition: String,
    /// `κ` measured on a fixed curved conformal metric.
    pub kappa: f64,
    pub theta: ThetaConvention,
    pub yang_mills_normalization: String,
    pub fsf_normalization: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub expected_degenerate: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub rng: String,
    pub config: RunConfig,
    pub conventions: Conventions,
    pub summary: Summary,
    pub checks: Vec<CheckRecord>,
    #[serde(default)]
    pub trajectories: Vec<Trajectory>,
    #[serde(default)]
    pub connections: Vec<ConnectionComparison>,
}

impl Report {
    pub fn new(config: RunConfig, conventions: Conventions) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: TOOL.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            rng: RNG_NAME.to_string(),
            config,
            conventions,
            summary: Summary::default(),
            checks: Vec::new(),
            trajectories: Vec::new(),
            connections: Vec::new(),
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.checks.push(record);
        self.summary = summarize(&self.checks);
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = CheckRecord>) {
        self.checks.extend(records);
        self.summary = summarize(&self.checks);
    }

    /// Exit status 0 iff nothing failed; expected-degenerate outcomes do not count.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckRecord::passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "anchor", "residual", "tolerance", "outcome"]).expect("in-memory write");
        for c in &self.checks {
            let residual = c.max_residual.map(|r| format!("{r:e}")).unwrap_or_default();
            let outcome = serde_json::to_value(c.outcome).expect("enum serializes");
            w.write_record([
                c.name.as_str(),
                c.anchor.as_str(),
                residual.as_str(),
                format!("{:e}", c.tolerance).as_str(),
                outcome.as_str().expect("unit variant"),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}

fn summarize(checks: &[CheckRecord]) -> Summary {
    let count = |o: Outcome| checks.iter().filter(|c| c.outcome == o).count();
    Summary {
        checks: checks.len(),
        passed: count(Outcome::Pass),
        failed: count(Outcome::Fail),
        expected_degenerate: count(Outcome::ExpectedDegenerate),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

pub fn emit_report(report: &Report, path: &Path, format: Format) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let body = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    let mut f = std::fs::File::create(path)?;
    f.write_all(body.as_bytes())?;
    f.sync_all()
}
