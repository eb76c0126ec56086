//! JSON-configured solver runs.
//!
//! A config names a space, a convex set, a mapping, an algorithm and
//! optionally a schedule. Resolution fills every default in, so the resolved
//! config stored in a summary reproduces the run on its own.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::convex::{contains, project_point, validate_set, ConvexSet, MEMBERSHIP_TOL};
use crate::error::{Error, Result};
use crate::geometry::{Basepoint, Geodesic, Point, SpaceDescriptor};
use crate::rng;
use crate::solvers::{
    nearest_fixed_point_residual, run_explicit, run_implicit, validate_implicit_schedule, validate_schedules,
    Algorithm, FixedPoints, FixedSetSource, IterationTrace, Mapping, RunOptions, Schedule, TerminalStatus,
};
use crate::spaces::Space;

/// Environment variable that replaces the configured seed.
pub const SEED_ENV: &str = "HADAMARD_SEED";
pub const DEFAULT_BUDGET: usize = 10_000;
pub const DEFAULT_CERTIFICATE_PROBES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Stop once `d(x_n, T x_n)` falls to this level; negative runs the
    /// whole budget.
    #[serde(default = "default_outer")]
    pub outer: f64,
    #[serde(default = "default_inner")]
    pub inner: f64,
    #[serde(default = "default_max_inner")]
    pub max_inner: usize,
}

fn default_outer() -> f64 {
    1e-3
}
fn default_inner() -> f64 {
    1e-10
}
fn default_max_inner() -> usize {
    100_000
}
fn default_budget() -> usize {
    DEFAULT_BUDGET
}
fn default_probes() -> usize {
    DEFAULT_CERTIFICATE_PROBES
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { outer: default_outer(), inner: default_inner(), max_inner: default_max_inner() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Stem of the output files.
    pub name: String,
    pub space: SpaceDescriptor,
    pub convex_set: ConvexSet,
    pub mapping: Mapping,
    pub algorithm: Algorithm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Schedule>,
    /// Defaults to the space's origin.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint: Option<Point>,
    /// Start of the explicit iteration; defaults to `P_C o`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Point>,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
    /// Point the trace measures against; defaults to the fixed point nearest
    /// `o` when the mapping's fixed-point set is known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_point: Option<Point>,
    #[serde(default = "default_probes")]
    pub certificate_probes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

/// A config problem, anchored at the JSON key it concerns.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigIssue {
    pub key: &'static str,
    pub line: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}: {}", self.key, self.message),
            None => write!(f, "{}: {}", self.key, self.message),
        }
    }
}

impl std::error::Error for ConfigIssue {}

/// First line of `text` mentioning `"key"`, 1-based.
fn key_line(text: &str, key: &str) -> Option<usize> {
    let quoted = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&quoted)).map(|i| i + 1)
}

fn issue(key: &'static str, message: impl Into<String>) -> ConfigIssue {
    ConfigIssue { key, line: None, message: message.into() }
}

impl ExperimentConfig {
    /// Parses and resolves `text`; problems carry the line of the offending
    /// key when it appears in the text.
    pub fn parse(text: &str) -> std::result::Result<Self, ConfigIssue> {
        let raw: ExperimentConfig = serde_json::from_str(text).map_err(|e| ConfigIssue {
            key: "config",
            line: Some(e.line()),
            message: e.to_string(),
        })?;
        raw.resolve().map_err(|mut i| {
            i.line = key_line(text, i.key);
            i
        })
    }

    pub fn load(path: &Path) -> std::result::Result<Self, ConfigIssue> {
        let text = fs::read_to_string(path)
            .map_err(|e| issue("config", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configs serialize")
    }

    /// Validates every field and fills in the defaults.
    pub fn resolve(mut self) -> std::result::Result<Self, ConfigIssue> {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(issue("name", "must be a nonempty file stem"));
        }
        let space = Space::new(&self.space).map_err(|e| issue("space", e.to_string()))?;
        validate_set(&space, &self.convex_set).map_err(|e| issue("convex_set", e.to_string()))?;
        self.mapping.validate(&space).map_err(|e| issue("mapping", e.to_string()))?;
        if self.budget == 0 {
            return Err(issue("budget", "must be at least 1"));
        }
        if !(self.tolerances.inner > 0.0) || self.tolerances.max_inner == 0 || self.tolerances.outer.is_nan() {
            return Err(issue("tolerances", "inner must be positive, max_inner at least 1, outer a number"));
        }
        if self.certificate_probes == 0 {
            return Err(issue("certificate_probes", "must be at least 1"));
        }
        let o = self.basepoint.take().unwrap_or_else(|| space.origin());
        if let Some(v) = space.validate_point(&o) {
            return Err(issue("basepoint", v));
        }
        self.basepoint = Some(o.clone());
        if let Some(q) = &self.reference_point {
            if let Some(v) = space.validate_point(q) {
                return Err(issue("reference_point", v));
            }
        }
        let schedule = self.schedule.take().unwrap_or_else(|| match self.algorithm {
            Algorithm::Implicit => Schedule::default_implicit(),
            Algorithm::Explicit => Schedule::default_explicit(),
        });
        match self.algorithm {
            Algorithm::Implicit => {
                if let Some((name, c)) = validate_implicit_schedule(&schedule, self.budget).failures().first() {
                    return Err(issue("schedule", format!("{name} fails: {}", c.evidence)));
                }
                if self.x0.is_some() {
                    return Err(issue("x0", "the implicit algorithm does not take a starting point"));
                }
            }
            Algorithm::Explicit => {
                if let Some((name, c)) = validate_schedules(&schedule, self.budget).failures().first() {
                    return Err(issue("schedule", format!("{name} fails: {}", c.evidence)));
                }
                let x0 = match self.x0.take() {
                    Some(x) => x,
                    None => project_point(&space, &self.convex_set, &o).map_err(|e| issue("x0", e.to_string()))?.0,
                };
                if let Some(v) = space.validate_point(&x0) {
                    return Err(issue("x0", v));
                }
                if !contains(&space, &self.convex_set, &x0, MEMBERSHIP_TOL).map_err(|e| issue("x0", e.to_string()))? {
                    return Err(issue("x0", "must lie in the convex set"));
                }
                self.x0 = Some(x0);
            }
        }
        self.schedule = Some(schedule);
        Ok(self)
    }

    /// Replaces scalar fields; the seed comes from the flag, then
    /// [`SEED_ENV`], then the config.
    pub fn apply_overrides(&mut self, seed: Option<u64>, budget: Option<usize>, output_dir: Option<PathBuf>) -> Result<()> {
        let env_seed = match std::env::var(SEED_ENV) {
            Ok(v) => Some(v.trim().parse::<u64>().map_err(|_| {
                Error::InvalidArgument(format!("{SEED_ENV}={v} is not an unsigned integer"))
            })?),
            Err(_) => None,
        };
        if let Some(s) = seed.or(env_seed) {
            self.seed = s;
        }
        if let Some(b) = budget {
            if b == 0 {
                return Err(Error::InvalidArgument("budget must be at least 1".into()));
            }
            self.budget = b;
        }
        if output_dir.is_some() {
            self.output_dir = output_dir;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificates {
    /// `max_p ⟨→qo, →qp⟩` over probes of the fixed-point set; absent when
    /// the set is unknown or empty.
    pub nearest_fixed_point_residual: Option<f64>,
    /// `1 + d²(q, o)`.
    pub scale: f64,
    pub probes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub name: String,
    pub status: TerminalStatus,
    pub rows: usize,
    pub final_point: Point,
    pub final_fixed_residual: Option<f64>,
    pub final_step: Option<f64>,
    pub final_z_residual: Option<f64>,
    pub reference_point: Option<Point>,
    pub final_reference_distance: Option<f64>,
    /// `known`, `empty` or `unknown`.
    pub fixed_point_set: String,
    pub certificates: Certificates,
    pub wall_time_seconds: f64,
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub trace: IterationTrace,
    pub summary: Summary,
}

impl RunOutcome {
    pub fn converged(&self) -> bool {
        self.trace.converged()
    }
}

/// Runs a resolved config without touching the file system.
pub fn execute(config: &ExperimentConfig) -> Result<RunOutcome> {
    let config = config.clone().resolve().map_err(|i| Error::InvalidArgument(i.to_string()))?;
    let started = Instant::now();
    let space = Space::new(&config.space)?;
    let base = Basepoint::new(config.basepoint.clone().expect("resolved"));
    let schedule = config.schedule.as_ref().expect("resolved");
    let fixed = config.mapping.fixed_points();
    let reference = match (&config.reference_point, &fixed) {
        (Some(q), _) => Some(q.clone()),
        (None, FixedPoints::Known(set)) => Some(project_point(&space, set, &base.o)?.0),
        _ => None,
    };
    let options = RunOptions {
        outer_tol: config.tolerances.outer,
        inner_tol: config.tolerances.inner,
        max_inner: config.tolerances.max_inner,
        seed: config.seed,
        reference: reference.clone(),
    };
    let trace = match config.algorithm {
        Algorithm::Implicit => {
            run_implicit(&space, &config.convex_set, &config.mapping, schedule, &base, config.budget, &options)?
        }
        Algorithm::Explicit => run_explicit(
            &space,
            &config.convex_set,
            &config.mapping,
            schedule,
            &base,
            config.x0.as_ref().expect("resolved"),
            config.budget,
            &options,
        )?,
    };
    let q = &trace.final_point;
    let (label, residual) = match &fixed {
        FixedPoints::Known(set) => {
            let r = nearest_fixed_point_residual(
                &space,
                q,
                &base,
                FixedSetSource::Set(set),
                config.certificate_probes,
                rng::derive_seed(config.seed, "certificate", 0),
            )?;
            ("known", Some(r))
        }
        FixedPoints::Empty => ("empty", None),
        FixedPoints::Unknown => ("unknown", None),
    };
    let last = trace.last();
    let summary = Summary {
        name: config.name.clone(),
        status: trace.status,
        rows: trace.rows.len(),
        final_point: q.clone(),
        final_fixed_residual: last.map(|r| r.fixed_residual),
        final_step: last.map(|r| r.step),
        final_z_residual: last.and_then(|r| r.z_residual),
        final_reference_distance: reference.as_ref().map(|p| space.distance(q, p)).transpose()?,
        reference_point: reference,
        fixed_point_set: label.into(),
        certificates: Certificates {
            nearest_fixed_point_residual: residual,
            scale: 1.0 + space.distance(q, &base.o)?.powi(2),
            probes: config.certificate_probes,
        },
        wall_time_seconds: started.elapsed().as_secs_f64(),
        config,
    };
    Ok(RunOutcome { trace, summary })
}

/// Paths of the trace CSV and summary JSON for `config`.
pub fn output_paths(config: &ExperimentConfig) -> (PathBuf, PathBuf) {
    let dir = config.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    (dir.join(format!("{}.trace.csv", config.name)), dir.join(format!("{}.summary.json", config.name)))
}

/// [`execute`], then writes `<name>.trace.csv` and `<name>.summary.json`.
pub fn run(config: &ExperimentConfig) -> Result<RunOutcome> {
    let outcome = execute(config)?;
    let (csv, json) = output_paths(&outcome.summary.config);
    let io = |e: std::io::Error| Error::InvalidArgument(format!("writing outputs: {e}"));
    if let Some(dir) = csv.parent() {
        fs::create_dir_all(dir).map_err(io)?;
    }
    fs::write(&csv, outcome.trace.to_csv_string()).map_err(io)?;
    let text = serde_json::to_string_pretty(&outcome.summary).expect("summaries serialize");
    fs::write(&json, text + "\n").map_err(io)?;
    Ok(outcome)
}
