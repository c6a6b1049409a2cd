//! Named scenarios, report assembly and report emission for the `eur` command.
//!
//! A scenario resolves its parameters against a table of defaults, runs the relevant
//! relation checks and collects plot-ready fields. Reports are deterministic for a
//! fixed [`ScenarioSpec`]; only `runtime` varies between runs and it is never emitted.

mod config;
mod emit;
mod scenarios;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::relations::{RelationCheck, Status};

pub use config::{parse_param, resolve_grid_n, Config, GRID_N_ENV};
pub use emit::{emit_report, parse_report, write_field_csv, CheckRecord, FieldRecord, Format, ReportDocument};
pub use scenarios::{scenario, Scenario, SCENARIOS};

/// Inputs of one scenario run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub name: String,
    /// Overrides of the scenario's parameter defaults.
    pub params: BTreeMap<String, f64>,
    /// Grid size override for scenarios that sample on a grid.
    pub grid_n: Option<usize>,
    pub hbar: f64,
    /// Seed override for scenarios that draw random states.
    pub seed: Option<u64>,
    /// Factor applied to every check's tolerance.
    pub tol_scale: f64,
}

impl ScenarioSpec {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            params: BTreeMap::new(),
            grid_n: None,
            hbar: 1.0,
            seed: None,
            tol_scale: 1.0,
        }
    }

    pub fn with_param(mut self, key: impl Into<String>, value: f64) -> Self {
        self.params.insert(key.into(), value);
        self
    }

    pub fn with_grid_n(mut self, n: usize) -> Self {
        self.grid_n = Some(n);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_tol_scale(mut self, scale: f64) -> Self {
        self.tol_scale = scale;
        self
    }
}

/// Sampled data for plotting.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldData {
    /// Values along one axis.
    Line { name: String, x: Vec<f64>, values: Vec<f64> },
    /// Values on a product lattice, row-major in `x`.
    Plane { name: String, x: Vec<f64>, p: Vec<f64>, values: Vec<f64> },
}

impl FieldData {
    pub fn name(&self) -> &str {
        match self {
            Self::Line { name, .. } | Self::Plane { name, .. } => name,
        }
    }
}

/// Outcome of one scenario run.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub scenario: String,
    /// Every parameter the run used, defaults included.
    pub params: BTreeMap<String, f64>,
    pub checks: Vec<RelationCheck>,
    pub fields: Vec<FieldData>,
    pub runtime: Duration,
}

impl Report {
    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// True when no check failed; divergent and indeterminate checks do not count.
    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} checks, {} pass, {} fail, {} divergent, {} indeterminate ({:.2} s)",
            self.scenario,
            self.checks.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Divergent),
            self.count(Status::Indeterminate),
            self.runtime.as_secs_f64()
        )
    }
}

/// Runs a scenario by name.
pub fn run_scenario(spec: &ScenarioSpec) -> Result<Report> {
    let sc = scenario(&spec.name).ok_or_else(|| Error::UnknownScenario(spec.name.clone()))?;
    if !(spec.hbar > 0.0 && spec.hbar.is_finite()) {
        return Err(Error::InvalidParameter(format!("hbar must be positive, got {}", spec.hbar)));
    }
    if !(spec.tol_scale > 0.0 && spec.tol_scale.is_finite()) {
        return Err(Error::InvalidParameter(format!("tolerance scale must be positive, got {}", spec.tol_scale)));
    }
    let ctx = sc.resolve(spec)?;
    let start = Instant::now();
    let outcome = (sc.run)(&ctx)?;
    let runtime = start.elapsed();
    let checks = outcome
        .checks
        .into_iter()
        .map(|c| {
            let tol = c.tolerance.scaled(spec.tol_scale);
            c.with_tolerance(tol)
        })
        .collect();
    Ok(Report {
        scenario: sc.name.to_string(),
        params: ctx.recorded(),
        checks,
        fields: outcome.fields,
        runtime,
    })
}

/// Runs every registered scenario with its defaults, honoring a grid override and a
/// tolerance scale.
pub fn verify_all(grid_n: Option<usize>, tol_scale: f64) -> Result<Vec<Report>> {
    SCENARIOS
        .iter()
        .map(|sc| {
            let mut spec = ScenarioSpec::new(sc.name).with_tol_scale(tol_scale);
            spec.grid_n = grid_n;
            run_scenario(&spec)
        })
        .collect()
}
