//! `experiment` config files: a list of ratio, scaling and bounded-root runs.
//!
//! ```json
//! {
//!   "seed": 7,
//!   "experiments": [
//!     { "name": "pl-over-lr", "kind": "ratio", "numerator": "pl", "denominator": "lr",
//!       "grid": [8, 10, 12, 400], "count": 20000, "tolerance": 0.05 },
//!     { "name": "pl-scaling", "kind": "scaling", "property": "pl", "alpha": 0.5, "beta": 1.0,
//!       "grid": [6, 12, 1000], "count": 20000, "tolerance": 0.05 },
//!     { "name": "bounded", "kind": "bounded-root", "property": "pl", "alpha": 0.5, "beta": 1.0,
//!       "gamma": 0.7, "h": 3, "grid": [10, 500], "count": 20000, "mode": "monte-carlo" }
//!   ]
//! }
//! ```

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use treegibbs::enumerate::{GibbsWeights, ThermoParams, DEFAULT_GUARD};
use treegibbs::properties::Property;
use treegibbs::stats::{
    bounded_root_experiment, ratio_experiment, scaling_experiment, EstimateMode, EstimateOptions, Method, RatioReport,
    UNIFORM_INTEGRABILITY_NOTE,
};

use crate::output::Table;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Ratio,
    Scaling,
    BoundedRoot,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Auto,
    Exact,
    MonteCarlo,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub kind: Kind,
    /// Used by `scaling` and `bounded-root`.
    pub property: Option<String>,
    /// Used by `ratio`.
    pub numerator: Option<String>,
    pub denominator: Option<String>,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub gamma: f64,
    /// Root-degree bound for `bounded-root`.
    pub h: Option<usize>,
    pub grid: Vec<usize>,
    pub count: usize,
    /// Overrides the file-level seed.
    pub seed: Option<u64>,
    /// Pass when `|observed/predicted − 1|` at the largest `n` is below this.
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub mode: Mode,
    pub guard: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    pub experiments: Vec<ExperimentSpec>,
}

impl ExperimentConfig {
    pub fn parse(src: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(src).context("malformed experiment config")?;
        if cfg.experiments.is_empty() {
            bail!("experiment config lists no experiments");
        }
        for e in &cfg.experiments {
            e.validate()?;
        }
        Ok(cfg)
    }
}

fn property(field: &Option<String>, what: &str, name: &str) -> Result<Property> {
    let src = field.as_deref().with_context(|| format!("experiment {name:?} needs \"{what}\""))?;
    Ok(src.parse::<Property>()?)
}

impl ExperimentSpec {
    fn validate(&self) -> Result<()> {
        if self.grid.is_empty() || !self.grid.windows(2).all(|w| w[0] < w[1]) {
            bail!("experiment {:?}: grid must be non-empty and strictly increasing", self.name);
        }
        match self.kind {
            Kind::Ratio => {
                property(&self.numerator, "numerator", &self.name)?;
                property(&self.denominator, "denominator", &self.name)?;
            }
            Kind::Scaling => {
                property(&self.property, "property", &self.name)?;
                if self.gamma != 0.0 {
                    bail!("experiment {:?}: scaling experiments take gamma = 0", self.name);
                }
            }
            Kind::BoundedRoot => {
                property(&self.property, "property", &self.name)?;
                if self.h.unwrap_or(0) == 0 {
                    bail!("experiment {:?}: bounded-root needs \"h\" >= 1", self.name);
                }
            }
        }
        ThermoParams::new(self.alpha, self.beta, self.gamma)?;
        Ok(())
    }

    fn options(&self) -> EstimateOptions {
        let mode = match self.mode {
            Mode::Auto => EstimateMode::Auto,
            Mode::Exact => EstimateMode::Exact,
            Mode::MonteCarlo => EstimateMode::MonteCarlo,
        };
        EstimateOptions { mode, guard: self.guard.unwrap_or(DEFAULT_GUARD), root_max: None }
    }

    pub fn run(&self, file_seed: u64) -> Result<RatioReport> {
        let seed = self.seed.unwrap_or(file_seed);
        let opts = self.options();
        let params = ThermoParams::new(self.alpha, self.beta, self.gamma)?;
        let report = match self.kind {
            Kind::Ratio => ratio_experiment(
                &property(&self.numerator, "numerator", &self.name)?,
                &property(&self.denominator, "denominator", &self.name)?,
                &GibbsWeights::Thermo(params),
                &self.grid,
                self.count,
                seed,
                &opts,
            )?,
            Kind::Scaling => scaling_experiment(
                &property(&self.property, "property", &self.name)?,
                self.alpha,
                self.beta,
                &self.grid,
                self.count,
                seed,
                &opts,
            )?,
            Kind::BoundedRoot => bounded_root_experiment(
                &property(&self.property, "property", &self.name)?,
                &params,
                self.h.unwrap_or(1),
                &self.grid,
                self.count,
                seed,
                &opts,
            )?,
        };
        Ok(report)
    }
}

pub struct Outcome {
    pub table: Table,
    pub summary: Value,
}

pub fn run(cfg: &ExperimentConfig, mut progress: impl FnMut(&str)) -> Result<Outcome> {
    let mut table = Table::new([
        "experiment",
        "n",
        "numerator",
        "numerator_se",
        "denominator",
        "denominator_se",
        "observed",
        "observed_se",
        "predicted",
        "abs_error",
        "method",
        "samples",
    ]);
    let mut entries = Vec::new();
    let mut all_passed = true;
    let mut any_mc = false;
    for spec in &cfg.experiments {
        progress(&spec.name);
        let rep = spec.run(cfg.seed).with_context(|| format!("experiment {:?}", spec.name))?;
        for (i, r) in rep.rows.iter().enumerate() {
            any_mc |= r.method == Method::MonteCarlo;
            table.push(vec![
                spec.name.clone(),
                r.n.to_string(),
                r.numerator.to_string(),
                r.numerator_se.to_string(),
                r.denominator.to_string(),
                r.denominator_se.to_string(),
                r.observed.to_string(),
                r.observed_se.to_string(),
                rep.predicted.map_or(String::new(), |p| p.to_string()),
                rep.trend.get(i).map_or(String::new(), |d| d.to_string()),
                match r.method {
                    Method::EnumerationExact => "enumeration-exact".into(),
                    Method::MonteCarlo => "monte-carlo".into(),
                },
                r.samples.to_string(),
            ]);
        }
        let rel = rep.relative_error();
        let pass = match (spec.tolerance, rel) {
            (Some(t), Some(e)) => Some(e < t),
            (Some(_), None) => Some(false),
            (None, _) => None,
        };
        all_passed &= pass != Some(false);
        entries.push(json!({
            "name": spec.name,
            "kind": spec.kind,
            "report": rep,
            "relative_error": rel,
            "tolerance": spec.tolerance,
            "pass": pass,
        }));
    }
    let summary = json!({
        "experiments": entries,
        "all_passed": all_passed,
        "note": if any_mc { UNIFORM_INTEGRABILITY_NOTE } else { "" },
    });
    Ok(Outcome { table, summary })
}
