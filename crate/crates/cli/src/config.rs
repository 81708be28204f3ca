//! JSON experiment configuration.
//!
//! A configuration is a single JSON document whose `command` field selects
//! the experiment; the remaining fields are command-specific. Unknown keys
//! are rejected everywhere. Command-line flags override top-level scalar
//! fields only (seed, trials, delta, workers, output, falsify_bounds).

use std::path::PathBuf;

use serde::Deserialize;

use martail::characteristics::CharKind;
use martail::montecarlo::{BoundName, DominationCell, EventMode, EventSpec, McSettings};
use martail::processes::IncrementModel;

use crate::CliError;

pub const DEFAULT_SEED: u64 = 20150501;
pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_DELTA: f64 = 1e-3;

fn default_seed() -> u64 {
    DEFAULT_SEED
}
fn default_trials() -> u64 {
    DEFAULT_TRIALS
}
fn default_delta() -> f64 {
    DEFAULT_DELTA
}
fn default_workers() -> usize {
    1
}
fn default_resolution() -> usize {
    512
}
fn default_points() -> usize {
    200
}
fn default_models() -> usize {
    1000
}
fn default_one() -> f64 {
    1.0
}
fn default_n_list() -> Vec<u64> {
    vec![100, 1_000, 10_000]
}

/// Top-level configuration document, tagged by `command`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExperimentConfig {
    Bound(BoundConfig),
    Curve(CurveConfig),
    Simulate(SimulateConfig),
    Verify(SimulateConfig),
    Tightness(TightnessConfig),
    Selfnorm(SelfnormConfig),
    Lemmas(LemmasConfig),
}

impl ExperimentConfig {
    pub fn command_name(&self) -> &'static str {
        match self {
            ExperimentConfig::Bound(_) => "bound",
            ExperimentConfig::Curve(_) => "curve",
            ExperimentConfig::Simulate(_) => "simulate",
            ExperimentConfig::Verify(_) => "verify",
            ExperimentConfig::Tightness(_) => "tightness",
            ExperimentConfig::Selfnorm(_) => "selfnorm",
            ExperimentConfig::Lemmas(_) => "lemmas",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundConfig {
    pub kind: String,
    pub x: f64,
    pub y: Option<f64>,
    pub v: Option<f64>,
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    /// "bennett", "cosh", or "beta".
    pub variant: String,
    pub x: f64,
    pub y: Option<f64>,
    pub v: Option<f64>,
    pub beta: Option<f64>,
    #[serde(default = "default_points")]
    pub points: usize,
    /// Upper end of the λ grid; defaults to 2 λ*.
    pub lambda_max: Option<f64>,
    pub output: Option<PathBuf>,
}

/// Shared shape of `simulate` and `verify`: Monte Carlo settings plus event
/// cells. `verify` additionally gates its exit code on the domination
/// verdict and honors `falsify_bounds`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub falsify_bounds: bool,
    pub cells: Vec<CellConfig>,
}

impl SimulateConfig {
    pub fn settings(&self) -> McSettings {
        McSettings { trials: self.trials, seed: self.seed, delta: self.delta, workers: self.workers }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellConfig {
    #[serde(default)]
    pub model_id: Option<String>,
    pub model: IncrementModel,
    pub mode: String,
    #[serde(default)]
    pub char_kind: Option<String>,
    #[serde(default)]
    pub y_or_beta: Option<f64>,
    pub x: f64,
    #[serde(default)]
    pub budget: Option<f64>,
    pub n: usize,
    #[serde(default)]
    pub bounds: Vec<String>,
}

impl CellConfig {
    /// Validate and convert into a domination cell. The `bounds` list may
    /// be empty for `simulate`.
    pub fn into_cell(self, index: usize) -> Result<DominationCell, CliError> {
        let bad = |msg: String| CliError::Config(format!("cell #{index}: {msg}"));
        self.model.validate().map_err(|e| bad(e.to_string()))?;
        let mode = match self.mode.as_str() {
            "some_k" => EventMode::SomeK,
            "max_terminal" => EventMode::MaxTerminal,
            "self_norm" => EventMode::SelfNorm,
            other => return Err(bad(format!("unknown mode '{other}'"))),
        };
        let spec = if mode == EventMode::SelfNorm {
            let beta = self
                .y_or_beta
                .ok_or_else(|| bad("self_norm needs y_or_beta = beta".into()))?;
            if let Some(kind) = &self.char_kind {
                if kind != "g_beta" {
                    return Err(bad(format!("self_norm ignores char_kind, got '{kind}'")));
                }
            }
            EventSpec::self_norm(beta, self.x, self.n)
        } else {
            let kind = self
                .char_kind
                .as_deref()
                .ok_or_else(|| bad("some_k/max_terminal need char_kind".into()))?;
            let param = |name: &str| {
                self.y_or_beta
                    .ok_or_else(|| bad(format!("char_kind '{name}' needs y_or_beta")))
            };
            let char_kind = match kind {
                "quad_char" => CharKind::QuadChar,
                "sq_var" => CharKind::SqVar,
                "g" => CharKind::G { y: param("g")? },
                "h" => CharKind::H { y: param("h")? },
                "m" => CharKind::M { y: param("m")? },
                "g_beta" => CharKind::GBeta { beta: param("g_beta")? },
                other => return Err(bad(format!("unknown char_kind '{other}'"))),
            };
            let budget = self
                .budget
                .ok_or_else(|| bad("some_k/max_terminal need a budget".into()))?;
            EventSpec { mode, char_kind, x: self.x, budget, horizon: self.n }
        };
        let bounds = self
            .bounds
            .iter()
            .map(|s| s.parse::<BoundName>().map_err(|e| bad(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DominationCell {
            model_id: self.model_id.unwrap_or_else(|| format!("cell_{index}")),
            model: self.model,
            spec,
            bounds,
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TightnessConfig {
    #[serde(default = "default_one")]
    pub x: f64,
    #[serde(default = "default_one")]
    pub y: f64,
    #[serde(default = "default_one")]
    pub v: f64,
    #[serde(default = "default_n_list")]
    pub n_list: Vec<u64>,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelfnormConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
    pub experiments: Vec<SelfnormExperiment>,
}

impl SelfnormConfig {
    pub fn settings(&self) -> McSettings {
        McSettings { trials: self.trials, seed: self.seed, delta: self.delta, workers: self.workers }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelfnormExperiment {
    #[serde(default)]
    pub model_id: Option<String>,
    pub model: IncrementModel,
    pub beta: f64,
    pub x_grid: Vec<f64>,
    pub n: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmasConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_models")]
    pub models: usize,
}

/// Parse a configuration document and check it selects `expected`.
pub fn load_config(text: &str, expected: Option<&str>) -> Result<ExperimentConfig, CliError> {
    let config: ExperimentConfig =
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
    if let Some(expected) = expected {
        if config.command_name() != expected {
            return Err(CliError::Config(format!(
                "config selects command '{}' but '{expected}' was invoked",
                config.command_name()
            )));
        }
    }
    Ok(config)
}
