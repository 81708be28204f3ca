use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use martail_cli::config::{
    load_config, BoundConfig, CurveConfig, ExperimentConfig, LemmasConfig, SelfnormConfig,
    SimulateConfig, TightnessConfig, DEFAULT_DELTA, DEFAULT_SEED, DEFAULT_TRIALS,
};
use martail_cli::run::{
    run_bound, run_curve, run_lemmas, run_selfnorm, run_simulate, run_tightness, run_verify,
};
use martail_cli::CliError;

/// Martingale tail-probability bounds: evaluation, simulation, and
/// verification. Exit codes: 0 success/all-pass, 1 usage or configuration
/// error, 2 verification failure.
#[derive(Parser)]
#[command(name = "martail", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Overrides for the top-level scalar fields of a JSON config.
#[derive(Args, Debug, Clone, Default)]
struct McOverrides {
    /// Master seed for the counter-based substreams.
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo trials per cell.
    #[arg(long)]
    trials: Option<u64>,
    /// One-sided confidence failure probability.
    #[arg(long)]
    delta: Option<f64>,
    /// Worker threads (estimates are bit-identical for any count).
    #[arg(long)]
    workers: Option<usize>,
    /// Write the CSV report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl McOverrides {
    fn apply_simulate(&self, cfg: &mut SimulateConfig) {
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(trials) = self.trials {
            cfg.trials = trials;
        }
        if let Some(delta) = self.delta {
            cfg.delta = delta;
        }
        if let Some(workers) = self.workers {
            cfg.workers = workers;
        }
        if let Some(output) = &self.output {
            cfg.output = Some(output.clone());
        }
    }

    fn apply_selfnorm(&self, cfg: &mut SelfnormConfig) {
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(trials) = self.trials {
            cfg.trials = trials;
        }
        if let Some(delta) = self.delta {
            cfg.delta = delta;
        }
        if let Some(workers) = self.workers {
            cfg.workers = workers;
        }
        if let Some(output) = &self.output {
            cfg.output = Some(output.clone());
        }
    }

    fn reject_mc_fields(&self, command: &str) -> Result<(), CliError> {
        for (name, given) in [
            ("--seed", self.seed.is_some()),
            ("--trials", self.trials.is_some()),
            ("--delta", self.delta.is_some()),
            ("--workers", self.workers.is_some()),
        ] {
            if given {
                return Err(CliError::Config(format!("{name} does not apply to '{command}'")));
            }
        }
        Ok(())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print a single bound value.
    Bound {
        /// b0 | b1 | b2 | theorem2 | selfnorm_paper | selfnorm_derived
        #[arg(long)]
        kind: String,
        /// Tail threshold.
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        /// Truncation level (b0/b1/b2).
        #[arg(long, allow_negative_numbers = true)]
        y: Option<f64>,
        /// Budget scale (b0/b1/b2/theorem2).
        #[arg(long, allow_negative_numbers = true)]
        v: Option<f64>,
        /// Moment exponent (theorem2/selfnorm_*).
        #[arg(long, allow_negative_numbers = true)]
        beta: Option<f64>,
    },
    /// Emit the Chernoff exponent family over a λ grid with the minimizer
    /// marked.
    Curve {
        /// bennett | cosh | beta
        #[arg(long)]
        variant: String,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        y: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        v: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        beta: Option<f64>,
        /// Grid point count.
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Upper end of the grid; defaults to 2 λ*.
        #[arg(long)]
        lambda_max: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Estimate event cells from a config; bounds are informational.
    Simulate {
        /// JSON experiment config (required: supplies the cells).
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: McOverrides,
    },
    /// Run a domination suite; exit 2 on any gating failure. Without
    /// --config, runs the built-in Bennett/power/cosh grids.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: McOverrides,
        /// Divide every bound by 10 (harness sanity check; must fail).
        #[arg(long)]
        falsify_bounds: bool,
    },
    /// Two-point tightness table: optimized Chernoff values against the
    /// cosh-type bound.
    Tightness {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, allow_negative_numbers = true)]
        x: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        y: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        v: Option<f64>,
        /// Comma-separated horizons.
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<u64>>,
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Self-normalized deviation report; the derived constant gates, the
    /// printed one is informational below β = 2.
    Selfnorm {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: McOverrides,
    },
    /// Randomized conditional-expectation lemma battery; exit 2 on any
    /// violation.
    Lemmas {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Random models per lemma.
        #[arg(long)]
        models: Option<usize>,
    },
    /// Dispatch on the `command` field of a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: McOverrides,
        #[arg(long)]
        falsify_bounds: bool,
    },
}

fn read_config(path: &PathBuf, expected: Option<&str>) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    load_config(&text, expected)
}

fn expect_simulate(config: ExperimentConfig) -> SimulateConfig {
    match config {
        ExperimentConfig::Simulate(cfg) | ExperimentConfig::Verify(cfg) => cfg,
        _ => unreachable!("command tag checked by load_config"),
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Bound { kind, x, y, v, beta } => run_bound(&BoundConfig { kind, x, y, v, beta }),
        Command::Curve { variant, x, y, v, beta, points, lambda_max, output } => {
            run_curve(&CurveConfig { variant, x, y, v, beta, points, lambda_max, output })
        }
        Command::Simulate { config, overrides } => {
            let mut cfg = expect_simulate(read_config(&config, Some("simulate"))?);
            overrides.apply_simulate(&mut cfg);
            run_simulate(cfg)
        }
        Command::Verify { config, overrides, falsify_bounds } => {
            let mut cfg = match config {
                Some(path) => expect_simulate(read_config(&path, Some("verify"))?),
                None => SimulateConfig {
                    seed: DEFAULT_SEED,
                    trials: DEFAULT_TRIALS,
                    delta: DEFAULT_DELTA,
                    workers: 1,
                    output: None,
                    falsify_bounds: false,
                    cells: Vec::new(),
                },
            };
            overrides.apply_simulate(&mut cfg);
            if falsify_bounds {
                cfg.falsify_bounds = true;
            }
            run_verify(cfg)
        }
        Command::Tightness { config, x, y, v, n_list, resolution, output } => {
            let mut cfg = match config {
                Some(path) => match read_config(&path, Some("tightness"))? {
                    ExperimentConfig::Tightness(cfg) => cfg,
                    _ => unreachable!("command tag checked by load_config"),
                },
                None => TightnessConfig {
                    x: 1.0,
                    y: 1.0,
                    v: 1.0,
                    n_list: vec![100, 1_000, 10_000],
                    resolution: 512,
                    output: None,
                },
            };
            if let Some(x) = x {
                cfg.x = x;
            }
            if let Some(y) = y {
                cfg.y = y;
            }
            if let Some(v) = v {
                cfg.v = v;
            }
            if let Some(n_list) = n_list {
                cfg.n_list = n_list;
            }
            if let Some(resolution) = resolution {
                cfg.resolution = resolution;
            }
            if let Some(output) = output {
                cfg.output = Some(output);
            }
            run_tightness(&cfg)
        }
        Command::Selfnorm { config, overrides } => {
            let mut cfg = match config {
                Some(path) => match read_config(&path, Some("selfnorm"))? {
                    ExperimentConfig::Selfnorm(cfg) => cfg,
                    _ => unreachable!("command tag checked by load_config"),
                },
                None => SelfnormConfig {
                    seed: DEFAULT_SEED,
                    trials: DEFAULT_TRIALS,
                    delta: DEFAULT_DELTA,
                    workers: 1,
                    output: None,
                    experiments: Vec::new(),
                },
            };
            overrides.apply_selfnorm(&mut cfg);
            run_selfnorm(cfg)
        }
        Command::Lemmas { config, seed, models } => {
            let mut cfg = match config {
                Some(path) => match read_config(&path, Some("lemmas"))? {
                    ExperimentConfig::Lemmas(cfg) => cfg,
                    _ => unreachable!("command tag checked by load_config"),
                },
                None => LemmasConfig { seed: DEFAULT_SEED, models: 1000 },
            };
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(models) = models {
                cfg.models = models;
            }
            run_lemmas(&cfg)
        }
        Command::Run { config, overrides, falsify_bounds } => {
            match read_config(&config, None)? {
                ExperimentConfig::Bound(cfg) => {
                    overrides.reject_mc_fields("bound")?;
                    run_bound(&cfg)
                }
                ExperimentConfig::Curve(mut cfg) => {
                    overrides.reject_mc_fields("curve")?;
                    if let Some(output) = &overrides.output {
                        cfg.output = Some(output.clone());
                    }
                    run_curve(&cfg)
                }
                ExperimentConfig::Simulate(mut cfg) => {
                    overrides.apply_simulate(&mut cfg);
                    run_simulate(cfg)
                }
                ExperimentConfig::Verify(mut cfg) => {
                    overrides.apply_simulate(&mut cfg);
                    if falsify_bounds {
                        cfg.falsify_bounds = true;
                    }
                    run_verify(cfg)
                }
                ExperimentConfig::Tightness(mut cfg) => {
                    overrides.reject_mc_fields("tightness")?;
                    if let Some(output) = &overrides.output {
                        cfg.output = Some(output.clone());
                    }
                    run_tightness(&cfg)
                }
                ExperimentConfig::Selfnorm(mut cfg) => {
                    overrides.apply_selfnorm(&mut cfg);
                    run_selfnorm(cfg)
                }
                ExperimentConfig::Lemmas(mut cfg) => {
                    if let Some(seed) = overrides.seed {
                        cfg.seed = seed;
                    }
                    run_lemmas(&cfg)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version print and exit 0; anything else is a
            // usage error under the exit-code contract.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
