//! Command execution. Every runner returns the process exit code:
//! 0 success / all-pass, 2 verification failure; configuration errors
//! surface as [`CliError`] and exit 1 in `main`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use martail::bounds::{
    b0, b1, b2, exponent_family, lambda_star, selfnorm_bound, theorem2_bound, BetaParams,
    BoundParams, ExponentVariant, SelfNormConstant,
};
use martail::montecarlo::{
    estimate_event, selfnorm_experiment, theoretical_bound, tightness_twopoint, verify_domination,
    DominationReport, DominationRow,
};
use martail::processes::lemma_suite;

use crate::config::{
    BoundConfig, CurveConfig, LemmasConfig, SelfnormConfig, SimulateConfig, TightnessConfig,
};
use crate::report::{
    write_curve_csv, write_domination_csv, write_simulate_csv, write_tightness_csv, CurvePoint,
    SimulateRow,
};
use crate::CliError;

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn require(field: Option<f64>, name: &str, kind: &str) -> Result<f64, CliError> {
    field.ok_or_else(|| CliError::Config(format!("bound kind '{kind}' requires --{name}")))
}

/// `bound`: print one bound value on stdout.
pub fn run_bound(cfg: &BoundConfig) -> Result<i32, CliError> {
    let kind = cfg.kind.as_str();
    let value = match kind {
        "b0" | "b1" | "b2" => {
            let params = BoundParams::new(
                cfg.x,
                require(cfg.y, "y", kind)?,
                require(cfg.v, "v", kind)?,
            )?;
            match kind {
                "b0" => b0(&params),
                "b1" => b1(&params),
                _ => b2(&params),
            }
        }
        "theorem2" => theorem2_bound(&BetaParams::new(
            cfg.x,
            require(cfg.v, "v", kind)?,
            require(cfg.beta, "beta", kind)?,
        )?)?,
        "selfnorm_paper" => {
            selfnorm_bound(cfg.x, require(cfg.beta, "beta", kind)?, SelfNormConstant::Paper)?
        }
        "selfnorm_derived" => {
            selfnorm_bound(cfg.x, require(cfg.beta, "beta", kind)?, SelfNormConstant::Derived)?
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown bound kind '{other}' (expected b0, b1, b2, theorem2, selfnorm_paper, selfnorm_derived)"
            )))
        }
    };
    println!("{value}");
    Ok(0)
}

/// `curve`: exponent family over a λ grid with the minimizer marked.
pub fn run_curve(cfg: &CurveConfig) -> Result<i32, CliError> {
    let (variant, y_or_beta) = match cfg.variant.as_str() {
        "bennett" | "cosh" => {
            let y = require(cfg.y, "y", &cfg.variant)?;
            let params = BoundParams::new(cfg.x, y, require(cfg.v, "v", &cfg.variant)?)?;
            let variant = if cfg.variant == "bennett" {
                ExponentVariant::Bennett(params)
            } else {
                ExponentVariant::Cosh(params)
            };
            (variant, Some(y))
        }
        "beta" => {
            let beta = require(cfg.beta, "beta", "beta")?;
            let params = BetaParams::new(cfg.x, require(cfg.v, "v", "beta")?, beta)?;
            (ExponentVariant::Beta(params), Some(beta))
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown variant '{other}' (expected bennett, cosh, beta)"
            )))
        }
    };
    if cfg.points < 2 {
        return Err(CliError::Config("curve needs at least 2 grid points".into()));
    }

    let minimizer = lambda_star(&variant)?;
    let lambda_max = match cfg.lambda_max {
        Some(value) if value > 0.0 => value,
        Some(value) => return Err(CliError::Config(format!("lambda_max must be > 0, got {value}"))),
        None => 2.0 * minimizer,
    };
    let mut points: Vec<CurvePoint> = (0..=cfg.points)
        .map(|i| {
            let lambda = lambda_max * i as f64 / cfg.points as f64;
            Ok(CurvePoint { lambda, exponent: exponent_family(&variant, lambda)?, is_minimizer: false })
        })
        .collect::<Result<_, CliError>>()?;
    if minimizer <= lambda_max {
        let row = CurvePoint {
            lambda: minimizer,
            exponent: exponent_family(&variant, minimizer)?,
            is_minimizer: true,
        };
        let at = points.partition_point(|p| p.lambda < minimizer);
        points.insert(at, row);
    }

    let out = open_output(cfg.output.as_deref())?;
    write_curve_csv(out, &cfg.variant, cfg.x, y_or_beta, require(cfg.v, "v", &cfg.variant)?, &points)?;
    Ok(0)
}

/// `simulate`: per-cell estimates, bounds informational, exit 0.
pub fn run_simulate(cfg: SimulateConfig) -> Result<i32, CliError> {
    if cfg.cells.is_empty() {
        return Err(CliError::Config("simulate needs at least one cell".into()));
    }
    let settings = cfg.settings();
    let mut rows = Vec::new();
    for (index, cell_cfg) in cfg.cells.into_iter().enumerate() {
        let cell = cell_cfg.into_cell(index)?;
        let estimate = estimate_event(&cell.model, &cell.spec, &settings)?;
        if cell.bounds.is_empty() {
            rows.push(SimulateRow { model_id: cell.model_id, spec: cell.spec, estimate, bound: None });
        } else {
            for &name in &cell.bounds {
                let value = theoretical_bound(&cell.model, &cell.spec, name)?;
                let status = if estimate.upper <= value { "PASS" } else { "FLAGGED" };
                rows.push(SimulateRow {
                    model_id: cell.model_id.clone(),
                    spec: cell.spec,
                    estimate,
                    bound: Some((name.tag().to_string(), value, value - estimate.upper, status)),
                });
            }
        }
    }
    let out = open_output(cfg.output.as_deref())?;
    write_simulate_csv(out, &rows)?;
    Ok(0)
}

fn write_verdict_rows(
    output: Option<&Path>,
    rows: &[DominationRow],
    label: &str,
) -> Result<i32, CliError> {
    let out = open_output(output)?;
    write_domination_csv(out, rows)?;
    let failing = rows.iter().filter(|r| r.gating && !r.pass).count();
    let flagged = rows.iter().filter(|r| !r.gating && !r.pass).count();
    eprintln!(
        "{label}: {} rows, {} gating failures, {} informational flags",
        rows.len(),
        failing,
        flagged
    );
    Ok(if failing == 0 { 0 } else { 2 })
}

/// `verify`: domination suite; exit 0 on all-pass, 2 on any gating failure.
pub fn run_verify(cfg: SimulateConfig) -> Result<i32, CliError> {
    let settings = cfg.settings();
    let cells = if cfg.cells.is_empty() {
        crate::suites::default_verify_cells()
    } else {
        cfg.cells
            .into_iter()
            .enumerate()
            .map(|(index, cell)| {
                let cell = cell.into_cell(index)?;
                if cell.bounds.is_empty() {
                    return Err(CliError::Config(format!(
                        "verify cell '{}' needs at least one bound",
                        cell.model_id
                    )));
                }
                Ok(cell)
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    let report: DominationReport = verify_domination(&cells, &settings, cfg.falsify_bounds)?;
    write_verdict_rows(cfg.output.as_deref(), &report.rows, "verify")
}

/// `tightness`: two-point optimized-Chernoff table.
pub fn run_tightness(cfg: &TightnessConfig) -> Result<i32, CliError> {
    let rows = tightness_twopoint(cfg.x, cfg.y, cfg.v, &cfg.n_list, cfg.resolution)?;
    let out = open_output(cfg.output.as_deref())?;
    write_tightness_csv(out, cfg.x, cfg.y, cfg.v, &rows)?;
    Ok(0)
}

/// `selfnorm`: self-normalized domination report; the derived constant
/// gates (and the printed one at β = 2), exit 2 on gating failure.
pub fn run_selfnorm(cfg: SelfnormConfig) -> Result<i32, CliError> {
    let settings = cfg.settings();
    let experiments = if cfg.experiments.is_empty() {
        crate::suites::default_selfnorm_experiments()
    } else {
        cfg.experiments
    };
    let mut rows = Vec::new();
    for (index, experiment) in experiments.into_iter().enumerate() {
        experiment
            .model
            .validate()
            .map_err(|e| CliError::Config(format!("experiment #{index}: {e}")))?;
        let model_id = experiment.model_id.unwrap_or_else(|| format!("experiment_{index}"));
        rows.extend(selfnorm_experiment(
            &model_id,
            &experiment.model,
            experiment.beta,
            &experiment.x_grid,
            experiment.n,
            &settings,
        )?);
    }
    write_verdict_rows(cfg.output.as_deref(), &rows, "selfnorm")
}

/// `lemmas`: randomized conditional-expectation lemma battery, exit 0/2.
pub fn run_lemmas(cfg: &LemmasConfig) -> Result<i32, CliError> {
    let report = lemma_suite(cfg.seed, cfg.models);
    println!(
        "lemma suite: {} checks over {} models per lemma, {} violations",
        report.checks,
        cfg.models,
        report.violations.len()
    );
    for violation in &report.violations {
        eprintln!(
            "violation: {:?} lambda={} lhs={} rhs={} model={}",
            violation.variant, violation.lambda, violation.lhs, violation.rhs, violation.model
        );
    }
    Ok(if report.all_hold() { 0 } else { 2 })
}
