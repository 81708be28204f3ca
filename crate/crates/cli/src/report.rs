//! Deterministic CSV reports.
//!
//! Column contract for `simulate`/`verify`/`selfnorm`:
//!
//! ```text
//! model_id,event_mode,char_kind,y_or_beta,x,budget,n,trials,hits,p_hat,
//! upper,bound_name,bound_value,margin,status
//! ```
//!
//! Floating-point fields carry 17 significant digits (round-trip exact);
//! fields that do not apply (the budget of a self-normalized event, bound
//! columns of an unbounded simulate cell) are empty. Output is RFC-4180
//! quoted and byte-identical for a fixed `(seed, config)` pair.

use std::io::Write;

use martail::montecarlo::{DominationRow, EventMode, MCEstimate, TightnessRow};

use crate::CliError;

/// 17 significant digits; parses back to the identical f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_f64(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

pub const DOMINATION_HEADER: [&str; 15] = [
    "model_id",
    "event_mode",
    "char_kind",
    "y_or_beta",
    "x",
    "budget",
    "n",
    "trials",
    "hits",
    "p_hat",
    "upper",
    "bound_name",
    "bound_value",
    "margin",
    "status",
];

/// A `simulate` row: an estimate with optional bound columns.
pub struct SimulateRow {
    pub model_id: String,
    pub spec: martail::montecarlo::EventSpec,
    pub estimate: MCEstimate,
    pub bound: Option<(String, f64, f64, &'static str)>,
}

fn spec_fields(spec: &martail::montecarlo::EventSpec) -> [String; 6] {
    let char_tag = if spec.mode == EventMode::SelfNorm { "v_norm" } else { spec.char_kind.tag() };
    let budget = (spec.mode != EventMode::SelfNorm).then_some(spec.budget);
    [
        spec.mode.tag().to_string(),
        char_tag.to_string(),
        opt_f64(spec.char_param()),
        fmt_f64(spec.x),
        opt_f64(budget),
        spec.horizon.to_string(),
    ]
}

pub fn write_domination_csv<W: Write>(writer: W, rows: &[DominationRow]) -> Result<(), CliError> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(DOMINATION_HEADER)?;
    for row in rows {
        let [mode, char_tag, param, x, budget, n] = spec_fields(&row.spec);
        csv.write_record([
            row.model_id.clone(),
            mode,
            char_tag,
            param,
            x,
            budget,
            n,
            row.estimate.trials.to_string(),
            row.estimate.hits.to_string(),
            fmt_f64(row.estimate.p_hat),
            fmt_f64(row.estimate.upper),
            row.bound_name.tag().to_string(),
            fmt_f64(row.bound_value),
            fmt_f64(row.margin),
            row.status().to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_simulate_csv<W: Write>(writer: W, rows: &[SimulateRow]) -> Result<(), CliError> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(DOMINATION_HEADER)?;
    for row in rows {
        let [mode, char_tag, param, x, budget, n] = spec_fields(&row.spec);
        let (bound_name, bound_value, margin, status) = match &row.bound {
            Some((name, value, margin, status)) => {
                (name.clone(), fmt_f64(*value), fmt_f64(*margin), status.to_string())
            }
            None => (String::new(), String::new(), String::new(), String::new()),
        };
        csv.write_record([
            row.model_id.clone(),
            mode,
            char_tag,
            param,
            x,
            budget,
            n,
            row.estimate.trials.to_string(),
            row.estimate.hits.to_string(),
            fmt_f64(row.estimate.p_hat),
            fmt_f64(row.estimate.upper),
            bound_name,
            bound_value,
            margin,
            status,
        ])?;
    }
    csv.flush()?;
    Ok(())
}

pub const TIGHTNESS_HEADER: [&str; 9] =
    ["x", "y", "v", "n", "p", "lambda", "chernoff_inf", "b0", "gap"];

pub fn write_tightness_csv<W: Write>(
    writer: W,
    x: f64,
    y: f64,
    v: f64,
    rows: &[TightnessRow],
) -> Result<(), CliError> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(TIGHTNESS_HEADER)?;
    for row in rows {
        csv.write_record([
            fmt_f64(x),
            fmt_f64(y),
            fmt_f64(v),
            row.n.to_string(),
            fmt_f64(row.p),
            fmt_f64(row.lambda),
            fmt_f64(row.chernoff_inf),
            fmt_f64(row.b0),
            fmt_f64(row.gap),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// One λ-grid point of a `curve` report.
pub struct CurvePoint {
    pub lambda: f64,
    pub exponent: f64,
    pub is_minimizer: bool,
}

pub const CURVE_HEADER: [&str; 7] = ["variant", "x", "y_or_beta", "v", "lambda", "exponent", "is_minimizer"];

pub fn write_curve_csv<W: Write>(
    writer: W,
    variant: &str,
    x: f64,
    y_or_beta: Option<f64>,
    v: f64,
    points: &[CurvePoint],
) -> Result<(), CliError> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(CURVE_HEADER)?;
    for point in points {
        csv.write_record([
            variant.to_string(),
            fmt_f64(x),
            opt_f64(y_or_beta),
            fmt_f64(v),
            fmt_f64(point.lambda),
            fmt_f64(point.exponent),
            if point.is_minimizer { "1" } else { "0" }.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}
