//! Catalog of i.i.d. increment models with exact moment oracles.
//!
//! Every model exposes its truncated conditional moments in closed form or
//! by exact finite summation, which is what lets the characteristic and
//! event layers run with zero-tolerance tests. Conditional expectations are
//! per-step constants because all catalog models are i.i.d.; adapted,
//! path-dependent models are unsupported rather than approximated.
//!
//! Models serialize to/from a JSON object `{"kind": ..., parameters...}`:
//!
//! ```text
//! {"kind": "finite_support", "atoms": [[-2.0, 0.25], [1.0, 0.75]]}
//! {"kind": "two_point_sym", "level": 1.0, "p": 0.5}
//! {"kind": "rademacher"}
//! {"kind": "bounded_supermg", "atoms": [[-1.0, 0.5], [0.5, 0.5]], "bound": 1.0}
//! {"kind": "sym_pareto", "alpha": 2.5, "scale": 1.0}
//! ```
//!
//! Deserialized models must be checked with [`IncrementModel::validate`];
//! the provided constructors validate on construction.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bounds::{cosh_kernel, g_kernel};
use crate::characteristics::Path;
use crate::rng::SubStream;
use crate::{Error, Result};

/// Probability mass bookkeeping tolerance: atom probabilities must sum to 1
/// within this.
const MASS_TOL: f64 = 1e-15;

/// Tolerance on the supermartingale mean condition `E ξ ≤ 0`, covering
/// float rounding in authored atom lists.
const MEAN_TOL: f64 = 1e-12;

/// An i.i.d. increment distribution with exact moment oracles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "ModelRepr")]
pub enum IncrementModel {
    /// Arbitrary finite support: `(value, probability)` atoms.
    FiniteSupport { atoms: Vec<(f64, f64)> },
    /// `P(ξ = ±level) = p/2`, `P(ξ = 0) = 1 - p`.
    TwoPointSym { level: f64, p: f64 },
    /// `P(ξ = ±1) = 1/2`.
    Rademacher,
    /// Finite support with mean ≤ 0 and every atom ≤ `bound`.
    BoundedSupermg { atoms: Vec<(f64, f64)>, bound: f64 },
    /// `|ξ|` Pareto with tail `P(|ξ| > r) = (scale/r)^alpha` for
    /// `r ≥ scale`, sign independent and uniform on `±1`.
    SymPareto { alpha: f64, scale: f64 },
}

/// Flat wire representation; internally tagged enums cannot enforce
/// `deny_unknown_fields`, so deserialization goes through this and checks
/// field applicability per kind.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelRepr {
    kind: String,
    atoms: Option<Vec<(f64, f64)>>,
    level: Option<f64>,
    p: Option<f64>,
    bound: Option<f64>,
    alpha: Option<f64>,
    scale: Option<f64>,
}

impl TryFrom<ModelRepr> for IncrementModel {
    type Error = String;

    fn try_from(repr: ModelRepr) -> std::result::Result<Self, String> {
        fn take<T>(field: Option<T>, name: &str, kind: &str) -> std::result::Result<T, String> {
            field.ok_or_else(|| format!("model kind '{kind}' requires field '{name}'"))
        }
        let expect_absent = |fields: &[(&str, bool)]| -> std::result::Result<(), String> {
            for &(name, present) in fields {
                if present {
                    return Err(format!("field '{name}' does not apply to model kind '{}'", repr.kind));
                }
            }
            Ok(())
        };
        let model = match repr.kind.as_str() {
            "finite_support" => {
                expect_absent(&[
                    ("level", repr.level.is_some()),
                    ("p", repr.p.is_some()),
                    ("bound", repr.bound.is_some()),
                    ("alpha", repr.alpha.is_some()),
                    ("scale", repr.scale.is_some()),
                ])?;
                IncrementModel::FiniteSupport { atoms: take(repr.atoms, "atoms", "finite_support")? }
            }
            "two_point_sym" => {
                expect_absent(&[
                    ("atoms", repr.atoms.is_some()),
                    ("bound", repr.bound.is_some()),
                    ("alpha", repr.alpha.is_some()),
                    ("scale", repr.scale.is_some()),
                ])?;
                IncrementModel::TwoPointSym {
                    level: take(repr.level, "level", "two_point_sym")?,
                    p: take(repr.p, "p", "two_point_sym")?,
                }
            }
            "rademacher" => {
                expect_absent(&[
                    ("atoms", repr.atoms.is_some()),
                    ("level", repr.level.is_some()),
                    ("p", repr.p.is_some()),
                    ("bound", repr.bound.is_some()),
                    ("alpha", repr.alpha.is_some()),
                    ("scale", repr.scale.is_some()),
                ])?;
                IncrementModel::Rademacher
            }
            "bounded_supermg" => {
                expect_absent(&[
                    ("level", repr.level.is_some()),
                    ("p", repr.p.is_some()),
                    ("alpha", repr.alpha.is_some()),
                    ("scale", repr.scale.is_some()),
                ])?;
                IncrementModel::BoundedSupermg {
                    atoms: take(repr.atoms, "atoms", "bounded_supermg")?,
                    bound: take(repr.bound, "bound", "bounded_supermg")?,
                }
            }
            "sym_pareto" => {
                expect_absent(&[
                    ("atoms", repr.atoms.is_some()),
                    ("level", repr.level.is_some()),
                    ("p", repr.p.is_some()),
                    ("bound", repr.bound.is_some()),
                ])?;
                IncrementModel::SymPareto {
                    alpha: take(repr.alpha, "alpha", "sym_pareto")?,
                    scale: take(repr.scale, "scale", "sym_pareto")?,
                }
            }
            other => return Err(format!("unknown model kind '{other}'")),
        };
        Ok(model)
    }
}

fn validate_atoms(atoms: &[(f64, f64)]) -> Result<()> {
    if atoms.is_empty() {
        return Err(Error::domain("finite-support model needs at least one atom"));
    }
    let mut total = 0.0;
    for &(v, p) in atoms {
        if !v.is_finite() {
            return Err(Error::domain(format!("atom value must be finite, got {v}")));
        }
        if !(p >= 0.0) || !p.is_finite() {
            return Err(Error::domain(format!("atom probability must be >= 0, got {p}")));
        }
        total += p;
    }
    if (total - 1.0).abs() > MASS_TOL {
        return Err(Error::domain(format!(
            "atom probabilities must sum to 1 within {MASS_TOL:e}, got {total}"
        )));
    }
    Ok(())
}

impl IncrementModel {
    pub fn finite_support(atoms: Vec<(f64, f64)>) -> Result<Self> {
        let model = IncrementModel::FiniteSupport { atoms };
        model.validate()?;
        Ok(model)
    }

    /// Finite support with uniform mass on the given values.
    pub fn uniform(values: &[f64]) -> Result<Self> {
        let p = 1.0 / values.len() as f64;
        Self::finite_support(values.iter().map(|&v| (v, p)).collect())
    }

    pub fn two_point_sym(level: f64, p: f64) -> Result<Self> {
        let model = IncrementModel::TwoPointSym { level, p };
        model.validate()?;
        Ok(model)
    }

    /// The tightness parametrization: mass `p = v²/(n y²)` on `±y`.
    pub fn two_point_from_budget(level: f64, v: f64, n: u64) -> Result<Self> {
        if !(level > 0.0) || !(v > 0.0) || n == 0 {
            return Err(Error::domain(format!(
                "two-point budget parametrization needs level > 0, v > 0, n >= 1; got ({level}, {v}, {n})"
            )));
        }
        let p = v * v / (n as f64 * level * level);
        if p > 1.0 {
            return Err(Error::domain(format!(
                "two-point mass v²/(n y²) = {p} exceeds 1; needs v² <= n y²"
            )));
        }
        Self::two_point_sym(level, p)
    }

    pub fn bounded_supermg(atoms: Vec<(f64, f64)>, bound: f64) -> Result<Self> {
        let model = IncrementModel::BoundedSupermg { atoms, bound };
        model.validate()?;
        Ok(model)
    }

    pub fn sym_pareto(alpha: f64, scale: f64) -> Result<Self> {
        let model = IncrementModel::SymPareto { alpha, scale };
        model.validate()?;
        Ok(model)
    }

    /// Check the model invariants; deserialized models must pass through
    /// this before use.
    pub fn validate(&self) -> Result<()> {
        match self {
            IncrementModel::FiniteSupport { atoms } => validate_atoms(atoms),
            IncrementModel::TwoPointSym { level, p } => {
                if !(level > &0.0) || !level.is_finite() {
                    return Err(Error::domain(format!("two-point level must be > 0, got {level}")));
                }
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::domain(format!("two-point mass p must lie in [0, 1], got {p}")));
                }
                Ok(())
            }
            IncrementModel::Rademacher => Ok(()),
            IncrementModel::BoundedSupermg { atoms, bound } => {
                validate_atoms(atoms)?;
                if !bound.is_finite() || !(bound > &0.0) {
                    return Err(Error::domain(format!("bound must be finite and > 0, got {bound}")));
                }
                let mean: f64 = atoms.iter().map(|&(v, p)| v * p).sum();
                if mean > MEAN_TOL {
                    return Err(Error::domain(format!(
                        "bounded supermartingale model must have mean <= 0, got {mean}"
                    )));
                }
                if let Some(&(v, _)) = atoms.iter().filter(|&&(_, p)| p > 0.0).find(|&&(v, _)| v > *bound) {
                    return Err(Error::domain(format!("atom {v} exceeds the declared bound {bound}")));
                }
                Ok(())
            }
            IncrementModel::SymPareto { alpha, scale } => {
                if !(alpha > &0.0) || !alpha.is_finite() {
                    return Err(Error::domain(format!("pareto tail index must be > 0, got {alpha}")));
                }
                if !(scale > &0.0) || !scale.is_finite() {
                    return Err(Error::domain(format!("pareto scale must be > 0, got {scale}")));
                }
                Ok(())
            }
        }
    }

    /// Atom list for discrete models, in ascending value order where the
    /// variant defines one; `None` for continuous models.
    pub fn atoms(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            IncrementModel::FiniteSupport { atoms } | IncrementModel::BoundedSupermg { atoms, .. } => {
                Some(atoms.clone())
            }
            IncrementModel::TwoPointSym { level, p } => {
                Some(vec![(-level, p / 2.0), (0.0, 1.0 - p), (*level, p / 2.0)])
            }
            IncrementModel::Rademacher => Some(vec![(-1.0, 0.5), (1.0, 0.5)]),
            IncrementModel::SymPareto { .. } => None,
        }
    }

    /// Exact mean, when it exists. `None` for the Pareto model with
    /// `alpha <= 1` (non-integrable).
    pub fn mean(&self) -> Option<f64> {
        match self {
            IncrementModel::SymPareto { alpha, .. } => (*alpha > 1.0).then_some(0.0),
            _ => Some(self.atoms().unwrap().iter().map(|&(v, p)| v * p).sum()),
        }
    }

    /// Whether the model satisfies the supermartingale-difference condition
    /// `E ξ ≤ 0` (within float tolerance on authored atoms).
    pub fn has_nonpositive_mean(&self) -> bool {
        self.mean().is_some_and(|m| m <= MEAN_TOL)
    }

    /// Distributional symmetry `P(ξ > r) = P(ξ < -r)`. Discrete atoms are
    /// matched by exact value/mass equality after aggregation.
    pub fn is_symmetric(&self) -> bool {
        match self {
            IncrementModel::TwoPointSym { .. }
            | IncrementModel::Rademacher
            | IncrementModel::SymPareto { .. } => true,
            IncrementModel::FiniteSupport { .. } | IncrementModel::BoundedSupermg { .. } => {
                let mut atoms: Vec<(f64, f64)> = self
                    .atoms()
                    .unwrap()
                    .into_iter()
                    .filter(|&(_, p)| p > 0.0)
                    .collect();
                atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
                // Merge duplicates.
                let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
                for (v, p) in atoms {
                    match merged.last_mut() {
                        Some(last) if last.0 == v => last.1 += p,
                        _ => merged.push((v, p)),
                    }
                }
                let n = merged.len();
                (0..n).all(|i| {
                    let (v, p) = merged[i];
                    let (mv, mp) = merged[n - 1 - i];
                    mv == -v && mp == p
                })
            }
        }
    }

    /// Largest support value, `None` when unbounded above.
    pub fn support_max(&self) -> Option<f64> {
        self.atoms().map(|atoms| {
            atoms
                .iter()
                .filter(|&&(_, p)| p > 0.0)
                .map(|&(v, _)| v)
                .fold(f64::NEG_INFINITY, f64::max)
        })
    }

    /// Largest absolute support value, `None` when unbounded.
    pub fn support_abs_max(&self) -> Option<f64> {
        self.atoms().map(|atoms| {
            atoms
                .iter()
                .filter(|&&(_, p)| p > 0.0)
                .map(|&(v, _)| v.abs())
                .fold(0.0, f64::max)
        })
    }
}

impl fmt::Display for IncrementModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IncrementModel::FiniteSupport { atoms } => write!(f, "finite_support[{} atoms]", atoms.len()),
            IncrementModel::TwoPointSym { level, p } => write!(f, "two_point_sym(level={level}, p={p})"),
            IncrementModel::Rademacher => write!(f, "rademacher"),
            IncrementModel::BoundedSupermg { atoms, bound } => {
                write!(f, "bounded_supermg[{} atoms, bound={bound}]", atoms.len())
            }
            IncrementModel::SymPareto { alpha, scale } => {
                write!(f, "sym_pareto(alpha={alpha}, scale={scale})")
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Exact moments
// ---------------------------------------------------------------------------

/// A truncated or power moment of an increment distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MomentQuery {
    /// `E ξ²`
    Second,
    /// `E(ξ² 1{ξ ≤ y})`
    SecondBelow(f64),
    /// `E(ξ² 1{|ξ| ≤ y})`
    SecondAbsBelow(f64),
    /// `E((ξ⁻)^β)`
    BetaNeg(f64),
    /// `E(|ξ|^β)`
    BetaAbs(f64),
}

impl fmt::Display for MomentQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MomentQuery::Second => write!(f, "E[xi^2]"),
            MomentQuery::SecondBelow(y) => write!(f, "E[xi^2; xi <= {y}]"),
            MomentQuery::SecondAbsBelow(y) => write!(f, "E[xi^2; |xi| <= {y}]"),
            MomentQuery::BetaNeg(b) => write!(f, "E[(xi^-)^{b}]"),
            MomentQuery::BetaAbs(b) => write!(f, "E[|xi|^{b}]"),
        }
    }
}

fn infinite(model: &IncrementModel, q: MomentQuery) -> Error {
    Error::InfiniteMoment { model: model.to_string(), query: q.to_string() }
}

fn validate_query(q: MomentQuery) -> Result<()> {
    match q {
        MomentQuery::Second => Ok(()),
        MomentQuery::SecondBelow(y) | MomentQuery::SecondAbsBelow(y) => {
            if y.is_nan() || y < 0.0 {
                Err(Error::domain(format!("truncation level must be >= 0, got {y}")))
            } else {
                Ok(())
            }
        }
        MomentQuery::BetaNeg(b) | MomentQuery::BetaAbs(b) => {
            if b > 1.0 && b <= 2.0 {
                Ok(())
            } else {
                Err(Error::domain(format!("beta must lie in (1, 2], got {b}")))
            }
        }
    }
}

/// Exact value of the queried moment: finite summation for discrete models,
/// closed-form Pareto integrals for the continuous one.
///
/// Truncation levels accept `f64::INFINITY` as the "no truncation"
/// sentinel, under which the truncated queries reduce to their full
/// counterparts.
pub fn exact_moment(model: &IncrementModel, q: MomentQuery) -> Result<f64> {
    validate_query(q)?;
    if let Some(atoms) = model.atoms() {
        let value = match q {
            MomentQuery::Second => atoms.iter().map(|&(v, p)| p * v * v).sum(),
            MomentQuery::SecondBelow(y) => {
                atoms.iter().filter(|&&(v, _)| v <= y).map(|&(v, p)| p * v * v).sum()
            }
            MomentQuery::SecondAbsBelow(y) => {
                atoms.iter().filter(|&&(v, _)| v.abs() <= y).map(|&(v, p)| p * v * v).sum()
            }
            MomentQuery::BetaNeg(b) => atoms
                .iter()
                .filter(|&&(v, _)| v < 0.0)
                .map(|&(v, p)| p * (-v).powf(b))
                .sum(),
            MomentQuery::BetaAbs(b) => atoms.iter().map(|&(v, p)| p * v.abs().powf(b)).sum(),
        };
        return Ok(value);
    }

    let IncrementModel::SymPareto { alpha, scale } = *model else { unreachable!() };
    // E r^q over the magnitude law: alpha scale^q / (alpha - q) for alpha > q.
    let abs_power = |q_pow: f64| -> Option<f64> {
        (alpha > q_pow).then(|| alpha * scale.powf(q_pow) / (alpha - q_pow))
    };
    // E(r^2 1{r <= y}); finite for every alpha when y is.
    let second_abs_below = |y: f64| -> Option<f64> {
        if y.is_infinite() {
            return abs_power(2.0);
        }
        if y < scale {
            return Some(0.0);
        }
        if alpha == 2.0 {
            Some(2.0 * scale * scale * (y / scale).ln())
        } else {
            Some(alpha / (alpha - 2.0) * scale * scale * (1.0 - (y / scale).powf(2.0 - alpha)))
        }
    };
    let value = match q {
        MomentQuery::Second => abs_power(2.0),
        // Negative half-line is untruncated, so the full second moment must exist.
        MomentQuery::SecondBelow(y) => abs_power(2.0)
            .and_then(|m2| Some(0.5 * second_abs_below(y)? + 0.5 * m2)),
        MomentQuery::SecondAbsBelow(y) => second_abs_below(y),
        MomentQuery::BetaNeg(b) => abs_power(b).map(|m| 0.5 * m),
        MomentQuery::BetaAbs(b) => abs_power(b),
    };
    value.ok_or_else(|| infinite(model, q))
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// Draw `n` i.i.d. increments from the model.
///
/// Discrete models use one uniform draw per increment, selecting the
/// smallest atom index `i` with `u ≤ cum[i]` (boundary ties resolve to the
/// lower-indexed atom). The Pareto model uses two draws per increment:
/// `|ξ| = scale · U^(-1/alpha)` with `U` uniform on `(0, 1)`, then an
/// independent uniform sign.
///
/// Panics if `n == 0`; paths are nonempty by construction.
pub fn sample_path(model: &IncrementModel, n: usize, stream: &mut SubStream) -> Path {
    assert!(n >= 1, "paths must have at least one increment");
    let increments = match model {
        IncrementModel::SymPareto { alpha, scale } => (0..n)
            .map(|_| {
                let magnitude = scale * stream.next_open01().powf(-1.0 / alpha);
                magnitude * stream.next_sign()
            })
            .collect(),
        _ => {
            let atoms = model.atoms().expect("discrete model");
            let values: Vec<f64> = atoms.iter().map(|&(v, _)| v).collect();
            let mut acc = 0.0;
            let cum: Vec<f64> = atoms
                .iter()
                .map(|&(_, p)| {
                    acc += p;
                    acc
                })
                .collect();
            (0..n)
                .map(|_| {
                    let u = stream.next_f64();
                    let idx = cum.partition_point(|&c| c < u).min(values.len() - 1);
                    values[idx]
                })
                .collect()
        }
    };
    Path::new(increments).expect("sampled path is nonempty and finite")
}

// ---------------------------------------------------------------------------
// Conditional-expectation lemmas
// ---------------------------------------------------------------------------

/// Which conditional-expectation lemma to check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LemmaVariant {
    /// `E exp{λξ - ½(λξ)² 1{ξ > y}} ≤ exp{((e^(λy)-1-λy)/y²) E(ξ² 1{ξ ≤ y})}`
    /// for supermartingale differences.
    Bennett { y: f64 },
    /// `E exp{λξ - ½(λξ)² 1{|ξ| > y}} ≤ exp{((cosh(λy)-1)/y²) E(ξ² 1{|ξ| ≤ y})}`
    /// for conditionally symmetric differences.
    Cosh { y: f64 },
    /// `E exp{λξ - (λξ⁺)^β} ≤ exp{λ^β E((ξ⁻)^β)}` for supermartingale
    /// differences.
    Beta { beta: f64 },
}

/// Evaluate both sides of the selected lemma exactly over a finite-support
/// model. Returns `(lhs, rhs)`; the lemma asserts `lhs ≤ rhs`.
pub fn lemma_gap(model: &IncrementModel, lambda: f64, variant: LemmaVariant) -> Result<(f64, f64)> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain(format!("lambda must be finite and > 0, got {lambda}")));
    }
    let Some(atoms) = model.atoms() else {
        return Err(Error::ModelMismatch(format!(
            "lemma expectations need a finite-support model, got {model}"
        )));
    };
    match variant {
        LemmaVariant::Bennett { y } => {
            if y < 0.0 || y.is_nan() {
                return Err(Error::domain(format!("truncation level must be >= 0, got {y}")));
            }
            if !model.has_nonpositive_mean() {
                return Err(Error::ModelMismatch(format!(
                    "the one-sided lemma needs mean <= 0, got model {model}"
                )));
            }
            let lhs = atoms
                .iter()
                .map(|&(v, p)| {
                    let t = lambda * v;
                    let penalty = if v > y { 0.5 * t * t } else { 0.0 };
                    p * (t - penalty).exp()
                })
                .sum();
            let moment = exact_moment(model, MomentQuery::SecondBelow(y))?;
            let rhs = (lambda * lambda * g_kernel(lambda * y) * moment).exp();
            Ok((lhs, rhs))
        }
        LemmaVariant::Cosh { y } => {
            if y < 0.0 || y.is_nan() {
                return Err(Error::domain(format!("truncation level must be >= 0, got {y}")));
            }
            if !model.is_symmetric() {
                return Err(Error::ModelMismatch(format!(
                    "the cosh lemma needs a symmetric model, got {model}"
                )));
            }
            let lhs = atoms
                .iter()
                .map(|&(v, p)| {
                    let t = lambda * v;
                    let penalty = if v.abs() > y { 0.5 * t * t } else { 0.0 };
                    p * (t - penalty).exp()
                })
                .sum();
            let moment = exact_moment(model, MomentQuery::SecondAbsBelow(y))?;
            let rhs = (lambda * lambda * cosh_kernel(lambda * y) * moment).exp();
            Ok((lhs, rhs))
        }
        LemmaVariant::Beta { beta } => {
            if !(beta > 1.0 && beta < 2.0) {
                return Err(Error::domain(format!("beta must lie in (1, 2), got {beta}")));
            }
            if !model.has_nonpositive_mean() {
                return Err(Error::ModelMismatch(format!(
                    "the power lemma needs mean <= 0, got model {model}"
                )));
            }
            let lhs = atoms
                .iter()
                .map(|&(v, p)| {
                    let t = lambda * v;
                    p * (t - t.max(0.0).powf(beta)).exp()
                })
                .sum();
            let moment = exact_moment(model, MomentQuery::BetaNeg(beta))?;
            let rhs = (lambda.powf(beta) * moment).exp();
            Ok((lhs, rhs))
        }
    }
}

// ---------------------------------------------------------------------------
// Randomized lemma suite
// ---------------------------------------------------------------------------

/// One lemma violation found by [`lemma_suite`].
#[derive(Debug, Clone)]
pub struct LemmaViolation {
    pub variant: LemmaVariant,
    pub lambda: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub model: IncrementModel,
}

/// Outcome of the randomized lemma battery.
#[derive(Debug, Clone)]
pub struct LemmaSuiteReport {
    pub checks: usize,
    pub violations: Vec<LemmaViolation>,
}

impl LemmaSuiteReport {
    pub fn all_hold(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Absolute slack on `lhs ≤ rhs` in the randomized suite.
pub const LEMMA_SLACK: f64 = 1e-12;

const LAMBDA_GRID: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];
const Y_GRID: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
const BETA_GRID: [f64; 3] = [1.2, 1.5, 1.8];

/// A random finite-support model: 2–5 atoms, values uniform in
/// `[-range, range]`, random masses.
pub fn random_finite_support(stream: &mut SubStream, range: f64) -> IncrementModel {
    let k = 2 + (stream.next_u64() % 4) as usize;
    let values: Vec<f64> = (0..k).map(|_| (2.0 * stream.next_f64() - 1.0) * range).collect();
    let weights: Vec<f64> = (0..k).map(|_| stream.next_open01()).collect();
    let total: f64 = weights.iter().sum();
    let mut atoms: Vec<(f64, f64)> = values
        .iter()
        .zip(&weights)
        .map(|(&v, &w)| (v, w / total))
        .collect();
    // Pin the mass sum to exactly 1 by complementing the last atom.
    let head: f64 = atoms[..k - 1].iter().map(|&(_, p)| p).sum();
    atoms[k - 1].1 = (1.0 - head).max(0.0);
    IncrementModel::finite_support(atoms).expect("random atoms are valid")
}

/// Shift atom values so the mean is ≤ 0 (no-op when it already is).
pub fn recenter_nonpositive(model: &IncrementModel) -> IncrementModel {
    let atoms = model.atoms().expect("finite support");
    let mean: f64 = atoms.iter().map(|&(v, p)| v * p).sum();
    if mean <= 0.0 {
        return model.clone();
    }
    let shifted = atoms.into_iter().map(|(v, p)| (v - mean, p)).collect();
    IncrementModel::finite_support(shifted).expect("shifted atoms are valid")
}

/// Symmetrize by mirroring every atom with halved mass.
pub fn symmetrize(model: &IncrementModel) -> IncrementModel {
    let atoms = model.atoms().expect("finite support");
    let mut sym: Vec<(f64, f64)> = Vec::with_capacity(2 * atoms.len());
    for &(v, p) in &atoms {
        sym.push((v, p / 2.0));
        sym.push((-v, p / 2.0));
    }
    // Aggregate exact duplicates so the symmetry check sees matched masses.
    sym.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(sym.len());
    for (v, p) in sym {
        match merged.last_mut() {
            Some(last) if last.0 == v => last.1 += p,
            _ => merged.push((v, p)),
        }
    }
    IncrementModel::finite_support(merged).expect("mirrored atoms are valid")
}

/// Run the randomized lemma battery: `models_per_variant` random
/// finite-support models per lemma (recentered or symmetrized to meet each
/// lemma's hypothesis), checked across the λ, y, and β grids.
pub fn lemma_suite(master_seed: u64, models_per_variant: usize) -> LemmaSuiteReport {
    let mut checks = 0;
    let mut violations = Vec::new();
    let mut check = |model: &IncrementModel, lambda: f64, variant: LemmaVariant| {
        let (lhs, rhs) = lemma_gap(model, lambda, variant).expect("suite models meet preconditions");
        checks += 1;
        if lhs > rhs + LEMMA_SLACK {
            violations.push(LemmaViolation { variant, lambda, lhs, rhs, model: model.clone() });
        }
    };

    for i in 0..models_per_variant {
        let raw = random_finite_support(&mut SubStream::new(master_seed, i as u64), 5.0);
        let supermg = recenter_nonpositive(&raw);
        for &lambda in &LAMBDA_GRID {
            for &y in &Y_GRID {
                check(&supermg, lambda, LemmaVariant::Bennett { y });
            }
        }

        let sym = symmetrize(&random_finite_support(
            &mut SubStream::new(master_seed, (1 << 20) + i as u64),
            5.0,
        ));
        for &lambda in &LAMBDA_GRID {
            for &y in &Y_GRID {
                check(&sym, lambda, LemmaVariant::Cosh { y });
            }
        }

        let power = recenter_nonpositive(&random_finite_support(
            &mut SubStream::new(master_seed, (2 << 20) + i as u64),
            5.0,
        ));
        for &lambda in &LAMBDA_GRID {
            for &beta in &BETA_GRID {
                check(&power, lambda, LemmaVariant::Beta { beta });
            }
        }
    }

    LemmaSuiteReport { checks, violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_three() -> IncrementModel {
        IncrementModel::uniform(&[-2.0, 0.5, 3.0]).unwrap()
    }

    #[test]
    fn exact_moments_finite_support() {
        let m = uniform_three();
        let below = exact_moment(&m, MomentQuery::SecondBelow(1.0)).unwrap();
        assert!((below - 4.25 / 3.0).abs() < 1e-15);

        let rad = IncrementModel::Rademacher;
        assert_eq!(exact_moment(&rad, MomentQuery::BetaNeg(1.5)).unwrap(), 0.5);

        // Untruncated sentinel reduces to the plain second moment, bitwise.
        for model in [&m, &rad] {
            let full = exact_moment(model, MomentQuery::Second).unwrap();
            let below = exact_moment(model, MomentQuery::SecondBelow(f64::INFINITY)).unwrap();
            assert_eq!(full, below);
        }
    }

    #[test]
    fn exact_moments_pareto() {
        let m = IncrementModel::sym_pareto(2.5, 1.0).unwrap();
        // E r^2 = alpha/(alpha-2) = 5.
        assert!((exact_moment(&m, MomentQuery::Second).unwrap() - 5.0).abs() < 1e-12);
        // E(r^2; r <= 2) = 5 (1 - 2^(-1/2)).
        let expected = 5.0 * (1.0 - 0.5_f64.sqrt());
        let got = exact_moment(&m, MomentQuery::SecondAbsBelow(2.0)).unwrap();
        assert!((got - expected).abs() < 1e-12);
        // One-sided truncation keeps the full negative half.
        let got = exact_moment(&m, MomentQuery::SecondBelow(2.0)).unwrap();
        assert!((got - 0.5 * (expected + 5.0)).abs() < 1e-12);
        // Below the scale there is no mass.
        assert_eq!(exact_moment(&m, MomentQuery::SecondAbsBelow(0.5)).unwrap(), 0.0);
        // E |r|^1.5 = 2.5/1.0 = 2.5, half of it on the negative side.
        assert!((exact_moment(&m, MomentQuery::BetaAbs(1.5)).unwrap() - 2.5).abs() < 1e-12);
        assert!((exact_moment(&m, MomentQuery::BetaNeg(1.5)).unwrap() - 1.25).abs() < 1e-12);

        let heavy = IncrementModel::sym_pareto(1.2, 1.0).unwrap();
        assert!(exact_moment(&heavy, MomentQuery::Second).is_err());
        assert!(exact_moment(&heavy, MomentQuery::BetaAbs(1.5)).is_err());
        // Two-sided truncation stays finite even for alpha <= 2.
        assert!(exact_moment(&heavy, MomentQuery::SecondAbsBelow(3.0)).unwrap() > 0.0);
    }

    #[test]
    fn moment_queries_validate() {
        let m = IncrementModel::Rademacher;
        assert!(exact_moment(&m, MomentQuery::SecondBelow(-1.0)).is_err());
        assert!(exact_moment(&m, MomentQuery::BetaNeg(1.0)).is_err());
        assert!(exact_moment(&m, MomentQuery::BetaAbs(2.5)).is_err());
    }

    #[test]
    fn model_validation() {
        assert!(IncrementModel::finite_support(vec![(1.0, 0.6), (-1.0, 0.6)]).is_err());
        assert!(IncrementModel::finite_support(vec![]).is_err());
        assert!(IncrementModel::two_point_sym(1.0, 1.5).is_err());
        assert!(IncrementModel::two_point_sym(0.0, 0.5).is_err());
        assert!(IncrementModel::two_point_from_budget(1.0, 2.0, 2).is_err());
        assert!(IncrementModel::two_point_from_budget(1.0, 1.0, 4).is_ok());
        assert!(IncrementModel::bounded_supermg(vec![(0.5, 1.0)], 1.0).is_err()); // mean > 0
        assert!(IncrementModel::bounded_supermg(vec![(2.0, 0.5), (-2.0, 0.5)], 1.0).is_err());
        assert!(IncrementModel::sym_pareto(0.0, 1.0).is_err());
    }

    #[test]
    fn symmetry_detection() {
        assert!(IncrementModel::Rademacher.is_symmetric());
        assert!(IncrementModel::uniform(&[-1.0, 1.0]).unwrap().is_symmetric());
        assert!(!uniform_three().is_symmetric());
        let sym = symmetrize(&uniform_three());
        assert!(sym.is_symmetric());
        assert!((sym.mean().unwrap()).abs() < 1e-15);
    }

    #[test]
    fn sampling_is_deterministic_per_substream() {
        let m = uniform_three();
        let a = sample_path(&m, 32, &mut SubStream::new(9, 4));
        let b = sample_path(&m, 32, &mut SubStream::new(9, 4));
        assert_eq!(a.increments(), b.increments());
    }

    #[test]
    fn degenerate_models_sample_constant_paths() {
        let zero = IncrementModel::two_point_sym(1.0, 0.0).unwrap();
        let p = sample_path(&zero, 16, &mut SubStream::new(1, 0));
        assert!(p.increments().iter().all(|&x| x == 0.0));

        let single = IncrementModel::finite_support(vec![(0.5, 1.0)]).unwrap();
        let p = sample_path(&single, 3, &mut SubStream::new(1, 0));
        assert_eq!(p.increments(), &[0.5, 0.5, 0.5]);
    }

    #[test]
    fn pareto_paths_are_sign_symmetric_with_heavy_tails() {
        let m = IncrementModel::sym_pareto(1.2, 1.0).unwrap();
        let n = 200_000;
        let path = sample_path(&m, n, &mut SubStream::new(77, 0));
        let positives = path.increments().iter().filter(|&&x| x > 0.0).count();
        // 4 sigma band on a fair sign count.
        let band = 4.0 * (0.25 * n as f64).sqrt();
        assert!((positives as f64 - n as f64 / 2.0).abs() < band);
        assert!(path.increments().iter().all(|&x| x.abs() >= 1.0));
        // Two-sided tail frequencies agree at a few thresholds.
        for q in [2.0, 5.0, 20.0] {
            let up = path.increments().iter().filter(|&&x| x >= q).count() as f64;
            let down = path.increments().iter().filter(|&&x| x <= -q).count() as f64;
            let p = q.powf(-1.2) / 2.0;
            let band = 4.0 * (n as f64 * p * (1.0 - p)).sqrt() * 1.5;
            assert!((up - down).abs() < band, "q={q}: up={up} down={down}");
        }
    }

    #[test]
    fn lemma_gap_reference_values() {
        let rad = IncrementModel::Rademacher;

        let (lhs, rhs) = lemma_gap(&rad, 1.0, LemmaVariant::Bennett { y: 0.5 }).unwrap();
        assert!((lhs - (0.5_f64.exp() + (-1.0_f64).exp()) / 2.0).abs() < 1e-12);
        let kernel = (0.5_f64.exp() - 1.5) / 0.25;
        assert!((rhs - (kernel * 0.5).exp()).abs() < 1e-12);
        assert!(lhs <= rhs);

        let (lhs, rhs) = lemma_gap(&rad, 1.0, LemmaVariant::Cosh { y: 0.5 }).unwrap();
        assert!((lhs - (0.5_f64.exp() + (-1.5_f64).exp()) / 2.0).abs() < 1e-12);
        assert_eq!(rhs, 1.0);
        assert!(lhs <= rhs);

        let (lhs, rhs) = lemma_gap(&rad, 1.0, LemmaVariant::Beta { beta: 1.5 }).unwrap();
        assert!((lhs - (1.0 + (-1.0_f64).exp()) / 2.0).abs() < 1e-12);
        assert!((rhs - 0.5_f64.exp()).abs() < 1e-12);
        assert!(lhs <= rhs);
    }

    #[test]
    fn lemma_gap_rejects_mismatched_models() {
        let positive_mean = IncrementModel::uniform(&[-1.0, 2.0]).unwrap();
        assert!(lemma_gap(&positive_mean, 1.0, LemmaVariant::Bennett { y: 1.0 }).is_err());
        assert!(lemma_gap(&uniform_three(), 1.0, LemmaVariant::Cosh { y: 1.0 }).is_err());
        let pareto = IncrementModel::sym_pareto(2.5, 1.0).unwrap();
        assert!(lemma_gap(&pareto, 1.0, LemmaVariant::Cosh { y: 1.0 }).is_err());
    }

    #[test]
    fn small_lemma_suite_holds() {
        let report = lemma_suite(2024, 50);
        assert!(report.all_hold(), "violations: {:?}", report.violations);
        assert_eq!(report.checks, 50 * (20 + 20 + 15));
    }

    #[test]
    fn model_json_round_trip() {
        let models = vec![
            uniform_three(),
            IncrementModel::two_point_sym(1.0, 0.5).unwrap(),
            IncrementModel::Rademacher,
            IncrementModel::bounded_supermg(vec![(-1.0, 0.5), (0.5, 0.4), (1.0, 0.1)], 1.0).unwrap(),
            IncrementModel::sym_pareto(2.5, 1.0).unwrap(),
        ];
        for m in models {
            let json = serde_json::to_string(&m).unwrap();
            let back: IncrementModel = serde_json::from_str(&json).unwrap();
            back.validate().unwrap();
            assert_eq!(m, back);
        }
        let parsed: IncrementModel = serde_json::from_str(r#"{"kind":"rademacher"}"#).unwrap();
        assert_eq!(parsed, IncrementModel::Rademacher);
        assert!(serde_json::from_str::<IncrementModel>(r#"{"kind":"rademacher","extra":1}"#).is_err());
    }
}
