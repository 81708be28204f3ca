//! k-indexed characteristics of a realized path.
//!
//! For a path `ξ_1..ξ_n` with partial sums `S_k` and a model supplying
//! exact conditional moments, the characteristics are the nondecreasing
//! cumulative series
//!
//! ```text
//! ⟨S⟩_k  = Σ E(ξ_i²)                                   quadratic characteristic
//! [S]_k  = Σ ξ_i²                                      squared variation
//! G_k^y  = Σ ( E(ξ_i² 1{ξ_i ≤ y})  + ξ_i² 1{ξ_i > y} )
//! H_k^y  = Σ ( E(ξ_i²)             + ξ_i² 1{|ξ_i| > y} )
//! M_k^y  = Σ ( E(ξ_i² 1{|ξ_i| ≤ y}) + ξ_i² 1{|ξ_i| > y} )
//! G_k(β) = Σ ( E((ξ_i⁻)^β)          + (ξ_i⁺)^β )
//! ```
//!
//! each splitting mass between an exact conditional part (a per-step
//! constant for i.i.d. models) and a realized part read off the path. The
//! reductions `G^a = ⟨S⟩` for models bounded above by `a`, `M^a = H^a = ⟨S⟩`
//! for models with `|ξ| ≤ a`, and `M^0 = [S]` hold exactly, not up to
//! tolerance.
//!
//! `y = +∞` (the [`TRUNC_MAX`] sentinel) disables truncation.

use crate::processes::{exact_moment, IncrementModel, MomentQuery};
use crate::{Error, Result};

/// Sentinel truncation level denoting `y = +∞`.
pub const TRUNC_MAX: f64 = f64::INFINITY;

/// A realized increment sequence with cached partial sums.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    increments: Vec<f64>,
    partial_sums: Vec<f64>,
}

impl Path {
    /// Wrap increments `ξ_1..ξ_n`, `n ≥ 1`, caching `S_k = Σ_{i≤k} ξ_i`.
    pub fn new(increments: Vec<f64>) -> Result<Self> {
        if increments.is_empty() {
            return Err(Error::domain("a path needs at least one increment"));
        }
        if let Some(bad) = increments.iter().find(|x| !x.is_finite()) {
            return Err(Error::domain(format!("increments must be finite, got {bad}")));
        }
        let mut acc = 0.0;
        let partial_sums = increments
            .iter()
            .map(|&xi| {
                acc += xi;
                acc
            })
            .collect();
        Ok(Path { increments, partial_sums })
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    pub fn partial_sums(&self) -> &[f64] {
        &self.partial_sums
    }

    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n ≥ 1 by construction
    }

    /// `max_{1≤k≤n} S_k`.
    pub fn max_partial_sum(&self) -> f64 {
        self.partial_sums.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Which characteristic a series carries, with its truncation or power
/// parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CharKind {
    /// `⟨S⟩_k`
    QuadChar,
    /// `[S]_k`
    SqVar,
    /// `G_k^y`
    G { y: f64 },
    /// `H_k^y`
    H { y: f64 },
    /// `M_k^y`
    M { y: f64 },
    /// `G_k(β)`
    GBeta { beta: f64 },
}

impl CharKind {
    /// Short lowercase tag, matching the CLI/CSV vocabulary.
    pub fn tag(&self) -> &'static str {
        match self {
            CharKind::QuadChar => "quad_char",
            CharKind::SqVar => "sq_var",
            CharKind::G { .. } => "g",
            CharKind::H { .. } => "h",
            CharKind::M { .. } => "m",
            CharKind::GBeta { .. } => "g_beta",
        }
    }

    /// The `y` or `β` parameter, when the kind carries one.
    pub fn param(&self) -> Option<f64> {
        match *self {
            CharKind::QuadChar | CharKind::SqVar => None,
            CharKind::G { y } | CharKind::H { y } | CharKind::M { y } => Some(y),
            CharKind::GBeta { beta } => Some(beta),
        }
    }
}

/// A nondecreasing, nonnegative cumulative characteristic trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct CharSeries {
    kind: CharKind,
    values: Vec<f64>,
}

impl CharSeries {
    pub fn kind(&self) -> CharKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Terminal value, the characteristic over the full path.
    pub fn terminal(&self) -> f64 {
        *self.values.last().expect("series is nonempty")
    }
}

enum Realized {
    None,
    Square,
    /// `ξ² 1{ξ > y}`
    SquareAboveSigned(f64),
    /// `ξ² 1{|ξ| > y}`
    SquareAboveAbs(f64),
    /// `(ξ⁺)^β`
    PosPowBeta(f64),
}

/// Per-step characteristic increments for one `(model, kind)` pair: the
/// conditional moment is resolved once, the realized part is a function of
/// the increment. Used both for whole-series computation and for the
/// incremental scans in event detection.
pub struct CharEvaluator {
    kind: CharKind,
    cond: f64,
    realized: Realized,
}

impl CharEvaluator {
    pub fn new(model: &IncrementModel, kind: CharKind) -> Result<Self> {
        let (cond, realized) = match kind {
            CharKind::QuadChar => (exact_moment(model, MomentQuery::Second)?, Realized::None),
            CharKind::SqVar => (0.0, Realized::Square),
            CharKind::G { y } => (
                exact_moment(model, MomentQuery::SecondBelow(y))?,
                Realized::SquareAboveSigned(y),
            ),
            CharKind::H { y } => {
                validate_level(y)?;
                (exact_moment(model, MomentQuery::Second)?, Realized::SquareAboveAbs(y))
            }
            CharKind::M { y } => (
                exact_moment(model, MomentQuery::SecondAbsBelow(y))?,
                Realized::SquareAboveAbs(y),
            ),
            CharKind::GBeta { beta } => {
                if !(beta > 1.0 && beta < 2.0) {
                    return Err(Error::domain(format!(
                        "the power characteristic needs beta in (1, 2), got {beta}"
                    )));
                }
                (exact_moment(model, MomentQuery::BetaNeg(beta))?, Realized::PosPowBeta(beta))
            }
        };
        Ok(CharEvaluator { kind, cond, realized })
    }

    /// Contribution of one increment: conditional part plus realized part.
    #[inline]
    pub fn step(&self, xi: f64) -> f64 {
        let realized = match self.realized {
            Realized::None => 0.0,
            Realized::Square => xi * xi,
            Realized::SquareAboveSigned(y) => {
                if xi > y {
                    xi * xi
                } else {
                    0.0
                }
            }
            Realized::SquareAboveAbs(y) => {
                if xi.abs() > y {
                    xi * xi
                } else {
                    0.0
                }
            }
            Realized::PosPowBeta(beta) => {
                if xi > 0.0 {
                    xi.powf(beta)
                } else {
                    0.0
                }
            }
        };
        self.cond + realized
    }

    /// Cumulative series over a whole path.
    pub fn series(&self, path: &Path) -> CharSeries {
        let mut acc = 0.0;
        let values = path
            .increments()
            .iter()
            .map(|&xi| {
                acc += self.step(xi);
                acc
            })
            .collect();
        CharSeries { kind: self.kind, values }
    }
}

fn validate_level(y: f64) -> Result<()> {
    if y.is_nan() || y < 0.0 {
        Err(Error::domain(format!("truncation level must be >= 0, got {y}")))
    } else {
        Ok(())
    }
}

/// Quadratic characteristic `⟨S⟩_k = Σ E(ξ_i²)`.
pub fn quad_char(path: &Path, model: &IncrementModel) -> Result<CharSeries> {
    Ok(CharEvaluator::new(model, CharKind::QuadChar)?.series(path))
}

/// Squared variation `[S]_k = Σ ξ_i²`; model-free.
pub fn sq_var(path: &Path) -> CharSeries {
    let mut acc = 0.0;
    let values = path
        .increments()
        .iter()
        .map(|&xi| {
            acc += xi * xi;
            acc
        })
        .collect();
    CharSeries { kind: CharKind::SqVar, values }
}

/// One-sided truncated characteristic `G_k^y`.
pub fn g_char(path: &Path, model: &IncrementModel, y: f64) -> Result<CharSeries> {
    Ok(CharEvaluator::new(model, CharKind::G { y })?.series(path))
}

/// Two-sided augmented characteristic `H_k^y`; pointwise ≥ `G_k^y`.
pub fn h_char(path: &Path, model: &IncrementModel, y: f64) -> Result<CharSeries> {
    Ok(CharEvaluator::new(model, CharKind::H { y })?.series(path))
}

/// Two-sided truncated characteristic `M_k^y`; equals `[S]_k` at `y = 0`.
pub fn m_char(path: &Path, model: &IncrementModel, y: f64) -> Result<CharSeries> {
    Ok(CharEvaluator::new(model, CharKind::M { y })?.series(path))
}

/// Power characteristic `G_k(β) = Σ (E((ξ_i⁻)^β) + (ξ_i⁺)^β)`, `β ∈ (1, 2)`.
pub fn g_beta_char(path: &Path, model: &IncrementModel, beta: f64) -> Result<CharSeries> {
    Ok(CharEvaluator::new(model, CharKind::GBeta { beta })?.series(path))
}

/// Self-normalization scale `V_n(β) = (Σ |ξ_i|^β)^(1/β)` for `β ∈ (1, 2]`;
/// positively homogeneous of degree 1, and `0` for the all-zero path
/// (callers must guard division).
pub fn v_norm(path: &Path, beta: f64) -> Result<f64> {
    if !(beta > 1.0 && beta <= 2.0) {
        return Err(Error::domain(format!("v_norm needs beta in (1, 2], got {beta}")));
    }
    let sum: f64 = if beta == 2.0 {
        path.increments().iter().map(|&xi| xi * xi).sum()
    } else {
        path.increments().iter().map(|&xi| xi.abs().powf(beta)).sum()
    };
    Ok(if beta == 2.0 { sum.sqrt() } else { sum.powf(1.0 / beta) })
}
