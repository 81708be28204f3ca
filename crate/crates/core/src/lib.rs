//! Tail-probability bounds for martingales and supermartingales with
//! truncated quadratic characteristics, plus the simulation machinery to
//! verify them empirically.
//!
//! The crate is organized around four layers:
//!
//! * [`bounds`] — pure evaluation of the bound functions `B0`, `B1`, `B2`,
//!   the power-type bound, their Chernoff exponent families, closed-form
//!   minimizers, and a generic numeric infimum for cross-checking.
//! * [`characteristics`] — k-indexed characteristics of a realized path
//!   (`⟨S⟩`, `[S]`, and the truncated variants `G`, `H`, `M`, `G(β)`),
//!   computed against a process model that supplies exact conditional
//!   moments.
//! * [`processes`] — a catalog of i.i.d. increment models with exact moment
//!   oracles, reproducible sampling, and exact finite-support expectations
//!   for the conditional-expectation lemmas.
//! * [`montecarlo`] — joint tail-event detection, Monte Carlo estimation
//!   with one-sided Hoeffding confidence, domination checks against the
//!   theoretical bounds, and the two-point tightness and self-normalized
//!   experiments.
//!
//! All randomness flows through [`rng::SubStream`], a counter-based scheme
//! in which trial `t` of a run seeded with `s` uses an independent
//! substream derived from `(s, t)`. Estimates are bit-identical for a fixed
//! seed regardless of worker count or trial execution order.

pub mod bounds;
pub mod characteristics;
mod error;
pub mod montecarlo;
pub mod processes;
pub mod rng;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
