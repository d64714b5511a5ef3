//! Error taxonomy for the whole crate.
//!
//! Two broad families matter to callers:
//!
//! * **Input errors** — malformed probability objects, shape mismatches,
//!   out-of-range arguments, JSON problems, exceeded enumeration budgets,
//!   brackets that do not straddle their target. The caller supplied
//!   something unusable.
//! * **Regime / convergence errors** — the inputs were well-formed but the
//!   requested computation cannot certify its own answer: a closed form
//!   evaluated outside its validity regime, a fixed-point iteration that did
//!   not converge, steady-state cross-validation that disagreed.
//!
//! The CLI maps the first family to exit code 1 and the second to exit
//! code 2; [`Error::is_regime_or_convergence`] encodes the split.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Alphabet constructed with no symbols or duplicate labels.
    #[error("alphabet must have at least one symbol and no duplicate labels")]
    InvalidAlphabet,

    /// A probability column does not sum to 1 within tolerance 1e-12.
    #[error("column {path} sums to {sum:.17} (must be 1 within 1e-12)")]
    NotStochastic { path: String, sum: f64 },

    /// A probability or parameter entry lies outside [0, 1].
    #[error("entry {path} = {value} outside [0, 1]")]
    OutOfRange { path: String, value: f64 },

    /// A cost entry is negative or non-finite.
    #[error("cost entry {path} = {value} must be finite and >= 0")]
    InvalidCost { path: String, value: f64 },

    /// Objects with incompatible horizons, alphabets, or memory orders.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Argument outside the function's domain (e.g. entropy of p > 1).
    #[error("argument {value} outside domain {domain}")]
    Domain { value: f64, domain: &'static str },

    /// A caller-supplied output kernel assigns zero mass to an outcome the
    /// joint law reaches with positive probability, so the log-ratio in the
    /// directed-information sum is undefined. Cannot occur for an induced
    /// output kernel.
    #[error(
        "absolute continuity violated at stage {t}, word {w}, output {y}: \
         output kernel is 0 where the joint law has mass {mass}"
    )]
    AbsoluteContinuity { t: usize, w: usize, y: usize, mass: f64 },

    /// The per-stage alternating maximization did not reach its tolerance.
    #[error(
        "stage solver did not converge at stage {t}, word {w}: \
         residual {residual} after {iterations} iterations"
    )]
    StageNotConverged { t: usize, w: usize, iterations: usize, residual: f64 },

    /// A closed-form expression was evaluated outside its validity regime
    /// (a distribution entry left [0, 1]); fall back to the DP solver.
    #[error(
        "closed form out of regime at stage {t}: {quantity} = {value} \
         outside [0, 1]; fall back to the dynamic-programming solver"
    )]
    Regime { t: usize, quantity: &'static str, value: f64 },

    /// A root-finding bracket contains no sign change.
    #[error("no root in bracket [{lo}, {hi}] for {what}")]
    NoRoot { what: &'static str, lo: f64, hi: f64 },

    /// The Lagrange-multiplier bracket does not straddle the cost target.
    #[error(
        "bracket s in [{s_lo}, {s_hi}] achieves costs [{cost_hi}, {cost_lo}] \
         which do not straddle the target {target} \
         (cost is nonincreasing in s; widen the bracket)"
    )]
    Bracket { s_lo: f64, s_hi: f64, cost_lo: f64, cost_hi: f64, target: f64 },

    /// Two routes to the same quantity disagreed beyond tolerance.
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    /// An enumeration or grid exceeds its evaluation budget.
    #[error("state-space budget exceeded: {needed} > {budget} {unit}")]
    Budget { needed: f64, budget: f64, unit: &'static str },

    /// Power iteration cycled instead of converging (periodic chain); the
    /// last two iterates describe the oscillation.
    #[error(
        "power iteration did not converge after {iterations} iterations; \
         oscillating between {a:?} and {b:?}"
    )]
    Oscillation { iterations: usize, a: Vec<f64>, b: Vec<f64> },

    /// JSON (de)serialization failure.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    /// Filesystem failure.
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// `true` for regime/convergence failures (CLI exit code 2), `false`
    /// for input errors (CLI exit code 1).
    pub fn is_regime_or_convergence(&self) -> bool {
        matches!(
            self,
            Error::StageNotConverged { .. }
                | Error::Regime { .. }
                | Error::NoRoot { .. }
                | Error::Inconsistent(_)
                | Error::Oscillation { .. }
        )
    }
}
