//! Classical channels as degenerate members of the closed-form
//! families.
//!
//! Each constructor fixes a pattern in the BUMCO/BEUMCO parameters:
//!
//! * [`post`] — the previous-output symmetric channel `POST(α, β)`,
//!   where flipping the previous output together with the input and
//!   output leaves the kernel invariant.
//! * [`bssc`] — the binary state-symmetric channel `BSSC(α, β)`.
//! * [`bsc`] — the memoryless binary symmetric channel with crossover
//!   `α`; the previous output has no effect on the kernel.
//! * [`bec`] — the memoryless binary erasure channel with erasure
//!   probability `α`.
//!
//! The returned stages plug into the corresponding family solvers, so
//! textbook values (for instance the BSC capacity `1 − H(α)` with a
//! uniform input) drop out of the feedback machinery as consistency
//! checks.

use super::{BeumcoStage, BumcoStage};
use crate::Result;

/// The `POST(α, β)` channel as a BUMCO stage:
/// `q(0|0, 0) = α`, `q(0|0, 1) = 1 − β`, `q(0|1, 0) = β`,
/// `q(0|1, 1) = 1 − α`.
///
/// # Errors
///
/// As [`BumcoStage::new`]; in particular `α = β` makes the two inputs
/// indistinguishable and is rejected.
pub fn post(alpha: f64, beta: f64) -> Result<BumcoStage> {
    BumcoStage::new(alpha, 1.0 - beta, beta, 1.0 - alpha)
}

/// The `BSSC(α, β)` channel as a BUMCO stage:
/// `q(0|0, 0) = α`, `q(0|0, 1) = β`, `q(0|1, 0) = 1 − β`,
/// `q(0|1, 1) = 1 − α`.
///
/// # Errors
///
/// As [`BumcoStage::new`]; in particular `α + β = 1` is rejected.
pub fn bssc(alpha: f64, beta: f64) -> Result<BumcoStage> {
    BumcoStage::new(alpha, beta, 1.0 - beta, 1.0 - alpha)
}

/// The memoryless binary symmetric channel with crossover probability
/// `α` as a BUMCO stage: both words see the kernel
/// `q(0|0) = 1 − α`, `q(0|1) = α`.
///
/// # Errors
///
/// As [`BumcoStage::new`]; `α = 1/2` (a channel carrying no
/// information) is rejected.
pub fn bsc(alpha: f64) -> Result<BumcoStage> {
    BumcoStage::new(1.0 - alpha, 1.0 - alpha, alpha, alpha)
}

/// The memoryless binary erasure channel with erasure probability `α`
/// as a BEUMCO stage: every word has delivery probability `1 − α`.
///
/// # Errors
///
/// As [`BeumcoStage::new`].
pub fn bec(alpha: f64) -> Result<BeumcoStage> {
    BeumcoStage::new(1.0 - alpha, 1.0 - alpha, 1.0 - alpha)
}
