//! Exact recursive solutions for three worked channel families.
//!
//! For certain binary-input channels with unit memory (and one with two
//! units), the per-stage maximization of the dynamic program admits a
//! closed-form maximizer: the optimal policy, induced output kernel, and
//! value function follow from the channel parameters and the next
//! stage's value *differences* alone, with no inner iteration. This
//! module implements three such families —
//!
//! * **BUMCO** — the binary unit-memory channel with parameters
//!   `(α, β, γ, δ)` giving `P(Y_t = 0 | x, y_{t-1})` for the four
//!   `(x, y_{t-1})` pairs, with and without an average transmission-cost
//!   constraint;
//! * **BEUMCO** — the binary erasure channel with unit memory, whose
//!   success probability depends on the previous output symbol
//!   (`α, γ, β` for previous `0`, `e`, `1`), and whose optimal policy is
//!   feedback-independent;
//! * **BSTMCO** — a symmetric two-unit-memory channel `(α, β, γ, δ)`
//!   whose value function depends only on whether the last two outputs
//!   agree.
//!
//! Each family gets a `*_solve` operation producing a
//! [`ClosedFormSolution`] over a finite horizon, and (for the unit-memory
//! families) a `*_steady_state` operation that solves the backward
//! recursion's fixed point exactly, cross-validates it against forward
//! iteration, and reports the invariant output distribution and ergodic
//! capacity as a [`SteadyState`]. Degenerate constructors build the
//! classical special cases (POST, BSSC, BSC, BEC) as instances of these
//! families.
//!
//! Everything here is checked against the general solver in tests; at
//! runtime, formulas applied outside their validity region fail with
//! [`crate::Error::Regime`] rather than returning something that merely
//! looks like a distribution.

mod beumco;
mod bstmco;
mod bumco;
mod degenerate;

pub use beumco::{beumco_solve, beumco_steady_state, BeumcoParams, BeumcoStage};
pub use bstmco::{bstmco_solve, BstmcoParams, BstmcoStage};
pub use bumco::{
    bumco_cost_solve, bumco_cost_steady_state, bumco_solve, bumco_steady_state, BumcoParams,
    BumcoStage,
};
pub use degenerate::{bec, bsc, bssc, post};

use crate::dp::ValueFunction;
use crate::kernels::{InputPolicy, OutputKernel};

/// A finite-horizon solution produced by a closed-form recursion.
#[derive(Debug, Clone)]
pub struct ClosedFormSolution {
    /// The optimal input policy `π_t(x | w)`.
    pub policy: InputPolicy,
    /// The induced output kernel `ν_t(y | w)`.
    pub output: OutputKernel,
    /// The value function, including the terminal zero row.
    pub value: ValueFunction,
    /// Per-stage value differences driving the recursion, one row per
    /// stage `0, …, n+1` (terminal row zero); columns named by
    /// [`delta_names`](Self::delta_names).
    pub delta: Vec<Vec<f64>>,
    /// Names of the difference components, e.g. `["delta"]` or
    /// `["delta1", "delta2"]`.
    pub delta_names: Vec<&'static str>,
    /// The objective `Σ_w μ(w) C_0(w)` in bits — total directed
    /// information (or the Lagrangian, for a cost-constrained solve).
    pub ftfi_value: f64,
}

/// The infinite-horizon limit of a closed-form recursion.
#[derive(Debug, Clone)]
pub struct SteadyState {
    /// Fixed point of the value-difference recursion.
    pub delta_inf: Vec<f64>,
    /// Limiting policy `π_∞(x | w)`, indexed `[w][x]`.
    pub pi_inf: Vec<Vec<f64>>,
    /// Limiting output kernel `ν_∞(y | w)`, indexed `[w][y]`.
    pub nu_inf: Vec<Vec<f64>>,
    /// Invariant distribution of the output memory word under `ν_∞`.
    pub stationary: Vec<f64>,
    /// Ergodic rate in bits per channel use: directed information for a
    /// plain solve, the information value `C(κ)` at the achieved cost
    /// for a cost-constrained one.
    pub capacity: f64,
    /// Average cost `κ` of the limiting policy under the matched input
    /// cost, for cost-constrained steady states.
    pub kappa: Option<f64>,
}

/// Finds how deep behind the terminal stage the backward recursion has
/// converged: the smallest `k ≥ 1` with
///
/// ```text
/// sup | (π_{n-k}, ν_{n-k}) − (π_{n-k+1}, ν_{n-k+1}) | < tol
/// ```
///
/// entrywise, or `None` if no such `k ≤ n` exists. Backward recursions
/// contract toward their fixed point as `t` moves away from the
/// terminal stage, so from stage `n - k` down to `0` the stage solutions
/// are stationary to within `tol`.
pub fn converged_at_stage(policy: &InputPolicy, output: &OutputKernel, tol: f64) -> Option<usize> {
    let n = policy.horizon_n();
    for k in 1..=n {
        let t = n - k;
        let mut sup: f64 = 0.0;
        for (a, b) in policy.stage(t).iter().zip(policy.stage(t + 1)) {
            for (&x, &y) in a.iter().zip(b) {
                sup = sup.max((x - y).abs());
            }
        }
        for (a, b) in output.stage(t).iter().zip(output.stage(t + 1)) {
            for (&x, &y) in a.iter().zip(b) {
                sup = sup.max((x - y).abs());
            }
        }
        if sup < tol {
            return Some(k);
        }
    }
    None
}
