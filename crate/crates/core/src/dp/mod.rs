//! Backward dynamic programming for the optimal input policy.
//!
//! The finite-horizon feedback-capacity problem decomposes stage by
//! stage: with `C_{n+1} ≡ 0`, the value of being at memory word `w` at
//! time `t` is
//!
//! ```text
//! C_t(w) = max_{π(·|w)} Σ_x π(x|w) [ D_w(x) ]  with
//! D_w(x) = Σ_y q_t(y|x,w) [ log2( q_t(y|x,w) / ν_t^π(y|w) ) + C_{t+1}(shift(w,y)) ] − s·γ_t(x,w)
//! ```
//!
//! where `ν_t^π(y|w) = Σ_x π(x|w) q_t(y|x,w)` is the induced output
//! kernel, `shift(w,y)` drops the oldest symbol of `w` and appends `y`,
//! and `s ≥ 0` scales an optional transmission cost `γ`. Each stage
//! problem is concave in `π` and is solved by alternating maximization
//! ([`solve_ftfi`]): holding the induced reverse kernel fixed, the
//! maximizing policy has the closed multiplicative form
//! `π'(x) ∝ π(x)·2^{D_w(x)}`, and each update increases the stage
//! objective. The iteration stops once the sup-norm change of `π`
//! between consecutive iterates falls below the inner tolerance.
//!
//! When the stage optimum sits on a face of the simplex, the
//! multiplicative update approaches it only at the geometric rate
//! `2^{−margin}` of the dominated inputs, which can exhaust the
//! iteration budget for small margins. The solver therefore
//! periodically tries the low-dimensional faces directly — each vertex
//! in closed form, each input pair by bisecting the strictly decreasing
//! scalar derivative — and accepts such a candidate only when it passes
//! the stage optimality conditions to well below the inner tolerance,
//! so the shortcut can never certify a wrong answer.
//!
//! Optimality of a *given* policy is certified separately
//! ([`verify_kkt`]): a policy is optimal if and only if, stage by stage,
//! `D_w(x)` is constant on the support of `π(·|w)` and no larger off it.
//! The verifier reports the worst equality residual and inequality
//! violation per `(t, w)` without solving anything.
//!
//! Cost-constrained capacity ([`cost_constrained_capacity`]) wraps the
//! solver in a bisection on `s`: the achieved average cost is
//! nonincreasing in `s`, so the multiplier meeting a cost budget is
//! bracketed and bisected to tolerance.

mod constrained;
mod kkt;
mod solver;

pub use constrained::{cost_constrained_capacity, CostOptions};
pub use kkt::{verify_kkt, KktEntry, KktReport, SUPPORT_EPS};
pub use solver::solve_ftfi;

use crate::kernels::{InitialCondition, OutputKernel};
use crate::{Error, Result};

/// Inner-loop controls for the per-stage alternating maximization.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Stop a stage once the sup-norm change of its policy iterate
    /// falls below this.
    pub tol_inner: f64,
    /// Give up on a stage after this many inner iterations.
    pub max_inner: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol_inner: 1e-12,
            max_inner: 10_000,
        }
    }
}

/// The value function `C_t(w)` on stages `0, …, n+1` (stage `n+1` is the
/// terminal all-zero row).
#[derive(Debug, Clone)]
pub struct ValueFunction {
    values: Vec<Vec<f64>>,
}

impl ValueFunction {
    pub(crate) fn new(values: Vec<Vec<f64>>) -> Self {
        ValueFunction { values }
    }

    /// Number of rows, `n + 2` for horizon `n`.
    pub fn stages(&self) -> usize {
        self.values.len()
    }

    /// Number of memory words per row.
    pub fn words(&self) -> usize {
        self.values[0].len()
    }

    /// The row `C_t(·)`.
    pub fn stage(&self, t: usize) -> &[f64] {
        &self.values[t]
    }

    /// The entry `C_t(w)`.
    pub fn value(&self, t: usize, w: usize) -> f64 {
        self.values[t][w]
    }

    /// The average `Σ_w μ(w) C_0(w)` of the initial row.
    pub fn initial_average(&self, mu: &InitialCondition) -> f64 {
        self.values[0]
            .iter()
            .enumerate()
            .map(|(w, &c)| mu.prob(w) * c)
            .sum()
    }
}

/// The reverse (posterior) kernel `r_t(x | y, w) ∝ π_t(x|w) q_t(y|x,w)`
/// of a solution, stored as `[t][w][y][x]`.
///
/// Where the induced output probability `ν_t(y|w)` is zero the posterior
/// is undefined; those columns are stored uniform and never enter any
/// objective.
#[derive(Debug, Clone)]
pub struct ReverseKernel {
    tensor: Vec<Vec<Vec<Vec<f64>>>>,
}

impl ReverseKernel {
    pub(crate) fn new(tensor: Vec<Vec<Vec<Vec<f64>>>>) -> Self {
        ReverseKernel { tensor }
    }

    /// The entry `r_t(x | y, w)`.
    pub fn prob(&self, t: usize, w: usize, y: usize, x: usize) -> f64 {
        self.tensor[t][w][y][x]
    }

    /// The full `[t][w][y][x]` tensor.
    pub fn tensor(&self) -> &Vec<Vec<Vec<Vec<f64>>>> {
        &self.tensor
    }
}

/// Convergence bookkeeping for a [`DpSolution`].
#[derive(Debug, Clone, Copy)]
pub struct Diagnostics {
    /// Inner iterations summed over all `(t, w)` stage problems.
    pub total_inner_iterations: usize,
    /// Largest inner-iteration count of any single stage problem.
    pub max_inner_iterations: usize,
    /// Largest final residual of any stage problem: the last sup-norm
    /// policy change, or the optimality-condition residual when a stage
    /// was settled by a certified face solve.
    pub max_residual: f64,
}

/// Everything the dynamic program produces.
#[derive(Debug, Clone)]
pub struct DpSolution {
    /// The maximizing input policy, conditioned on `J` output symbols.
    pub policy: crate::kernels::InputPolicy,
    /// The output kernel induced by the policy.
    pub output: OutputKernel,
    /// The posterior kernel of the solution.
    pub reverse: ReverseKernel,
    /// The value function, including the terminal zero row.
    pub value: ValueFunction,
    /// The optimized objective `Σ_w μ(w) C_0(w)` in bits: total directed
    /// information when no cost is attached, otherwise the Lagrangian
    /// (directed information minus `s` times total cost).
    pub ftfi_value: f64,
    /// Directed information `I(X^n → Y^n)` of the returned policy
    /// (equals [`ftfi_value`](Self::ftfi_value) when no cost is attached).
    pub directed_info: f64,
    /// Per-stage average cost of the returned policy, when a cost was
    /// attached.
    pub achieved_cost: Option<f64>,
    /// The Lagrange multiplier the stages were solved with.
    pub s: f64,
    /// Inner-loop convergence summary.
    pub diagnostics: Diagnostics,
}

impl DpSolution {
    /// Per-stage (per channel use) value of the optimized objective.
    pub fn per_unit_time(&self) -> f64 {
        self.ftfi_value / self.value.stages().saturating_sub(1) as f64
    }
}

pub(crate) fn check_cost_shape(
    q: &crate::kernels::ChannelKernel,
    gamma: &crate::kernels::CostFunction,
) -> Result<()> {
    if gamma.horizon_n() != q.horizon_n() {
        return Err(Error::Shape(format!(
            "cost has horizon {} but channel has {}",
            gamma.horizon_n(),
            q.horizon_n()
        )));
    }
    if gamma.input_size() != q.input_alphabet().size()
        || gamma.output_size() != q.output_alphabet().size()
    {
        return Err(Error::Shape(
            "cost alphabet sizes do not match the channel".into(),
        ));
    }
    Ok(())
}
