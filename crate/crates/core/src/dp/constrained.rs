//! Bisection on the cost multiplier for capacity under a cost budget.

use super::{solve_ftfi, DpSolution, SolveOptions};
use crate::kernels::{ChannelKernel, CostFunction, InitialCondition};
use crate::{Error, Result};

/// Controls for [`cost_constrained_capacity`].
#[derive(Debug, Clone, Copy)]
pub struct CostOptions {
    /// Accept a multiplier once the achieved per-stage cost is within
    /// this of the budget.
    pub cost_tol: f64,
    /// Also accept once the bracket on the multiplier is this narrow
    /// (the cost may jump discontinuously across a critical multiplier).
    pub s_interval_tol: f64,
    /// Inner-loop controls for each solve.
    pub solve: SolveOptions,
}

impl Default for CostOptions {
    fn default() -> Self {
        CostOptions {
            cost_tol: 1e-4,
            s_interval_tol: 1e-10,
            solve: SolveOptions::default(),
        }
    }
}

/// Finds the Lagrange multiplier `s*` whose solution spends the cost
/// budget `kappa_target`, and returns it with that solution.
///
/// The achieved per-stage cost of the Lagrangian solution is
/// nonincreasing in `s`. The routine first solves unconstrained
/// (`s = 0`): if even that solution's cost `κ_max` is within budget the
/// constraint is inactive and `(0, solution)` is returned. Otherwise the
/// caller-supplied bracket `(s_lo, s_hi)` must satisfy
/// `cost(s_lo) ≥ kappa_target ≥ cost(s_hi)`, and bisection runs until
/// the achieved cost is within `cost_tol` of the budget or the bracket
/// is narrower than `s_interval_tol`.
///
/// The capacity-cost value `C(κ)` at the budget is the returned
/// solution's directed information per stage.
///
/// # Errors
///
/// [`Error::InvalidCost`] for a negative or non-finite budget,
/// [`Error::OutOfRange`] for an empty or negative bracket,
/// [`Error::Bracket`] when the bracket does not straddle the budget
/// (carrying the measured endpoint costs), plus anything
/// [`solve_ftfi`] reports.
pub fn cost_constrained_capacity(
    q: &ChannelKernel,
    gamma: &CostFunction,
    mu: &InitialCondition,
    kappa_target: f64,
    s_bracket: (f64, f64),
    opts: &CostOptions,
) -> Result<(f64, DpSolution)> {
    if !kappa_target.is_finite() || kappa_target < 0.0 {
        return Err(Error::InvalidCost {
            path: "kappa_target".into(),
            value: kappa_target,
        });
    }
    let (mut s_lo, mut s_hi) = s_bracket;
    if !s_lo.is_finite() || s_lo < 0.0 {
        return Err(Error::OutOfRange {
            path: "s_bracket.lo".into(),
            value: s_lo,
        });
    }
    if !s_hi.is_finite() || s_hi <= s_lo {
        return Err(Error::OutOfRange {
            path: "s_bracket.hi".into(),
            value: s_hi,
        });
    }

    let unconstrained = solve_ftfi(q, mu, Some((gamma, 0.0)), &opts.solve)?;
    let kappa_max = unconstrained
        .achieved_cost
        .expect("cost was attached to the solve");
    if kappa_target >= kappa_max {
        return Ok((0.0, unconstrained));
    }

    let cost_at = |s: f64| -> Result<(f64, DpSolution)> {
        let sol = solve_ftfi(q, mu, Some((gamma, s)), &opts.solve)?;
        let cost = sol.achieved_cost.expect("cost was attached to the solve");
        Ok((cost, sol))
    };
    let cost_lo = if s_lo == 0.0 {
        kappa_max
    } else {
        cost_at(s_lo)?.0
    };
    let cost_hi = cost_at(s_hi)?.0;
    if !(cost_lo >= kappa_target && kappa_target >= cost_hi) {
        return Err(Error::Bracket {
            s_lo,
            s_hi,
            cost_lo,
            cost_hi,
            target: kappa_target,
        });
    }

    loop {
        let mid = 0.5 * (s_lo + s_hi);
        let (cost_mid, sol) = cost_at(mid)?;
        if (cost_mid - kappa_target).abs() < opts.cost_tol || s_hi - s_lo < opts.s_interval_tol
        {
            return Ok((mid, sol));
        }
        if cost_mid > kappa_target {
            s_lo = mid;
        } else {
            s_hi = mid;
        }
    }
}
