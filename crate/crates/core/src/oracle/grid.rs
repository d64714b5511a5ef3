//! Brute-force policy search on a simplex grid.
//!
//! Starting from the uniform policy, the optimizer sweeps cyclically over
//! the policy columns (one per stage and memory word). For each column it
//! evaluates every grid point of the probability simplex — keeping the
//! other columns fixed — and moves to the best. The per-column objective
//! is concave, so each sweep is exact coordinate maximization on the
//! grid, every accepted move improves the objective, and sweeps repeat
//! until a full pass gains less than `1e-12`. Optional refinement levels
//! then shrink the grid step by a factor of 100 and re-run the sweeps in
//! a window of +/- 2 old steps around the incumbent.
//!
//! The objective is the certified evaluator from [`crate::kernels`]:
//! total directed information, minus `s` times total cost when a cost
//! function and multiplier are supplied — exactly the quantity the
//! dynamic program maximizes, so the two are directly comparable.

use crate::kernels::{
    directed_information, expected_cost, ChannelKernel, CostFunction, InitialCondition,
    InputPolicy, WordSpace,
};
use crate::{Error, Result};

/// Maximum number of grid points evaluated in one sweep.
const POINT_BUDGET: f64 = 1e7;
/// A sweep that gains less than this ends the sweep loop.
const SWEEP_TOL: f64 = 1e-12;
/// Hard cap on sweeps per refinement level.
const MAX_SWEEPS: usize = 200;

/// Grid parameters for [`brute_force_ftfi`].
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    /// Simplex grid step, in `(0, 0.5]`. Probabilities are multiples of
    /// this step (after rounding `1/resolution` to an integer).
    pub resolution: f64,
    /// Number of 100x refinement passes after the initial grid.
    pub refine_levels: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            resolution: 1e-3,
            refine_levels: 1,
        }
    }
}

/// Maximizes total directed information (minus `s` times total cost, when
/// `cost` is given) over input policies by grid coordinate ascent, and
/// returns the best policy found with its objective value.
///
/// This is a certification oracle: exhaustive per column, monotone by
/// construction, and entirely independent of the dynamic-programming
/// solver it is used to check.
///
/// # Errors
///
/// [`Error::OutOfRange`] for a resolution outside `(0, 0.5]`;
/// [`Error::Budget`] when one sweep would evaluate more than `1e7` grid
/// points; shape errors when the cost function or initial condition does
/// not match the channel.
pub fn brute_force_ftfi(
    q: &ChannelKernel,
    mu: &InitialCondition,
    cost: Option<(&CostFunction, f64)>,
    grid: &GridSpec,
) -> Result<(InputPolicy, f64)> {
    if !(grid.resolution > 0.0 && grid.resolution <= 0.5) {
        return Err(Error::OutOfRange {
            path: "grid.resolution".into(),
            value: grid.resolution,
        });
    }
    let n = q.horizon_n();
    let stages = n + 1;
    let x_size = q.input_alphabet().size();
    let y_size = q.output_alphabet().size();
    let m = q.memory_order();
    let j = cost.map_or(m, |(g, _)| m.max(g.memory_order()));
    let words = WordSpace::new(j, y_size).count();
    if mu.words() != words {
        return Err(Error::Shape(format!(
            "initial condition covers {} words, policy memory needs {words}",
            mu.words()
        )));
    }

    let evaluate = |tensor: &Vec<Vec<Vec<f64>>>| -> Result<f64> {
        let policy = InputPolicy::new(x_size, y_size, j, tensor.clone())?;
        let mut value = directed_information(q, &policy, mu)?;
        if let Some((g, s)) = cost {
            value -= s * stages as f64 * expected_cost(q, &policy, g, mu)?;
        }
        Ok(value)
    };

    let mut pi = vec![vec![vec![1.0 / x_size as f64; x_size]; words]; stages];
    let mut best = evaluate(&pi)?;
    let mut resolution = grid.resolution;
    let mut window: Option<f64> = None;

    for _level in 0..=grid.refine_levels {
        let k_total = (1.0 / resolution).round() as usize;

        let mut per_sweep = 0.0;
        for stage in &pi {
            for column in stage {
                let bounds = column_bounds(column, k_total, window);
                per_sweep += count_grid_points(k_total, &bounds, POINT_BUDGET);
            }
        }
        if per_sweep > POINT_BUDGET {
            return Err(Error::Budget {
                needed: per_sweep,
                budget: POINT_BUDGET,
                unit: "grid points",
            });
        }

        for _sweep in 0..MAX_SWEEPS {
            let before = best;
            for t in 0..stages {
                for w in 0..words {
                    let bounds = column_bounds(&pi[t][w], k_total, window);
                    let mut best_column = pi[t][w].clone();
                    let mut failure: Option<Error> = None;
                    let mut scratch = Vec::with_capacity(x_size);
                    visit_grid_columns(k_total, &bounds, &mut scratch, &mut |ks| {
                        let column: Vec<f64> =
                            ks.iter().map(|&k| k as f64 / k_total as f64).collect();
                        pi[t][w] = column;
                        match evaluate(&pi) {
                            Ok(value) if value > best => {
                                best = value;
                                best_column = pi[t][w].clone();
                            }
                            Ok(_) => {}
                            Err(e) => failure = Some(e),
                        }
                    });
                    pi[t][w] = best_column;
                    if let Some(e) = failure {
                        return Err(e);
                    }
                }
            }
            if best - before < SWEEP_TOL {
                break;
            }
        }

        window = Some(2.0 * resolution);
        resolution /= 100.0;
    }

    Ok((InputPolicy::new(x_size, y_size, j, pi)?, best))
}

/// Integer bounds per coordinate: the whole simplex when `window` is
/// `None`, otherwise +/- `window` (in probability) around the incumbent.
fn column_bounds(column: &[f64], k_total: usize, window: Option<f64>) -> Vec<(usize, usize)> {
    match window {
        None => vec![(0, k_total); column.len()],
        Some(win) => column
            .iter()
            .map(|&p| {
                let lo = ((p - win).max(0.0) * k_total as f64 - 1e-9).ceil().max(0.0);
                let hi = ((p + win).min(1.0) * k_total as f64 + 1e-9).floor();
                (lo as usize, (hi as usize).min(k_total))
            })
            .collect(),
    }
}

/// Counts compositions of `k_total` within `bounds`, saturating once the
/// count exceeds `cap` (enough to fail the budget check).
fn count_grid_points(k_total: usize, bounds: &[(usize, usize)], cap: f64) -> f64 {
    fn rec(idx: usize, remaining: usize, bounds: &[(usize, usize)], cap: f64, acc: &mut f64) {
        if *acc > cap {
            return;
        }
        if idx == bounds.len() - 1 {
            let (lo, hi) = bounds[idx];
            if remaining >= lo && remaining <= hi {
                *acc += 1.0;
            }
            return;
        }
        let (lo, hi) = bounds[idx];
        for k in lo..=hi.min(remaining) {
            rec(idx + 1, remaining - k, bounds, cap, acc);
        }
    }
    let mut acc = 0.0;
    rec(0, k_total, bounds, cap, &mut acc);
    acc
}

/// Visits every composition `(k_0, ..., k_{X-1})` of `k_total` with
/// `k_i` inside `bounds[i]`, invoking `f` with the composition.
fn visit_grid_columns(
    k_total: usize,
    bounds: &[(usize, usize)],
    scratch: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    scratch.clear();
    fn rec(
        idx: usize,
        remaining: usize,
        bounds: &[(usize, usize)],
        scratch: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]),
    ) {
        if idx == bounds.len() - 1 {
            let (lo, hi) = bounds[idx];
            if remaining >= lo && remaining <= hi {
                scratch.push(remaining);
                f(scratch);
                scratch.pop();
            }
            return;
        }
        let (lo, hi) = bounds[idx];
        for k in lo..=hi.min(remaining) {
            scratch.push(k);
            rec(idx + 1, remaining - k, bounds, scratch, f);
            scratch.pop();
        }
    }
    rec(0, k_total, bounds, scratch, f);
}
