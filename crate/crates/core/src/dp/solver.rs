//! The backward pass and its per-stage alternating maximization.

use super::{
    check_cost_shape, Diagnostics, DpSolution, ReverseKernel, SolveOptions, ValueFunction,
};
use crate::kernels::{
    directed_information, expected_cost, ChannelKernel, CostFunction, InitialCondition,
    InputPolicy, OutputKernel, WordSpace,
};
use crate::{Error, Result};

/// Solves the finite-horizon problem by backward dynamic programming and
/// returns the optimal policy together with its certificates.
///
/// The policy conditions on the last `J` outputs, where `J` is the
/// channel memory order `M` without a cost and `max{M, N}` with one; the
/// initial condition must weight the `|Y|^J` initial words. Passing
/// `cost = Some((γ, s))` maximizes the Lagrangian — directed information
/// minus `s` times total cost — leaving the multiplier `s` to the caller
/// (or to [`super::cost_constrained_capacity`], which chooses it to meet
/// a cost budget).
///
/// # Errors
///
/// [`Error::Shape`] for mismatched dimensions, [`Error::OutOfRange`] for
/// a negative or non-finite multiplier, [`Error::StageNotConverged`] if
/// some stage iterate still moves by more than `opts.tol_inner` per
/// iteration after `opts.max_inner` iterations, and
/// [`Error::Inconsistent`] if an iteration ever decreases its stage
/// objective (the update is provably ascending, so that indicates
/// numerical trouble, not a tight tolerance).
pub fn solve_ftfi(
    q: &ChannelKernel,
    mu: &InitialCondition,
    cost: Option<(&CostFunction, f64)>,
    opts: &SolveOptions,
) -> Result<DpSolution> {
    let n = q.horizon_n();
    let stages = n + 1;
    let x_size = q.input_alphabet().size();
    let y_size = q.output_alphabet().size();
    let m = q.memory_order();
    let j = match cost {
        Some((gamma, s)) => {
            check_cost_shape(q, gamma)?;
            if !s.is_finite() || s < 0.0 {
                return Err(Error::OutOfRange {
                    path: "s".into(),
                    value: s,
                });
            }
            m.max(gamma.memory_order())
        }
        None => m,
    };
    let s = cost.map_or(0.0, |(_, s)| s);
    let words = WordSpace::new(j, y_size);
    let word_count = words.count();
    if mu.words() != word_count {
        return Err(Error::Shape(format!(
            "initial condition covers {} words, policy memory needs {word_count}",
            mu.words()
        )));
    }

    let mut value = vec![vec![0.0f64; word_count]; stages + 1];
    let mut pi_tensor = vec![vec![Vec::new(); word_count]; stages];
    let mut nu_tensor = vec![vec![Vec::new(); word_count]; stages];
    let mut reverse_tensor = vec![vec![Vec::new(); word_count]; stages];
    let mut diagnostics = Diagnostics {
        total_inner_iterations: 0,
        max_inner_iterations: 0,
        max_residual: 0.0,
    };

    for t in (0..stages).rev() {
        let (head, tail) = value.split_at_mut(t + 1);
        let row = &mut head[t];
        let next = &tail[0];
        for w in 0..word_count {
            let word_m = words.suffix(w, m);
            let q_local: Vec<Vec<f64>> = (0..x_size)
                .map(|x| (0..y_size).map(|y| q.prob(t, word_m, x, y)).collect())
                .collect();
            let continuation: Vec<f64> =
                (0..y_size).map(|y| next[words.shift(w, y)]).collect();
            let cost_local: Vec<f64> = match cost {
                Some((gamma, _)) => {
                    let word_n = words.suffix(w, gamma.memory_order());
                    (0..x_size).map(|x| gamma.value(t, word_n, x)).collect()
                }
                None => vec![0.0; x_size],
            };
            let stage = solve_stage(&q_local, &continuation, &cost_local, s, t, w, opts)?;
            row[w] = stage.value;
            pi_tensor[t][w] = stage.pi;
            nu_tensor[t][w] = stage.nu;
            reverse_tensor[t][w] = stage.reverse;
            diagnostics.total_inner_iterations += stage.iterations;
            diagnostics.max_inner_iterations =
                diagnostics.max_inner_iterations.max(stage.iterations);
            diagnostics.max_residual = diagnostics.max_residual.max(stage.residual);
        }
    }

    let policy = InputPolicy::new(x_size, y_size, j, pi_tensor)?;
    let output = OutputKernel::new(y_size, j, nu_tensor)?;
    let reverse = ReverseKernel::new(reverse_tensor);
    let value = ValueFunction::new(value);
    let ftfi_value = value.initial_average(mu);
    let directed_info = directed_information(q, &policy, mu)?;
    let achieved_cost = match cost {
        Some((gamma, _)) => Some(expected_cost(q, &policy, gamma, mu)?),
        None => None,
    };
    Ok(DpSolution {
        policy,
        output,
        reverse,
        value,
        ftfi_value,
        directed_info,
        achieved_cost,
        s,
        diagnostics,
    })
}

struct StageSolution {
    pi: Vec<f64>,
    nu: Vec<f64>,
    reverse: Vec<Vec<f64>>,
    value: f64,
    iterations: usize,
    residual: f64,
}

/// Induced output column, per-input scores, and attained objective of a
/// candidate stage policy.
struct StageEval {
    nu: Vec<f64>,
    score: Vec<f64>,
    objective: f64,
}

/// How often the certified face shortcut is attempted while the main
/// iteration has not converged.
const FACE_PERIOD: usize = 512;

/// Acceptance threshold scale for certified face candidates; far below
/// any downstream verification tolerance, so an accepted candidate can
/// only ever be the stage optimum.
const FACE_CERT_TOL: f64 = 1e-13;

fn evaluate_stage(q: &[Vec<f64>], continuation: &[f64], cost: &[f64], s: f64, pi: &[f64]) -> StageEval {
    let x_size = q.len();
    let y_size = continuation.len();
    let mut nu = vec![0.0f64; y_size];
    for (x, q_x) in q.iter().enumerate() {
        if pi[x] > 0.0 {
            for (y, &qv) in q_x.iter().enumerate() {
                nu[y] += pi[x] * qv;
            }
        }
    }
    let mut score = vec![0.0f64; x_size];
    for (x, q_x) in q.iter().enumerate() {
        let mut acc = 0.0;
        for (y, &qv) in q_x.iter().enumerate() {
            if qv > 0.0 {
                if nu[y] > 0.0 {
                    acc += qv * ((qv / nu[y]).log2() + continuation[y]);
                } else {
                    acc = f64::INFINITY;
                    break;
                }
            }
        }
        score[x] = acc - s * cost[x];
    }
    let objective: f64 = pi
        .iter()
        .zip(&score)
        .filter(|&(&p, _)| p > 0.0)
        .map(|(&p, &d)| p * d)
        .sum();
    StageEval { nu, score, objective }
}

/// Optimality residual of a candidate: the score spread over the exact
/// support plus any excess of an unsupported score over the supported
/// level. `None` unless both are below the certification threshold.
fn certify(eval: &StageEval, pi: &[f64]) -> Option<f64> {
    let mut supported_max = f64::NEG_INFINITY;
    let mut supported_min = f64::INFINITY;
    let mut off_max = f64::NEG_INFINITY;
    for (&p, &d) in pi.iter().zip(&eval.score) {
        if p > 0.0 {
            supported_max = supported_max.max(d);
            supported_min = supported_min.min(d);
        } else {
            off_max = off_max.max(d);
        }
    }
    let equality = supported_max - supported_min;
    let violation = (off_max - supported_max).max(0.0);
    let tol = FACE_CERT_TOL * (1.0 + eval.objective.abs());
    (equality < tol && violation < tol).then(|| equality.max(violation))
}

/// Exact solve of the two-input restriction `π = p·δ_a + (1−p)·δ_b`.
///
/// The stage objective restricted to this edge is strictly concave with
/// derivative `score(a) − score(b)` (the normalization terms cancel), so
/// an interior optimum is the root of a strictly decreasing function
/// and bisection finds it to machine precision. Returns `None` when the
/// edge optimum sits at an endpoint (the vertex candidates cover that).
fn solve_pair(
    q: &[Vec<f64>],
    continuation: &[f64],
    cost: &[f64],
    s: f64,
    a: usize,
    b: usize,
) -> Option<Vec<f64>> {
    let x_size = q.len();
    let mut pi = vec![0.0; x_size];
    let mut derivative = |p: f64| {
        pi[a] = p;
        pi[b] = 1.0 - p;
        let eval = evaluate_stage(q, continuation, cost, s, &pi);
        eval.score[a] - eval.score[b]
    };
    if derivative(1.0) >= 0.0 || derivative(0.0) <= 0.0 {
        return None;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if derivative(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    pi[a] = 0.5 * (lo + hi);
    pi[b] = 1.0 - pi[a];
    Some(pi)
}

/// Tries every vertex and every input pair as a candidate stage
/// optimum, keeping the best candidate that passes certification.
fn certified_face_candidate(
    q: &[Vec<f64>],
    continuation: &[f64],
    cost: &[f64],
    s: f64,
) -> Option<(Vec<f64>, StageEval, f64)> {
    let x_size = q.len();
    let mut best: Option<(Vec<f64>, StageEval, f64)> = None;
    let mut consider = |pi: Vec<f64>| {
        let eval = evaluate_stage(q, continuation, cost, s, &pi);
        if let Some(residual) = certify(&eval, &pi) {
            if best.as_ref().is_none_or(|(_, b, _)| eval.objective > b.objective) {
                best = Some((pi, eval, residual));
            }
        }
    };
    for x in 0..x_size {
        let mut pi = vec![0.0; x_size];
        pi[x] = 1.0;
        consider(pi);
    }
    for a in 0..x_size {
        for b in a + 1..x_size {
            if let Some(pi) = solve_pair(q, continuation, cost, s, a, b) {
                consider(pi);
            }
        }
    }
    best
}

/// Alternating maximization for one `(t, w)` stage problem.
///
/// `q[x][y]` is the local channel column, `continuation[y]` the
/// next-stage value reached through output `y`, `cost[x]` the local cost
/// column. The iterate is `π' ∝ π · 2^D` with `D(x)` the stage score,
/// stopped once consecutive iterates agree to `tol_inner` in sup norm.
/// While the iterate is still moving, the certified face shortcut runs
/// periodically to settle boundary optima the multiplicative update
/// approaches only geometrically.
fn solve_stage(
    q: &[Vec<f64>],
    continuation: &[f64],
    cost: &[f64],
    s: f64,
    t: usize,
    w: usize,
    opts: &SolveOptions,
) -> Result<StageSolution> {
    let x_size = q.len();
    let y_size = continuation.len();
    let reverse_of = |pi: &[f64], nu: &[f64]| -> Vec<Vec<f64>> {
        (0..y_size)
            .map(|y| {
                if nu[y] > 0.0 {
                    (0..x_size).map(|x| pi[x] * q[x][y] / nu[y]).collect()
                } else {
                    vec![1.0 / x_size as f64; x_size]
                }
            })
            .collect()
    };
    let mut pi = vec![1.0 / x_size as f64; x_size];
    let mut previous = f64::NEG_INFINITY;
    let mut last_change = f64::INFINITY;

    for iteration in 0..=opts.max_inner {
        let eval = evaluate_stage(q, continuation, cost, s, &pi);
        if eval.objective + 1e-9 < previous {
            return Err(Error::Inconsistent(format!(
                "stage ({t}, {w}): ascent broke at iteration {iteration} \
                 ({previous} fell to {})",
                eval.objective
            )));
        }
        previous = previous.max(eval.objective);
        if last_change < opts.tol_inner {
            let reverse = reverse_of(&pi, &eval.nu);
            return Ok(StageSolution {
                pi,
                nu: eval.nu,
                reverse,
                value: eval.objective,
                iterations: iteration,
                residual: last_change,
            });
        }
        let try_faces =
            (iteration > 0 && iteration % FACE_PERIOD == 0) || iteration == opts.max_inner;
        if try_faces {
            if let Some((face_pi, face_eval, residual)) =
                certified_face_candidate(q, continuation, cost, s)
            {
                let reverse = reverse_of(&face_pi, &face_eval.nu);
                return Ok(StageSolution {
                    pi: face_pi,
                    nu: face_eval.nu,
                    reverse,
                    value: face_eval.objective,
                    iterations: iteration,
                    residual,
                });
            }
        }
        // Multiplicative ascent step, stabilized by subtracting the
        // largest exponent before exponentiating.
        let exponent: Vec<f64> = pi
            .iter()
            .zip(&eval.score)
            .map(|(&p, &d)| if p > 0.0 { p.log2() + d } else { f64::NEG_INFINITY })
            .collect();
        let peak = exponent.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = exponent
            .iter()
            .map(|&e| {
                if e.is_finite() {
                    (e - peak).exp2()
                } else {
                    0.0
                }
            })
            .collect();
        let total: f64 = weights.iter().sum();
        last_change = 0.0;
        for (p, weight) in pi.iter_mut().zip(&weights) {
            let updated = weight / total;
            last_change = last_change.max((updated - *p).abs());
            *p = updated;
        }
    }
    Err(Error::StageNotConverged {
        t,
        w,
        iterations: opts.max_inner,
        residual: last_change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{binary_entropy, FiniteAlphabet};

    fn bumco(n: usize) -> ChannelKernel {
        let stage = vec![
            vec![vec![0.9, 0.1], vec![0.2, 0.8]],
            vec![vec![0.1, 0.9], vec![0.4, 0.6]],
        ];
        ChannelKernel::time_invariant(
            FiniteAlphabet::binary(),
            FiniteAlphabet::binary(),
            1,
            stage,
            n,
        )
        .unwrap()
    }

    #[test]
    fn terminal_stage_matches_the_known_optimum() {
        let q = bumco(0);
        let mu = InitialCondition::point_mass(0, 2).unwrap();
        let sol = solve_ftfi(&q, &mu, None, &SolveOptions::default()).unwrap();
        assert!((sol.value.value(0, 0) - 0.397754346568529364).abs() < 1e-9);
        assert!((sol.value.value(0, 1) - 0.0918056111606906557).abs() < 1e-9);
        assert!((sol.policy.prob(0, 0, 0) - 0.517555461135860554).abs() < 1e-7);
        assert!((sol.output.prob(0, 0, 0) - 0.562288822795102388).abs() < 1e-8);
        assert!((sol.ftfi_value - 0.397754346568529364).abs() < 1e-9);
    }

    #[test]
    fn two_stage_values_match_the_known_recursion() {
        let q = bumco(1);
        let mu = InitialCondition::uniform(2);
        let sol = solve_ftfi(&q, &mu, None, &SolveOptions::default()).unwrap();
        assert!((sol.value.value(0, 0) - 0.6694916372932076).abs() < 1e-9);
        assert!((sol.value.value(0, 1) - 0.262754993003416358).abs() < 1e-9);
        // Terminal row is all zeros, one past the horizon.
        assert_eq!(sol.value.stages(), 3);
        assert_eq!(sol.value.stage(2), &[0.0, 0.0]);
    }

    #[test]
    fn symmetric_memoryless_channel_solves_to_uniform() {
        let stage = vec![vec![vec![0.9, 0.1], vec![0.1, 0.9]]];
        let q = ChannelKernel::time_invariant(
            FiniteAlphabet::binary(),
            FiniteAlphabet::binary(),
            0,
            stage,
            0,
        )
        .unwrap();
        let mu = InitialCondition::uniform(1);
        let sol = solve_ftfi(&q, &mu, None, &SolveOptions::default()).unwrap();
        let capacity = 1.0 - binary_entropy(0.1).unwrap();
        assert!((sol.ftfi_value - capacity).abs() < 1e-12);
        // The iterate starts uniform and the scores are symmetric, so the
        // solution is exactly uniform.
        assert_eq!(sol.policy.prob(0, 0, 0), 0.5);
    }

    #[test]
    fn input_independent_channel_has_zero_value() {
        let stage = vec![vec![vec![0.3, 0.7], vec![0.3, 0.7]]];
        let q = ChannelKernel::time_invariant(
            FiniteAlphabet::binary(),
            FiniteAlphabet::binary(),
            0,
            stage,
            4,
        )
        .unwrap();
        let mu = InitialCondition::uniform(1);
        let sol = solve_ftfi(&q, &mu, None, &SolveOptions::default()).unwrap();
        assert!(sol.ftfi_value.abs() < 1e-12);
        assert!(sol.directed_info.abs() < 1e-12);
    }

    #[test]
    fn optimized_value_equals_recomputed_directed_information() {
        let q = bumco(5);
        let mu = InitialCondition::uniform(2);
        let sol = solve_ftfi(&q, &mu, None, &SolveOptions::default()).unwrap();
        assert!(
            (sol.ftfi_value - sol.directed_info).abs() < 1e-9,
            "{} vs {}",
            sol.ftfi_value,
            sol.directed_info
        );
    }

    #[test]
    fn lagrangian_decomposes_into_information_and_cost() {
        let n = 3;
        let q = bumco(n);
        let gamma = CostFunction::matched_input_binary(n);
        let mu = InitialCondition::uniform(2);
        let s = 0.3;
        let sol = solve_ftfi(&q, &mu, Some((&gamma, s)), &SolveOptions::default()).unwrap();
        let cost = sol.achieved_cost.unwrap();
        let lagrangian = sol.directed_info - s * (n + 1) as f64 * cost;
        assert!(
            (sol.ftfi_value - lagrangian).abs() < 1e-9,
            "{} vs {lagrangian}",
            sol.ftfi_value
        );
        assert!((sol.s - s).abs() == 0.0);
    }

    #[test]
    fn rejects_a_negative_multiplier() {
        let q = bumco(0);
        let gamma = CostFunction::matched_input_binary(0);
        let mu = InitialCondition::uniform(2);
        match solve_ftfi(&q, &mu, Some((&gamma, -0.5)), &SolveOptions::default()) {
            Err(Error::OutOfRange { path, value }) => {
                assert_eq!(path, "s");
                assert_eq!(value, -0.5);
            }
            other => panic!("expected range error, got {other:?}"),
        }
    }

    #[test]
    fn reports_nonconvergence_instead_of_a_wrong_answer() {
        // An asymmetric ternary channel whose optimum has full support:
        // no vertex or pair shortcut can certify it, and one iteration
        // is nowhere near stationarity.
        let stage = vec![vec![
            vec![0.8, 0.1, 0.1],
            vec![0.1, 0.8, 0.1],
            vec![0.15, 0.15, 0.7],
        ]];
        let ternary = FiniteAlphabet::new(vec!["0", "1", "2"]).unwrap();
        let q = ChannelKernel::time_invariant(ternary.clone(), ternary, 0, stage, 0).unwrap();
        let mu = InitialCondition::uniform(1);
        let opts = SolveOptions {
            tol_inner: 1e-12,
            max_inner: 1,
        };
        match solve_ftfi(&q, &mu, None, &opts) {
            Err(Error::StageNotConverged { iterations, residual, .. }) => {
                assert_eq!(iterations, 1);
                assert!(residual > 1e-12);
            }
            other => panic!("expected nonconvergence, got {other:?}"),
        }
    }

    #[test]
    fn long_horizon_solution_is_fast_and_consistent() {
        let n = 1000;
        let q = bumco(n);
        let mu = InitialCondition::point_mass(1, 2).unwrap();
        let sol = solve_ftfi(&q, &mu, None, &SolveOptions::default()).unwrap();
        assert!((sol.ftfi_value - 215.000086034793065285).abs() < 1e-6);
        assert!((sol.per_unit_time() - 0.214785300734059006278).abs() < 1e-9);
    }
}
