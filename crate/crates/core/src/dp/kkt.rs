//! Stage-wise optimality certificate for a given policy.

use super::check_cost_shape;
use crate::kernels::{
    induce_output_kernel, ChannelKernel, CostFunction, InputPolicy, WordSpace,
};
use crate::{Error, Result};

/// Probability below which an input is treated as outside the support of
/// a policy column when splitting the optimality conditions.
pub const SUPPORT_EPS: f64 = 1e-9;

/// The certificate for one `(t, w)` stage problem.
#[derive(Debug, Clone, Copy)]
pub struct KktEntry {
    pub t: usize,
    pub w: usize,
    /// Spread of the stage score over the support of `π(·|w)` (must be 0
    /// at an optimum).
    pub equality_residual: f64,
    /// How far any off-support score rises above the supported level
    /// (must be ≤ 0 at an optimum; stored clamped at 0).
    pub inequality_violation: f64,
    /// Whether both conditions hold within the report tolerance.
    pub pass: bool,
}

/// The full certificate: one entry per stage and memory word.
#[derive(Debug, Clone)]
pub struct KktReport {
    /// Entries in `(t, w)` order.
    pub entries: Vec<KktEntry>,
    pub max_equality_residual: f64,
    pub max_inequality_violation: f64,
    /// Tolerance both conditions were checked against.
    pub tol: f64,
    /// Conjunction of all per-entry verdicts.
    pub pass: bool,
}

/// Checks whether `pi` satisfies the necessary-and-sufficient optimality
/// conditions of the dynamic program, without solving anything.
///
/// Backward from `K_{n+1} ≡ 0`, the stage score of input `x` at `(t, w)`
/// is
///
/// ```text
/// lhs(x) = Σ_y q_t(y|x,w) [ log2( q_t(y|x,w) / ν_t^π(y|w) ) + K_{t+1}(shift(w,y)) ] − s·γ_t(x,w)
/// ```
///
/// with `ν^π` the output kernel induced by `pi` itself, and
/// `K_t(w) = max` of `lhs` over the support of `π(·|w)`. The policy is
/// optimal iff `lhs` is constant on each support (equality residual) and
/// nowhere larger off it (inequality violation). An output that `pi`
/// never produces but the channel can reach from an off-support input
/// makes that input's score `+∞`, which fails the certificate honestly.
///
/// # Errors
///
/// [`Error::Shape`] when the policy, cost, or alphabets do not match the
/// channel. A failing certificate is *not* an error: it is reported in
/// the returned [`KktReport`].
pub fn verify_kkt(
    q: &ChannelKernel,
    pi: &InputPolicy,
    cost: Option<(&CostFunction, f64)>,
    tol: f64,
) -> Result<KktReport> {
    let n = q.horizon_n();
    let stages = n + 1;
    let x_size = q.input_alphabet().size();
    let y_size = q.output_alphabet().size();
    let m = q.memory_order();
    let j = pi.memory_order();
    if pi.horizon_n() != n {
        return Err(Error::Shape(format!(
            "policy has horizon {} but channel has {n}",
            pi.horizon_n()
        )));
    }
    if pi.input_size() != x_size || pi.output_size() != y_size {
        return Err(Error::Shape(
            "policy alphabet sizes do not match the channel".into(),
        ));
    }
    if j < m {
        return Err(Error::Shape(format!(
            "policy memory order {j} must be >= channel memory order {m}"
        )));
    }
    if let Some((gamma, _)) = cost {
        check_cost_shape(q, gamma)?;
        if gamma.memory_order() > j {
            return Err(Error::Shape(format!(
                "cost memory order {} exceeds policy memory order {j}",
                gamma.memory_order()
            )));
        }
    }
    let nu = induce_output_kernel(q, pi)?;
    let words = WordSpace::new(j, y_size);
    let word_count = words.count();

    let mut next = vec![0.0f64; word_count];
    let mut entries: Vec<KktEntry> = Vec::with_capacity(stages * word_count);
    for t in (0..stages).rev() {
        let mut row = vec![0.0f64; word_count];
        for w in 0..word_count {
            let word_m = words.suffix(w, m);
            let mut supported_max = f64::NEG_INFINITY;
            let mut supported_min = f64::INFINITY;
            let mut off_support_max = f64::NEG_INFINITY;
            for x in 0..x_size {
                let mut lhs = 0.0;
                for y in 0..y_size {
                    let qv = q.prob(t, word_m, x, y);
                    if qv > 0.0 {
                        let nv = nu.prob(t, w, y);
                        if nv > 0.0 {
                            lhs += qv * ((qv / nv).log2() + next[words.shift(w, y)]);
                        } else {
                            lhs = f64::INFINITY;
                            break;
                        }
                    }
                }
                if let Some((gamma, s)) = cost {
                    lhs -= s * gamma.value(t, words.suffix(w, gamma.memory_order()), x);
                }
                if pi.prob(t, w, x) > SUPPORT_EPS {
                    supported_max = supported_max.max(lhs);
                    supported_min = supported_min.min(lhs);
                } else {
                    off_support_max = off_support_max.max(lhs);
                }
            }
            let equality_residual = supported_max - supported_min;
            let inequality_violation = (off_support_max - supported_max).max(0.0);
            entries.push(KktEntry {
                t,
                w,
                equality_residual,
                inequality_violation,
                pass: equality_residual <= tol && inequality_violation <= tol,
            });
            row[w] = supported_max;
        }
        next = row;
    }
    entries.sort_by_key(|e| (e.t, e.w));
    let max_equality_residual = entries
        .iter()
        .map(|e| e.equality_residual)
        .fold(0.0, f64::max);
    let max_inequality_violation = entries
        .iter()
        .map(|e| e.inequality_violation)
        .fold(0.0, f64::max);
    let pass = entries.iter().all(|e| e.pass);
    Ok(KktReport {
        entries,
        max_equality_residual,
        max_inequality_violation,
        tol,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::{solve_ftfi, SolveOptions};
    use crate::kernels::{FiniteAlphabet, InitialCondition};

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
    fn uniform_policy_fails_with_the_known_residual() {
        for (n, expected) in [
            (0usize, 0.0502778692615917013),
            (1, 0.272817241294614602),
            (10, 0.531902348371173824),
        ] {
            let q = bumco(n);
            let pi = InputPolicy::uniform(2, 2, 1, n);
            let report = verify_kkt(&q, &pi, None, 1e-8).unwrap();
            assert!(!report.pass, "n = {n}");
            assert!(
                (report.max_equality_residual - expected).abs() < 1e-9,
                "n = {n}: {} vs {expected}",
                report.max_equality_residual
            );
            assert_eq!(report.max_inequality_violation, 0.0);
        }
    }

    #[test]
    fn solver_output_passes_at_the_default_tolerance() {
        let q = bumco(10);
        let mu = InitialCondition::uniform(2);
        let sol = solve_ftfi(&q, &mu, None, &SolveOptions::default()).unwrap();
        let report = verify_kkt(&q, &sol.policy, None, 1e-8).unwrap();
        assert!(
            report.pass,
            "equality {} inequality {}",
            report.max_equality_residual, report.max_inequality_violation
        );
        assert_eq!(report.entries.len(), 11 * 2);
        assert_eq!((report.entries[0].t, report.entries[0].w), (0, 0));
    }

    #[test]
    fn solver_output_passes_with_a_cost_attached() {
        let n = 6;
        let q = bumco(n);
        let gamma = crate::kernels::CostFunction::matched_input_binary(n);
        let mu = InitialCondition::uniform(2);
        let sol =
            solve_ftfi(&q, &mu, Some((&gamma, 0.05)), &SolveOptions::default()).unwrap();
        let report = verify_kkt(&q, &sol.policy, Some((&gamma, 0.05)), 1e-8).unwrap();
        assert!(report.pass);
    }

    #[test]
    fn certificate_is_sensitive_to_the_multiplier() {
        // A policy optimal for s = 0.05 is not optimal for s = 0.5.
        let n = 4;
        let q = bumco(n);
        let gamma = crate::kernels::CostFunction::matched_input_binary(n);
        let mu = InitialCondition::uniform(2);
        let sol =
            solve_ftfi(&q, &mu, Some((&gamma, 0.05)), &SolveOptions::default()).unwrap();
        let report = verify_kkt(&q, &sol.policy, Some((&gamma, 0.5)), 1e-8).unwrap();
        assert!(!report.pass);
    }

    #[test]
    fn deterministic_policy_missing_an_output_is_flagged_infinitely() {
        // The all-zeros input on an identity channel never produces y = 1,
        // so the off-support input's score is +inf and the certificate
        // fails no matter the tolerance.
        let stage = vec![vec![vec![1.0, 0.0], vec![0.0, 1.0]]];
        let q = ChannelKernel::time_invariant(
            FiniteAlphabet::binary(),
            FiniteAlphabet::binary(),
            0,
            stage,
            0,
        )
        .unwrap();
        let pi = InputPolicy::new(2, 2, 0, vec![vec![vec![1.0, 0.0]]]).unwrap();
        let report = verify_kkt(&q, &pi, None, 1e6).unwrap();
        assert!(!report.pass);
        assert!(report.max_inequality_violation.is_infinite());
    }

    #[test]
    fn rejects_mismatched_policy_shapes() {
        let q = bumco(2);
        let pi = InputPolicy::uniform(2, 2, 1, 1);
        assert!(matches!(
            verify_kkt(&q, &pi, None, 1e-8),
            Err(Error::Shape(_))
        ));
    }
}
