//! Stationary distribution of a finite Markov chain by power iteration.

use crate::{Error, Result};

/// Sup-norm change below which the iteration is declared converged.
const CONVERGENCE_TOL: f64 = 1e-14;
/// Iteration cap; a periodic chain reaches it and reports oscillation.
const MAX_ITERATIONS: usize = 1_000_000;

/// Computes the stationary distribution of the column-stochastic
/// transition matrix `transition`, where `transition[i][j]` is the
/// probability of moving to state `i` from state `j`.
///
/// Starts from the uniform distribution and applies the transition map
/// until the sup-norm change drops below `1e-14`. This converges for
/// every aperiodic chain reachable from the uniform start; no attempt is
/// made to handle periodic chains, which instead produce an
/// [`Error::Oscillation`] carrying the last two iterates so the caller
/// can see the cycle.
///
/// # Errors
///
/// [`Error::Shape`] if the matrix is empty or not square,
/// [`Error::NotStochastic`] / [`Error::OutOfRange`] if a column is not a
/// probability distribution, and [`Error::Oscillation`] if the iteration
/// has not settled after one million steps.
///
/// # Examples
///
/// ```
/// use ftfi_core::oracle::stationary_distribution;
///
/// // Two-state chain: stay with probability 3/4, switch with 1/4.
/// let t = vec![vec![0.75, 0.25], vec![0.25, 0.75]];
/// let p = stationary_distribution(&t).unwrap();
/// assert!((p[0] - 0.5).abs() < 1e-12);
/// ```
pub fn stationary_distribution(transition: &[Vec<f64>]) -> Result<Vec<f64>> {
    let states = transition.len();
    if states == 0 {
        return Err(Error::Shape("transition matrix is empty".into()));
    }
    for (i, row) in transition.iter().enumerate() {
        if row.len() != states {
            return Err(Error::Shape(format!(
                "transition row {i} has {} entries, expected {states}",
                row.len()
            )));
        }
    }
    for j in 0..states {
        let mut sum = 0.0;
        for (i, row) in transition.iter().enumerate() {
            let p = row[j];
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::OutOfRange {
                    path: format!("transition[{i}][{j}]"),
                    value: p,
                });
            }
            sum += p;
        }
        if (sum - 1.0).abs() > crate::kernels::NORMALIZATION_TOL {
            return Err(Error::NotStochastic {
                path: format!("transition[.][{j}]"),
                sum,
            });
        }
    }

    let mut current = vec![1.0 / states as f64; states];
    let mut previous = current.clone();
    for _ in 0..MAX_ITERATIONS {
        let mut next = vec![0.0; states];
        for (i, row) in transition.iter().enumerate() {
            let mut acc = 0.0;
            for (j, &p) in row.iter().enumerate() {
                acc += p * current[j];
            }
            next[i] = acc;
        }
        // Guard against slow drift of the total mass under roundoff.
        let total: f64 = next.iter().sum();
        for p in &mut next {
            *p /= total;
        }
        let change = next
            .iter()
            .zip(&current)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        previous = std::mem::replace(&mut current, next);
        if change < CONVERGENCE_TOL {
            return Ok(current);
        }
    }
    Err(Error::Oscillation {
        iterations: MAX_ITERATIONS,
        a: previous,
        b: current,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_chain_keeps_the_uniform_start() {
        let t = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let p = stationary_distribution(&t).unwrap();
        assert_eq!(p, vec![0.5, 0.5]);
    }

    #[test]
    fn doubly_stochastic_chain_is_uniform() {
        let t = vec![
            vec![0.2, 0.5, 0.3],
            vec![0.5, 0.3, 0.2],
            vec![0.3, 0.2, 0.5],
        ];
        let p = stationary_distribution(&t).unwrap();
        for &x in &p {
            assert!((x - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_state_chain_matches_closed_form() {
        // pi_0 = q / (p + q) for switch rates p (out of 0) and q (out of 1).
        let (p, q) = (0.3, 0.1);
        let t = vec![vec![1.0 - p, q], vec![p, 1.0 - q]];
        let st = stationary_distribution(&t).unwrap();
        assert!((st[0] - q / (p + q)).abs() < 1e-12);
        assert!((st[1] - p / (p + q)).abs() < 1e-12);
    }

    #[test]
    fn periodic_chain_reports_oscillation_with_both_iterates() {
        // 0 -> 2, 1 -> 2, 2 -> 0: from the uniform start the mass on state
        // 1 dies immediately and states 0/2 trade 1/3 and 2/3 forever.
        let t = vec![
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, 0.0],
            vec![1.0, 1.0, 0.0],
        ];
        match stationary_distribution(&t) {
            Err(Error::Oscillation { iterations, a, b }) => {
                assert_eq!(iterations, 1_000_000);
                let third = 1.0 / 3.0;
                assert!((a[0] - third).abs() < 1e-9 || (a[0] - 2.0 * third).abs() < 1e-9);
                assert!((a[0] - b[2]).abs() < 1e-9, "period-two iterates swap");
                assert!((a[2] - b[0]).abs() < 1e-9);
            }
            other => panic!("expected oscillation, got {other:?}"),
        }
    }

    #[test]
    fn rejects_denormalized_columns() {
        let t = vec![vec![0.5, 0.2], vec![0.4, 0.8]];
        match stationary_distribution(&t) {
            Err(Error::NotStochastic { path, .. }) => assert_eq!(path, "transition[.][0]"),
            other => panic!("expected stochasticity error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_non_square_input() {
        let t = vec![vec![1.0, 0.0]];
        assert!(matches!(stationary_distribution(&t), Err(Error::Shape(_))));
    }
}
