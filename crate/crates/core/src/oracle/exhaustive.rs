//! Directed information by exhaustive trajectory enumeration.
//!
//! The fast evaluator in [`crate::kernels`] propagates memory-word
//! marginals forward one stage at a time. This oracle instead expands the
//! definition literally: it enumerates every joint input/output
//! trajectory, multiplies the policy and channel factors along it, builds
//! the output-prefix probability tables `p(y^t | initial word)` by
//! explicit marginalization, and sums
//!
//! ```text
//! I(X^n -> Y^n) = sum_t E[ log2 q_t(Y_t | ...) - log2 p(Y_t | Y^{t-1}) ]
//! ```
//!
//! over the joint distribution, averaging over the initial words. The two
//! code paths share no intermediate quantities, so agreement certifies
//! both.

use crate::kernels::{ChannelKernel, InitialCondition, InputPolicy, WordSpace};
use crate::{Error, Result};

/// Maximum number of joint trajectories, `(|X| * |Y|)^(n+1)`, this oracle
/// will enumerate.
const TRAJECTORY_BUDGET: f64 = 1e7;

/// Computes `I(X^n -> Y^n)` in bits by enumerating all joint
/// input/output trajectories.
///
/// The result equals [`crate::kernels::directed_information`] up to
/// roundoff; this path exists to certify that one, not to be fast.
///
/// # Errors
///
/// [`Error::Budget`] when `(|X| * |Y|)^(n+1)` exceeds `1e7` trajectories;
/// [`Error::Shape`] when the policy or initial condition does not match
/// the channel.
pub fn exhaustive_directed_info(
    q: &ChannelKernel,
    pi: &InputPolicy,
    mu: &InitialCondition,
) -> Result<f64> {
    let n = q.horizon_n();
    let stages = n + 1;
    let x_size = q.input_alphabet().size();
    let y_size = q.output_alphabet().size();
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
    let m = q.memory_order();
    let j = pi.memory_order();
    if j < m {
        return Err(Error::Shape(format!(
            "policy memory order {j} must be >= channel memory order {m}"
        )));
    }
    let words = WordSpace::new(j, y_size);
    if mu.words() != words.count() {
        return Err(Error::Shape(format!(
            "initial condition covers {} words, policy memory needs {}",
            mu.words(),
            words.count()
        )));
    }
    let needed = ((x_size * y_size) as f64).powi(stages as i32);
    if needed > TRAJECTORY_BUDGET {
        return Err(Error::Budget {
            needed,
            budget: TRAJECTORY_BUDGET,
            unit: "trajectories",
        });
    }

    // Trajectory indices place stage 0 in the most significant digit, so
    // the length-(t+1) output prefix of `ys` is `ys / y_size^(n-t)`.
    let y_place: Vec<usize> = (0..stages).map(|t| y_size.pow((n - t) as u32)).collect();
    let x_place: Vec<usize> = (0..stages).map(|t| x_size.pow((n - t) as u32)).collect();
    let y_traj = y_size.pow(stages as u32);
    let x_traj = x_size.pow(stages as u32);

    let mut total = 0.0;
    for w0 in 0..words.count() {
        let mass = mu.prob(w0);
        if mass == 0.0 {
            continue;
        }
        // Joint enumeration: output-trajectory marginals and the channel
        // term sum_t E log2 q in one pass.
        let mut p_y = vec![0.0f64; y_traj];
        let mut channel_term = 0.0;
        for (ys, p_slot) in p_y.iter_mut().enumerate() {
            for xs in 0..x_traj {
                let mut p = 1.0;
                let mut log_q = 0.0;
                let mut w = w0;
                let mut alive = true;
                for t in 0..stages {
                    let y = (ys / y_place[t]) % y_size;
                    let x = (xs / x_place[t]) % x_size;
                    let factor = pi.prob(t, w, x) * q.prob(t, words.suffix(w, m), x, y);
                    if factor == 0.0 {
                        alive = false;
                        break;
                    }
                    p *= factor;
                    log_q += q.prob(t, words.suffix(w, m), x, y).log2();
                    w = words.shift(w, y);
                }
                if alive {
                    *p_slot += p;
                    channel_term += mass * p * log_q;
                }
            }
        }
        // Prefix tables p(y^t | w0), then the output term
        // sum_t E log2 p(Y_t | Y^{t-1}, w0).
        let mut prefix: Vec<Vec<f64>> = Vec::with_capacity(stages);
        for t in 0..stages {
            let mut table = vec![0.0f64; y_size.pow((t + 1) as u32)];
            for (ys, &p) in p_y.iter().enumerate() {
                table[ys / y_place[t]] += p;
            }
            prefix.push(table);
        }
        let mut output_term = 0.0;
        for (ys, &p) in p_y.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for t in 0..stages {
                let pre = ys / y_place[t];
                let conditional = if t == 0 {
                    prefix[0][pre]
                } else {
                    prefix[t][pre] / prefix[t - 1][pre / y_size]
                };
                output_term += mass * p * conditional.log2();
            }
        }
        total += channel_term - output_term;
    }
    Ok(total)
}
