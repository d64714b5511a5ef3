//! Evaluation of directed information and expected cost for a given policy.
//!
//! The joint law of `(X^n, Y^n)` factorizes stage by stage as
//! `Π_t π_t(x_t | w_t) q_t(y_t | suffix_M(w_t), x_t)` with `w_t` the
//! length-`J` memory word, so the distribution of `w_t` is a Markov chain
//! and every per-stage expectation reduces to a sum over
//! `(w, x, y)` weighted by the current word distribution. That forward
//! propagation is exact — no trajectory enumeration — and is what makes
//! horizon 1000 evaluations instant.

use super::tensors::{ChannelKernel, CostFunction, InitialCondition, InputPolicy, OutputKernel};
use crate::{Error, Result};

/// Binary entropy `H(p) = −p·log2 p − (1−p)·log2(1−p)` in bits, with
/// `H(0) = H(1) = 0` by the `0·log 0 = 0` convention.
///
/// # Errors
///
/// [`Error::Domain`] if `p` is outside `[0, 1]` or not a number.
///
/// # Example
///
/// ```
/// use ftfi_core::kernels::binary_entropy;
/// assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
/// assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
/// assert!(binary_entropy(1.2).is_err());
/// ```
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain { value: p, domain: "[0, 1]" });
    }
    Ok(h2(p))
}

/// `binary_entropy` without the domain check, for arguments already
/// validated to lie in [0, 1].
pub(crate) fn h2(p: f64) -> f64 {
    let side = |v: f64| if v > 0.0 { -v * v.log2() } else { 0.0 };
    side(p) + side(1.0 - p)
}

/// Checks that a (channel, policy) pair can be composed: equal horizons,
/// matching alphabet sizes, and policy memory `J ≥ M`.
fn check_compatible(q: &ChannelKernel, pi: &InputPolicy) -> Result<()> {
    if pi.stages() != q.stages() {
        return Err(Error::Shape(format!(
            "policy has {} stages, channel has {}",
            pi.stages(),
            q.stages()
        )));
    }
    if pi.input_size() != q.input_alphabet().size() {
        return Err(Error::Shape(format!(
            "policy input size {} != channel input alphabet size {}",
            pi.input_size(),
            q.input_alphabet().size()
        )));
    }
    if pi.output_size() != q.output_alphabet().size() {
        return Err(Error::Shape(format!(
            "policy output size {} != channel output alphabet size {}",
            pi.output_size(),
            q.output_alphabet().size()
        )));
    }
    if pi.memory_order() < q.memory_order() {
        return Err(Error::Shape(format!(
            "policy memory order J={} < channel memory order M={}",
            pi.memory_order(),
            q.memory_order()
        )));
    }
    Ok(())
}

fn check_initial(pi: &InputPolicy, mu: &InitialCondition) -> Result<()> {
    let words = pi.word_space().count();
    if mu.words() != words {
        return Err(Error::Shape(format!(
            "initial condition covers {} words, policy word space has {words}",
            mu.words()
        )));
    }
    Ok(())
}

/// Induces the output kernel `ν_t(y | w) = Σ_x q_t(y | suffix_M(w), x) ·
/// π_t(x | w)` of a (channel, policy) pair.
///
/// # Errors
///
/// [`Error::Shape`] if the pair is incompatible (mismatched horizon or
/// alphabets, or policy memory `J` smaller than channel memory `M`).
pub fn induce_output_kernel(q: &ChannelKernel, pi: &InputPolicy) -> Result<OutputKernel> {
    check_compatible(q, pi)?;
    let ws = pi.word_space();
    let y_size = q.output_alphabet().size();
    let x_size = q.input_alphabet().size();
    let m = q.memory_order();
    let mut nu = Vec::with_capacity(q.stages());
    for t in 0..q.stages() {
        let mut stage = vec![vec![0.0; y_size]; ws.count()];
        for (w, column) in stage.iter_mut().enumerate() {
            let wm = ws.suffix(w, m);
            for x in 0..x_size {
                let px = pi.prob(t, w, x);
                if px == 0.0 {
                    continue;
                }
                for (y, mass) in column.iter_mut().enumerate() {
                    *mass += q.prob(t, wm, x, y) * px;
                }
            }
        }
        nu.push(stage);
    }
    OutputKernel::new(y_size, pi.memory_order(), nu)
}

/// Total directed information `Σ_t E^π[ log2( q_t(Y_t | ·) / ν_t(Y_t | ·) ) ]`
/// in bits over the whole horizon, for the output kernel induced by
/// `(q, π)`. Divide by `n + 1` for the per-channel-use rate.
///
/// Computed exactly by forward propagation of the memory-word distribution;
/// terms with zero joint mass contribute 0.
///
/// # Errors
///
/// [`Error::Shape`] on incompatible inputs. (Absolute-continuity failures
/// cannot occur here: the induced `ν_t(y | w)` dominates every term with
/// positive joint mass by construction.)
pub fn directed_information(
    q: &ChannelKernel,
    pi: &InputPolicy,
    mu: &InitialCondition,
) -> Result<f64> {
    let nu = induce_output_kernel(q, pi)?;
    directed_information_with_output(q, pi, &nu, mu)
}

/// As [`directed_information`], but against a caller-supplied output kernel.
///
/// # Errors
///
/// [`Error::AbsoluteContinuity`] if `ν_t(y | w) = 0` while the joint law
/// gives `(w, x, y)` positive mass at stage `t` — the log-ratio is then
/// undefined. This signals a `ν` that does not match `(q, π)`; the induced
/// kernel never triggers it.
pub fn directed_information_with_output(
    q: &ChannelKernel,
    pi: &InputPolicy,
    nu: &OutputKernel,
    mu: &InitialCondition,
) -> Result<f64> {
    check_compatible(q, pi)?;
    check_initial(pi, mu)?;
    if nu.memory_order() != pi.memory_order()
        || nu.output_size() != pi.output_size()
        || nu.horizon_n() != q.horizon_n()
    {
        return Err(Error::Shape("output kernel shape does not match (q, pi)".into()));
    }
    let ws = pi.word_space();
    let m = q.memory_order();
    let mut p = mu.as_slice().to_vec();
    let mut total = 0.0;
    for t in 0..q.stages() {
        let mut next = vec![0.0; ws.count()];
        for (w, &pw) in p.iter().enumerate() {
            if pw == 0.0 {
                continue;
            }
            let wm = ws.suffix(w, m);
            for x in 0..pi.input_size() {
                let base = pw * pi.prob(t, w, x);
                if base == 0.0 {
                    continue;
                }
                for y in 0..pi.output_size() {
                    let qv = q.prob(t, wm, x, y);
                    if qv == 0.0 {
                        continue;
                    }
                    let joint = base * qv;
                    let nv = nu.prob(t, w, y);
                    if nv == 0.0 {
                        return Err(Error::AbsoluteContinuity { t, w, y, mass: joint });
                    }
                    total += joint * (qv.log2() - nv.log2());
                    next[ws.shift(w, y)] += joint;
                }
            }
        }
        p = next;
    }
    Ok(total)
}

/// Per-unit-time expected transmission cost
/// `(1/(n+1)) Σ_t E^π[ γ_t(X_t, Y_{t-N}^{t-1}) ]`, by the same forward
/// word-distribution propagation as [`directed_information`].
///
/// # Errors
///
/// [`Error::Shape`] on incompatible inputs (including cost memory `N`
/// exceeding the policy memory `J`).
pub fn expected_cost(
    q: &ChannelKernel,
    pi: &InputPolicy,
    gamma: &CostFunction,
    mu: &InitialCondition,
) -> Result<f64> {
    check_compatible(q, pi)?;
    check_initial(pi, mu)?;
    if gamma.horizon_n() != q.horizon_n() {
        return Err(Error::Shape(format!(
            "cost has {} stages, channel has {}",
            gamma.horizon_n() + 1,
            q.stages()
        )));
    }
    if gamma.input_size() != pi.input_size() || gamma.output_size() != pi.output_size() {
        return Err(Error::Shape("cost alphabet sizes do not match (q, pi)".into()));
    }
    if gamma.memory_order() > pi.memory_order() {
        return Err(Error::Shape(format!(
            "cost memory order N={} > policy memory order J={}",
            gamma.memory_order(),
            pi.memory_order()
        )));
    }
    let ws = pi.word_space();
    let m = q.memory_order();
    let n_mem = gamma.memory_order();
    let mut p = mu.as_slice().to_vec();
    let mut total = 0.0;
    for t in 0..q.stages() {
        let mut next = vec![0.0; ws.count()];
        for (w, &pw) in p.iter().enumerate() {
            if pw == 0.0 {
                continue;
            }
            let wm = ws.suffix(w, m);
            let wn = ws.suffix(w, n_mem);
            for x in 0..pi.input_size() {
                let base = pw * pi.prob(t, w, x);
                if base == 0.0 {
                    continue;
                }
                total += base * gamma.value(t, wn, x);
                for y in 0..pi.output_size() {
                    let qv = q.prob(t, wm, x, y);
                    if qv > 0.0 {
                        next[ws.shift(w, y)] += base * qv;
                    }
                }
            }
        }
        p = next;
    }
    Ok(total / q.stages() as f64)
}
