//! The binary erasure channel with unit memory on the previous output
//! (BEUMCO).
//!
//! Outputs live in `{0, e, 1}` and the channel never flips a bit: input
//! `x` is delivered as `y = x` with probability `p_w` and erased with
//! probability `1 − p_w`, where `p_w` depends on the previous output
//! `w ∈ {0, e, 1}`:
//!
//! ```text
//! p_0 = α    p_e = γ    p_1 = β
//! ```
//!
//! Because no output symbol is reachable from both inputs, the stage
//! maximization is a free soft-max and the optimal input distribution
//! has an explicit form that is the *same for every word* — the optimal
//! encoder for this channel ignores the feedback. With
//! `Δ¹_t = C_t(0) − C_t(1)`, `Δ²_t = C_t(1) − C_t(e)`, and
//! `L = log2(1 + 2^{Δ¹_{t+1}})`:
//!
//! ```text
//! π_t(0)  = 2^{Δ¹_{t+1}} / (1 + 2^{Δ¹_{t+1}})
//! C_t(w)  = p_w (C_{t+1}(1) + L) + (1 − p_w) C_{t+1}(e)
//! Δ¹_t    = (α − β)(Δ²_{t+1} + L)
//! Δ²_t    = (β − γ)(Δ²_{t+1} + L)
//! ```
//!
//! In the infinite-horizon limit `Δ¹_∞` solves the scalar equation
//! `Δ = c · log2(1 + 2^Δ)` with `c = (α − β) / (1 − (β − γ))`, and the
//! ergodic capacity is `(1 − s_e) · H(π_∞(0))` where `s_e` is the
//! invariant probability of the erasure state.

use super::{ClosedFormSolution, SteadyState};
use crate::dp::ValueFunction;
use crate::kernels::{h2, ChannelKernel, FiniteAlphabet, InitialCondition, InputPolicy, OutputKernel};
use crate::oracle::stationary_distribution;
use crate::{Error, Result};

/// Parameters of one BEUMCO stage: the delivery probabilities after
/// previous output `0`, `e`, and `1` respectively.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeumcoStage {
    pub alpha: f64,
    pub gamma: f64,
    pub beta: f64,
}

impl BeumcoStage {
    /// Validates the three delivery probabilities.
    ///
    /// # Errors
    ///
    /// [`Error::OutOfRange`] for entries outside `[0, 1]`;
    /// [`Error::Domain`] when `β − γ = 1` (the geometric factor of the
    /// `Δ²` recursion would be exactly one and the value differences
    /// would not contract).
    pub fn new(alpha: f64, gamma: f64, beta: f64) -> Result<Self> {
        for (name, value) in [("alpha", alpha), ("gamma", gamma), ("beta", beta)] {
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(Error::OutOfRange {
                    path: name.into(),
                    value,
                });
            }
        }
        if beta - gamma == 1.0 {
            return Err(Error::Domain {
                value: beta - gamma,
                domain: "beta - gamma != 1 (value-difference recursion must contract)",
            });
        }
        Ok(BeumcoStage { alpha, gamma, beta })
    }

    /// Delivery probabilities indexed by the previous-output word.
    pub fn delivery(&self) -> [f64; 3] {
        [self.alpha, self.gamma, self.beta]
    }

    /// The `[w][x][y]` kernel block of this stage.
    pub fn kernel_stage(&self) -> Vec<Vec<Vec<f64>>> {
        self.delivery()
            .iter()
            .map(|&p| vec![vec![p, 1.0 - p, 0.0], vec![0.0, 1.0 - p, p]])
            .collect()
    }

    /// The time-invariant channel repeating this stage over horizon `n`.
    pub fn channel(&self, n: usize) -> ChannelKernel {
        ChannelKernel::time_invariant(
            FiniteAlphabet::binary(),
            FiniteAlphabet::binary_with_erasure(),
            1,
            self.kernel_stage(),
            n,
        )
        .expect("validated stage parameters form a stochastic kernel")
    }
}

/// A (possibly time-varying) BEUMCO over a finite horizon.
#[derive(Debug, Clone)]
pub struct BeumcoParams {
    stages: Vec<BeumcoStage>,
}

impl BeumcoParams {
    /// Wraps per-stage parameters; needs at least one stage.
    ///
    /// # Errors
    ///
    /// [`Error::Shape`] when `stages` is empty.
    pub fn new(stages: Vec<BeumcoStage>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::Shape("need at least one stage".into()));
        }
        Ok(BeumcoParams { stages })
    }

    /// The time-invariant family over horizon `n`.
    ///
    /// # Errors
    ///
    /// As [`BeumcoStage::new`].
    pub fn constant(alpha: f64, gamma: f64, beta: f64, n: usize) -> Result<Self> {
        let stage = BeumcoStage::new(alpha, gamma, beta)?;
        Ok(BeumcoParams {
            stages: vec![stage; n + 1],
        })
    }

    /// Horizon `n` (stages minus one).
    pub fn horizon_n(&self) -> usize {
        self.stages.len() - 1
    }

    /// The per-stage parameters.
    pub fn stages(&self) -> &[BeumcoStage] {
        &self.stages
    }

    /// The channel kernel of this family.
    pub fn channel(&self) -> ChannelKernel {
        ChannelKernel::new(
            FiniteAlphabet::binary(),
            FiniteAlphabet::binary_with_erasure(),
            1,
            self.stages.iter().map(BeumcoStage::kernel_stage).collect(),
        )
        .expect("validated stage parameters form a stochastic kernel")
    }
}

/// Solves the finite-horizon BEUMCO problem exactly.
///
/// `mu` weights the three initial words (`Y_{-1} ∈ {0, e, 1}`).
///
/// # Errors
///
/// [`Error::Shape`] when `mu` does not cover exactly three words.
pub fn beumco_solve(params: &BeumcoParams, mu: &InitialCondition) -> Result<ClosedFormSolution> {
    if mu.words() != 3 {
        return Err(Error::Shape(format!(
            "initial condition covers {} words, BEUMCO has 3",
            mu.words()
        )));
    }
    let stages = params.stages().len();
    // value rows are [C_t(0), C_t(e), C_t(1)]; delta rows are [Δ¹_t, Δ²_t].
    let mut value = vec![vec![0.0f64; 3]; stages + 1];
    let mut delta = vec![vec![0.0f64; 2]; stages + 1];
    let mut pi_tensor = vec![Vec::new(); stages];
    let mut nu_tensor = vec![Vec::new(); stages];
    for t in (0..stages).rev() {
        let p = params.stages()[t].delivery();
        let (d1_next, d2_next) = (delta[t + 1][0], delta[t + 1][1]);
        let weight = d1_next.exp2();
        let pi0 = weight / (1.0 + weight);
        let ell = (1.0 + weight).log2();
        let (c1_next, ce_next) = (value[t + 1][2], value[t + 1][1]);
        value[t] = p
            .iter()
            .map(|&pw| pw * (c1_next + ell) + (1.0 - pw) * ce_next)
            .collect();
        delta[t] = vec![
            (p[0] - p[2]) * (d2_next + ell),
            (p[2] - p[1]) * (d2_next + ell),
        ];
        pi_tensor[t] = vec![vec![pi0, 1.0 - pi0]; 3];
        nu_tensor[t] = p
            .iter()
            .map(|&pw| vec![pw * pi0, 1.0 - pw, pw * (1.0 - pi0)])
            .collect();
    }
    let policy = InputPolicy::new(2, 3, 1, pi_tensor)?;
    let output = OutputKernel::new(3, 1, nu_tensor)?;
    let value = ValueFunction::new(value);
    let ftfi_value = value.initial_average(mu);
    Ok(ClosedFormSolution {
        policy,
        output,
        value,
        delta,
        delta_names: vec!["delta1", "delta2"],
        ftfi_value,
    })
}

/// The infinite-horizon limit of the BEUMCO recursion.
///
/// `Δ¹_∞` is located by bisection of `g(Δ) = Δ − c·log2(1 + 2^Δ)` on
/// `[-32, 32]`; the invariant distribution of the output word chain and
/// the ergodic capacity `(1 − s_e)·H(π_∞(0))` follow directly.
///
/// # Errors
///
/// [`Error::NoRoot`] when `g` does not change sign on the bracket
/// (the value differences diverge and no steady state exists);
/// propagates failures of the invariant-distribution solve.
pub fn beumco_steady_state(stage: &BeumcoStage) -> Result<SteadyState> {
    let c = (stage.alpha - stage.beta) / (1.0 - (stage.beta - stage.gamma));
    let g = |d: f64| d - c * (1.0 + d.exp2()).log2();
    let (mut lo, mut hi) = (-32.0f64, 32.0f64);
    if g(lo) == 0.0 {
        hi = lo;
    } else if g(hi) != 0.0 && g(lo).signum() == g(hi).signum() {
        return Err(Error::NoRoot {
            what: "value-difference fixed point",
            lo,
            hi,
        });
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if g(mid).signum() == g(lo).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let d1 = 0.5 * (lo + hi);
    let ell = (1.0 + d1.exp2()).log2();
    let d2 = (stage.beta - stage.gamma) * ell / (1.0 - (stage.beta - stage.gamma));
    let weight = d1.exp2();
    let pi0 = weight / (1.0 + weight);
    let nu_inf: Vec<Vec<f64>> = stage
        .delivery()
        .iter()
        .map(|&pw| vec![pw * pi0, 1.0 - pw, pw * (1.0 - pi0)])
        .collect();
    // Invariant distribution of the word chain: transition matrix
    // T[next][current] = ν_∞(next | current).
    let transition: Vec<Vec<f64>> = (0..3)
        .map(|next| (0..3).map(|cur| nu_inf[cur][next]).collect())
        .collect();
    let stationary = stationary_distribution(&transition)?;
    let capacity = (1.0 - stationary[1]) * h2(pi0);
    Ok(SteadyState {
        delta_inf: vec![d1, d2],
        pi_inf: vec![vec![pi0, 1.0 - pi0]; 3],
        nu_inf,
        stationary,
        capacity,
        kappa: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stage() -> BeumcoStage {
        BeumcoStage::new(0.95, 0.6, 0.8).unwrap()
    }

    #[test]
    fn steady_state_matches_the_reference_values() {
        let st = beumco_steady_state(&stage()).unwrap();
        assert!((st.delta_inf[0] - 0.207668978626770277678).abs() < 1e-12);
        assert!((st.stationary[0] - 0.446844767815345213812).abs() < 1e-12);
        assert!((st.stationary[1] - 0.166216606034622772410).abs() < 1e-12);
        assert!((st.stationary[2] - 0.386938626150032013778).abs() < 1e-12);
        assert!((st.capacity - 0.830675914507081110712).abs() < 1e-12);
        assert!((st.pi_inf[0][0] - 0.535924283272425545934).abs() < 1e-12);
        assert!(st.kappa.is_none());
    }

    #[test]
    fn steady_delta_solves_its_fixed_point_equation() {
        let st = beumco_steady_state(&stage()).unwrap();
        let c = (0.95 - 0.8) / (1.0 - (0.8 - 0.6));
        let d = st.delta_inf[0];
        assert!((d - c * (1.0 + d.exp2()).log2()).abs() < 1e-11);
        // Δ²_∞ is the geometric limit of its own recursion.
        let ell = (1.0 + d.exp2()).log2();
        assert!((st.delta_inf[1] - (0.8 - 0.6) * (st.delta_inf[1] + ell)).abs() < 1e-11);
    }

    #[test]
    fn long_horizon_total_matches_the_reference_value() {
        let params = BeumcoParams::constant(0.95, 0.6, 0.8, 1000).unwrap();
        let mu = InitialCondition::point_mass(0, 3).unwrap();
        let sol = beumco_solve(&params, &mu).unwrap();
        assert!(
            (sol.ftfi_value - 831.670854643554921796).abs() < 1e-6,
            "{}",
            sol.ftfi_value
        );
        assert!((sol.ftfi_value / 1001.0 - 0.830840014628925995800).abs() < 1e-9);
    }

    #[test]
    fn the_optimal_encoder_ignores_the_feedback() {
        let params = BeumcoParams::constant(0.95, 0.6, 0.8, 40).unwrap();
        let sol = beumco_solve(&params, &InitialCondition::uniform(3)).unwrap();
        for t in 0..=40 {
            let stage = sol.policy.stage(t);
            assert_eq!(stage[0], stage[1]);
            assert_eq!(stage[1], stage[2]);
        }
    }

    #[test]
    fn memoryless_delivery_reduces_to_the_erasure_channel() {
        // With α = γ = β = p the word is irrelevant: the optimal input is
        // uniform and the ergodic capacity is the erasure-channel value p.
        let st = beumco_steady_state(&BeumcoStage::new(0.7, 0.7, 0.7).unwrap()).unwrap();
        assert!((st.pi_inf[0][0] - 0.5).abs() < 1e-12);
        assert!((st.capacity - 0.7).abs() < 1e-12);
        assert!((st.stationary[1] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(matches!(
            BeumcoStage::new(1.01, 0.6, 0.8),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            BeumcoStage::new(0.5, 0.0, 1.0),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(BeumcoParams::new(vec![]), Err(Error::Shape(_))));
        let params = BeumcoParams::constant(0.95, 0.6, 0.8, 2).unwrap();
        assert!(matches!(
            beumco_solve(&params, &InitialCondition::uniform(2)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn channel_kernel_separates_the_inputs() {
        let q = stage().channel(1);
        // Input 0 never produces output 1 and vice versa.
        for t in 0..2 {
            for w in 0..3 {
                assert_eq!(q.prob(t, w, 0, 2), 0.0);
                assert_eq!(q.prob(t, w, 1, 0), 0.0);
            }
        }
        assert_eq!(q.prob(0, 0, 0, 0), 0.95);
        assert_eq!(q.prob(0, 1, 0, 1), 0.4);
        assert_eq!(q.prob(0, 2, 1, 2), 0.8);
    }
}
