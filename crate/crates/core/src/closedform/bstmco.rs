//! The binary symmetric two-memory channel with output feedback
//! (BSTMCO).
//!
//! The channel conditions on the last *two* outputs. Words are indexed
//! `idx = 2·y_{t-2} + y_{t-1}` and the kernel is given by four
//! parameters through `P(Y_t = 0 | x_t, idx)`:
//!
//! ```text
//! x = 0:  [α, 1−δ, γ, 1−β]      (idx = 00, 01, 10, 11)
//! x = 1:  [β, 1−γ, δ, 1−α]
//! ```
//!
//! The kernel is invariant under the global bit flip
//! `(x, y, idx) ↦ (1−x, 1−y, ~idx)`, so the value function collapses to
//! two numbers per stage: `C_t(same)` on the constant words
//! `{00, 11}` and `C_t(mixed)` on the alternating words `{01, 10}`.
//! With `D' = C_{t+1}(mixed) − C_{t+1}(same)`, the slopes
//! `μ_0 = (H(β) − H(α))/(β − α)`, `μ_1 = (H(δ) − H(γ))/(δ − γ)`, and
//! `e_i = 2^{μ_i + D'}`, the interior stage maximizer is
//!
//! ```text
//! π_t(0|00) = (1 − β(1+e_0)) / ((α−β)(1+e_0))     ν_t(0|00) = 1/(1+e_0)
//! π_t(0|10) = (1 − δ(1+e_1)) / ((γ−δ)(1+e_1))     ν_t(0|10) = 1/(1+e_1)
//! C_t(same)  = μ_0(α−1) + C_{t+1}(same) + log2(1+e_0) − H(α)
//! C_t(mixed) = μ_1(γ−1) + C_{t+1}(same) + log2(1+e_1) − H(γ)
//! ```
//!
//! with the remaining words filled in by the flip symmetry:
//! `π_t(0|11) = 1 − π_t(0|00)` and `π_t(0|01) = 1 − π_t(0|10)`. As with
//! the unit-memory family, a maximizer outside `[0, 1]` means the
//! interior assumption failed and the solve reports
//! [`crate::Error::Regime`].

use super::ClosedFormSolution;
use crate::dp::ValueFunction;
use crate::kernels::{h2, ChannelKernel, FiniteAlphabet, InitialCondition, InputPolicy, OutputKernel};
use crate::{Error, Result};

/// Parameters of one BSTMCO stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BstmcoStage {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl BstmcoStage {
    /// Validates the four probabilities.
    ///
    /// # Errors
    ///
    /// [`Error::OutOfRange`] for entries outside `[0, 1]`;
    /// [`Error::Domain`] when `α = β` or `γ = δ` (the closed-form slopes
    /// `μ_i` would divide by zero).
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        for (name, value) in [
            ("alpha", alpha),
            ("beta", beta),
            ("gamma", gamma),
            ("delta", delta),
        ] {
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(Error::OutOfRange {
                    path: name.into(),
                    value,
                });
            }
        }
        if alpha == beta {
            return Err(Error::Domain {
                value: alpha,
                domain: "alpha != beta (inputs must differ on constant words)",
            });
        }
        if gamma == delta {
            return Err(Error::Domain {
                value: gamma,
                domain: "gamma != delta (inputs must differ on alternating words)",
            });
        }
        Ok(BstmcoStage {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    /// The `[w][x][y]` kernel block of this stage, words indexed
    /// `2·y_{t-2} + y_{t-1}`.
    pub fn kernel_stage(&self) -> Vec<Vec<Vec<f64>>> {
        let zero_given_x0 = [self.alpha, 1.0 - self.delta, self.gamma, 1.0 - self.beta];
        let zero_given_x1 = [self.beta, 1.0 - self.gamma, self.delta, 1.0 - self.alpha];
        (0..4)
            .map(|idx| {
                vec![
                    vec![zero_given_x0[idx], 1.0 - zero_given_x0[idx]],
                    vec![zero_given_x1[idx], 1.0 - zero_given_x1[idx]],
                ]
            })
            .collect()
    }

    /// The time-invariant channel repeating this stage over horizon `n`.
    pub fn channel(&self, n: usize) -> ChannelKernel {
        ChannelKernel::time_invariant(
            FiniteAlphabet::binary(),
            FiniteAlphabet::binary(),
            2,
            self.kernel_stage(),
            n,
        )
        .expect("validated stage parameters form a stochastic kernel")
    }
}

/// A (possibly time-varying) BSTMCO over a finite horizon.
#[derive(Debug, Clone)]
pub struct BstmcoParams {
    stages: Vec<BstmcoStage>,
}

impl BstmcoParams {
    /// Wraps per-stage parameters; needs at least one stage.
    ///
    /// # Errors
    ///
    /// [`Error::Shape`] when `stages` is empty.
    pub fn new(stages: Vec<BstmcoStage>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::Shape("need at least one stage".into()));
        }
        Ok(BstmcoParams { stages })
    }

    /// The time-invariant family over horizon `n`.
    ///
    /// # Errors
    ///
    /// As [`BstmcoStage::new`].
    pub fn constant(alpha: f64, beta: f64, gamma: f64, delta: f64, n: usize) -> Result<Self> {
        let stage = BstmcoStage::new(alpha, beta, gamma, delta)?;
        Ok(BstmcoParams {
            stages: vec![stage; n + 1],
        })
    }

    /// Horizon `n` (stages minus one).
    pub fn horizon_n(&self) -> usize {
        self.stages.len() - 1
    }

    /// The per-stage parameters.
    pub fn stages(&self) -> &[BstmcoStage] {
        &self.stages
    }

    /// The channel kernel of this family.
    pub fn channel(&self) -> ChannelKernel {
        ChannelKernel::new(
            FiniteAlphabet::binary(),
            FiniteAlphabet::binary(),
            2,
            self.stages.iter().map(BstmcoStage::kernel_stage).collect(),
        )
        .expect("validated stage parameters form a stochastic kernel")
    }
}

/// Solves the finite-horizon BSTMCO problem exactly.
///
/// `mu` weights the four initial words `(Y_{-2}, Y_{-1})`.
///
/// # Errors
///
/// [`Error::Shape`] when `mu` does not cover exactly four words;
/// [`Error::Regime`] when the interior closed form fails at some stage.
pub fn bstmco_solve(params: &BstmcoParams, mu: &InitialCondition) -> Result<ClosedFormSolution> {
    if mu.words() != 4 {
        return Err(Error::Shape(format!(
            "initial condition covers {} words, BSTMCO has 4",
            mu.words()
        )));
    }
    let stages = params.stages().len();
    // value rows hold per-word values [C(00), C(01), C(10), C(11)] =
    // [same, mixed, mixed, same]; delta rows hold [D_t].
    let mut value = vec![vec![0.0f64; 4]; stages + 1];
    let mut delta = vec![vec![0.0f64; 1]; stages + 1];
    let mut pi_tensor = vec![Vec::new(); stages];
    let mut nu_tensor = vec![Vec::new(); stages];
    for t in (0..stages).rev() {
        let st = &params.stages()[t];
        let (a, b, g, d) = (st.alpha, st.beta, st.gamma, st.delta);
        let mu0 = (h2(b) - h2(a)) / (b - a);
        let mu1 = (h2(d) - h2(g)) / (d - g);
        let d_next = delta[t + 1][0];
        let e0 = (mu0 + d_next).exp2();
        let e1 = (mu1 + d_next).exp2();
        let pi_same = (1.0 - b * (1.0 + e0)) / ((a - b) * (1.0 + e0));
        let pi_mixed = (1.0 - d * (1.0 + e1)) / ((g - d) * (1.0 + e1));
        for (quantity, value) in [("pi(0|00)", pi_same), ("pi(0|10)", pi_mixed)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::Regime { t, quantity, value });
            }
        }
        let nu_same = 1.0 / (1.0 + e0);
        let nu_mixed = 1.0 / (1.0 + e1);
        let next_same = value[t + 1][0];
        let c_same = mu0 * (a - 1.0) + next_same + (1.0 + e0).log2() - h2(a);
        let c_mixed = mu1 * (g - 1.0) + next_same + (1.0 + e1).log2() - h2(g);
        value[t] = vec![c_same, c_mixed, c_mixed, c_same];
        delta[t] = vec![c_mixed - c_same];
        pi_tensor[t] = vec![
            vec![pi_same, 1.0 - pi_same],
            vec![1.0 - pi_mixed, pi_mixed],
            vec![pi_mixed, 1.0 - pi_mixed],
            vec![1.0 - pi_same, pi_same],
        ];
        nu_tensor[t] = vec![
            vec![nu_same, 1.0 - nu_same],
            vec![e1 / (1.0 + e1), nu_mixed],
            vec![nu_mixed, 1.0 - nu_mixed],
            vec![e0 / (1.0 + e0), nu_same],
        ];
    }
    let policy = InputPolicy::new(2, 2, 2, pi_tensor)?;
    let output = OutputKernel::new(2, 2, nu_tensor)?;
    let value = ValueFunction::new(value);
    let ftfi_value = value.initial_average(mu);
    Ok(ClosedFormSolution {
        policy,
        output,
        value,
        delta,
        delta_names: vec!["delta"],
        ftfi_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize) -> BstmcoParams {
        BstmcoParams::constant(0.9, 0.1, 0.2, 0.4, n).unwrap()
    }

    #[test]
    fn three_stage_values_match_the_reference_recursion() {
        let sol = bstmco_solve(&params(3), &InitialCondition::uniform(4)).unwrap();
        assert!((sol.value.value(0, 0) - 1.35072789709948823).abs() < 1e-12);
        assert!((sol.value.value(0, 1) - 0.72446644450610661).abs() < 1e-12);
        assert!((sol.policy.prob(0, 0, 0) - 0.632597271386).abs() < 1e-9);
        assert!((sol.policy.prob(0, 1, 0) - 0.968016058631).abs() < 1e-9);
        assert!((sol.policy.prob(0, 2, 0) - 0.0319839413693).abs() < 1e-9);
        assert!((sol.policy.prob(0, 3, 0) - 0.367402728614).abs() < 1e-9);
        assert!((sol.delta[3][0] - -0.496115361532078568).abs() < 1e-12);
    }

    #[test]
    fn the_flip_symmetry_holds_exactly() {
        let sol = bstmco_solve(&params(6), &InitialCondition::uniform(4)).unwrap();
        for t in 0..=6 {
            assert_eq!(
                sol.policy.prob(t, 3, 0),
                1.0 - sol.policy.prob(t, 0, 0)
            );
            assert_eq!(
                sol.policy.prob(t, 1, 0),
                1.0 - sol.policy.prob(t, 2, 0)
            );
            assert!((sol.output.prob(t, 3, 0) + sol.output.prob(t, 0, 0) - 1.0).abs() < 1e-15);
            assert!((sol.output.prob(t, 1, 0) + sol.output.prob(t, 2, 0) - 1.0).abs() < 1e-15);
            assert_eq!(sol.value.value(t, 0), sol.value.value(t, 3));
            assert_eq!(sol.value.value(t, 1), sol.value.value(t, 2));
        }
    }

    #[test]
    fn kernel_layout_follows_the_word_indexing() {
        let q = params(0).channel();
        assert_eq!(q.prob(0, 0, 0, 0), 0.9); // alpha at idx 00
        assert_eq!(q.prob(0, 0, 1, 0), 0.1); // beta at idx 00
        assert_eq!(q.prob(0, 2, 0, 0), 0.2); // gamma at idx 10
        assert_eq!(q.prob(0, 2, 1, 0), 0.4); // delta at idx 10
        assert_eq!(q.prob(0, 1, 0, 0), 0.6); // 1 - delta at idx 01
        assert_eq!(q.prob(0, 3, 1, 0), 1.0 - 0.9); // 1 - alpha at idx 11
        assert_eq!(q.memory_order(), 2);
        assert_eq!(q.word_space().count(), 4);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(matches!(
            BstmcoStage::new(-0.1, 0.1, 0.2, 0.4),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            BstmcoStage::new(0.3, 0.3, 0.2, 0.4),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            BstmcoStage::new(0.9, 0.1, 0.4, 0.4),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(BstmcoParams::new(vec![]), Err(Error::Shape(_))));
        assert!(matches!(
            bstmco_solve(&params(1), &InitialCondition::uniform(2)),
            Err(Error::Shape(_))
        ));
    }
}
