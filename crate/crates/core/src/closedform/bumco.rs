//! The binary unit-memory channel with output feedback (BUMCO).
//!
//! The channel is parametrized by `(α, β, γ, δ)`, the probabilities of
//! output `0` for the four `(input, previous output)` pairs:
//!
//! ```text
//! P(Y_t = 0 | x_t = 0, y_{t-1} = 0) = α    P(Y_t = 0 | x_t = 0, y_{t-1} = 1) = β
//! P(Y_t = 0 | x_t = 1, y_{t-1} = 0) = γ    P(Y_t = 0 | x_t = 1, y_{t-1} = 1) = δ
//! ```
//!
//! With `H` the binary entropy and the slopes
//! `μ_0 = (H(γ) − H(α)) / (γ − α)`, `μ_1 = (H(β) − H(δ)) / (β − δ)`, the
//! per-stage maximization has an interior stationary point in closed
//! form. Writing `Δ'` for the next stage's value difference
//! `C_{t+1}(1) − C_{t+1}(0)` and `e_i = 2^{μ_i + Δ'}`:
//!
//! ```text
//! π_t(0|0) = (1 − γ(1+e_0)) / ((α−γ)(1+e_0))    ν_t(0|0) = 1/(1+e_0)
//! π_t(0|1) = (1 − δ(1+e_1)) / ((β−δ)(1+e_1))    ν_t(0|1) = 1/(1+e_1)
//! C_t(0) = μ_0(α−1) + C_{t+1}(0) + log2(1+e_0) − H(α)
//! C_t(1) = μ_1(β−1) + C_{t+1}(0) + log2(1+e_1) − H(β)
//! ```
//!
//! The formulas are a *stationary-point* solution: whenever a computed
//! probability leaves `[0, 1]` the interior assumption has failed (the
//! true optimum sits on the simplex boundary) and the solve reports
//! [`crate::Error::Regime`] instead of a bogus distribution.
//!
//! Under the matched input cost `γ_cost(x, y_{t-1}) = 1{x = y_{t-1}}`
//! with multiplier `s`, the same recursion applies with
//! `μ_i` replaced by `μ_i^s` (numerators reduced by `s`) and an extra
//! `−s` on `C_t(0)`.
//!
//! The value-difference recursion `Δ_t = C_t(1) − C_t(0)` contracts to a
//! fixed point `Δ_∞` available in closed form from a quadratic in
//! `2^Δ`; [`bumco_steady_state`] solves it, cross-validates against
//! forward iteration of the recursion, and reports the limiting policy,
//! output kernel, invariant output distribution, and ergodic capacity.

use super::{ClosedFormSolution, SteadyState};
use crate::dp::ValueFunction;
use crate::kernels::{
    h2, ChannelKernel, FiniteAlphabet, InitialCondition, InputPolicy, OutputKernel,
};
use crate::{Error, Result};

/// Parameters of one BUMCO stage: `P(Y = 0 | x, y_prev)` for the four
/// `(x, y_prev)` pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumcoStage {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl BumcoStage {
    /// Validates the four probabilities.
    ///
    /// # Errors
    ///
    /// [`Error::OutOfRange`] for entries outside `[0, 1]`;
    /// [`Error::Domain`] when `α = γ` or `β = δ` (the two inputs would be
    /// indistinguishable after one of the previous outputs, and the
    /// closed-form slopes `μ_i` would divide by zero).
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
        if alpha == gamma {
            return Err(Error::Domain {
                value: alpha,
                domain: "alpha != gamma (inputs must differ after output 0)",
            });
        }
        if beta == delta {
            return Err(Error::Domain {
                value: beta,
                domain: "beta != delta (inputs must differ after output 1)",
            });
        }
        Ok(BumcoStage {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    /// The `[w][x][y]` kernel block of this stage.
    pub fn kernel_stage(&self) -> Vec<Vec<Vec<f64>>> {
        vec![
            vec![
                vec![self.alpha, 1.0 - self.alpha],
                vec![self.gamma, 1.0 - self.gamma],
            ],
            vec![
                vec![self.beta, 1.0 - self.beta],
                vec![self.delta, 1.0 - self.delta],
            ],
        ]
    }

    /// The time-invariant channel repeating this stage over horizon `n`.
    pub fn channel(&self, n: usize) -> ChannelKernel {
        ChannelKernel::time_invariant(
            FiniteAlphabet::binary(),
            FiniteAlphabet::binary(),
            1,
            self.kernel_stage(),
            n,
        )
        .expect("validated stage parameters form a stochastic kernel")
    }
}

/// A (possibly time-varying) BUMCO over a finite horizon: one stage of
/// parameters per channel use.
#[derive(Debug, Clone)]
pub struct BumcoParams {
    stages: Vec<BumcoStage>,
}

impl BumcoParams {
    /// Wraps per-stage parameters; needs at least one stage.
    ///
    /// # Errors
    ///
    /// [`Error::Shape`] when `stages` is empty.
    pub fn new(stages: Vec<BumcoStage>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::Shape("need at least one stage".into()));
        }
        Ok(BumcoParams { stages })
    }

    /// The time-invariant family over horizon `n` (that is, `n + 1`
    /// channel uses).
    ///
    /// # Errors
    ///
    /// As [`BumcoStage::new`].
    pub fn constant(alpha: f64, beta: f64, gamma: f64, delta: f64, n: usize) -> Result<Self> {
        let stage = BumcoStage::new(alpha, beta, gamma, delta)?;
        Ok(BumcoParams {
            stages: vec![stage; n + 1],
        })
    }

    /// Horizon `n` (stages minus one).
    pub fn horizon_n(&self) -> usize {
        self.stages.len() - 1
    }

    /// The per-stage parameters.
    pub fn stages(&self) -> &[BumcoStage] {
        &self.stages
    }

    /// The channel kernel of this family.
    pub fn channel(&self) -> ChannelKernel {
        ChannelKernel::new(
            FiniteAlphabet::binary(),
            FiniteAlphabet::binary(),
            1,
            self.stages.iter().map(BumcoStage::kernel_stage).collect(),
        )
        .expect("validated stage parameters form a stochastic kernel")
    }
}

/// The interior stationary point of one stage problem.
struct StageQuantities {
    pi: [[f64; 2]; 2],
    nu: [f64; 2],
    e0: f64,
    e1: f64,
    mu0: f64,
    mu1: f64,
}

/// Cost-adjusted entropy slopes `μ_0^s, μ_1^s`.
fn slopes(stage: &BumcoStage, s: f64) -> (f64, f64) {
    let mu0 = (h2(stage.gamma) - h2(stage.alpha) - s) / (stage.gamma - stage.alpha);
    let mu1 = (h2(stage.beta) - h2(stage.delta) - s) / (stage.beta - stage.delta);
    (mu0, mu1)
}

/// Evaluates the closed-form stage maximizer given the next stage's
/// value difference, rejecting out-of-range probabilities.
fn stage_quantities(
    stage: &BumcoStage,
    s: f64,
    next_delta: f64,
    t: usize,
) -> Result<StageQuantities> {
    let (a, b, g, d) = (stage.alpha, stage.beta, stage.gamma, stage.delta);
    let (mu0, mu1) = slopes(stage, s);
    let e0 = (mu0 + next_delta).exp2();
    let e1 = (mu1 + next_delta).exp2();
    let pi00 = (1.0 - g * (1.0 + e0)) / ((a - g) * (1.0 + e0));
    let pi10 = (a * (1.0 + e0) - 1.0) / ((a - g) * (1.0 + e0));
    let pi01 = (1.0 - d * (1.0 + e1)) / ((b - d) * (1.0 + e1));
    let pi11 = (b * (1.0 + e1) - 1.0) / ((b - d) * (1.0 + e1));
    for (quantity, value) in [
        ("pi(0|0)", pi00),
        ("pi(1|0)", pi10),
        ("pi(0|1)", pi01),
        ("pi(1|1)", pi11),
    ] {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::Regime { t, quantity, value });
        }
    }
    Ok(StageQuantities {
        pi: [[pi00, pi10], [pi01, pi11]],
        nu: [1.0 / (1.0 + e0), 1.0 / (1.0 + e1)],
        e0,
        e1,
        mu0,
        mu1,
    })
}

/// Solves the finite-horizon BUMCO problem exactly.
///
/// `mu` weights the two initial words (the value of `Y_{-1}`).
///
/// # Errors
///
/// [`Error::Shape`] when `mu` does not cover exactly two words;
/// [`Error::Regime`] when the interior closed form fails at some stage.
pub fn bumco_solve(params: &BumcoParams, mu: &InitialCondition) -> Result<ClosedFormSolution> {
    solve_with_multiplier(params, 0.0, mu)
}

/// Solves the finite-horizon BUMCO problem under the matched input cost
/// `γ(x, y_prev) = 1{x = y_prev}` with Lagrange multiplier `s`, so the
/// value function is the Lagrangian (directed information minus `s`
/// times total cost).
///
/// # Errors
///
/// As [`bumco_solve`], plus [`Error::OutOfRange`] for a negative or
/// non-finite `s`.
pub fn bumco_cost_solve(
    params: &BumcoParams,
    s: f64,
    mu: &InitialCondition,
) -> Result<ClosedFormSolution> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::OutOfRange {
            path: "s".into(),
            value: s,
        });
    }
    solve_with_multiplier(params, s, mu)
}

fn solve_with_multiplier(
    params: &BumcoParams,
    s: f64,
    mu: &InitialCondition,
) -> Result<ClosedFormSolution> {
    if mu.words() != 2 {
        return Err(Error::Shape(format!(
            "initial condition covers {} words, BUMCO has 2",
            mu.words()
        )));
    }
    let stages = params.stages().len();
    let mut value = vec![vec![0.0f64; 2]; stages + 1];
    let mut delta = vec![vec![0.0f64; 1]; stages + 1];
    let mut pi_tensor = vec![Vec::new(); stages];
    let mut nu_tensor = vec![Vec::new(); stages];
    for t in (0..stages).rev() {
        let stage = &params.stages()[t];
        let q = stage_quantities(stage, s, delta[t + 1][0], t)?;
        let next_c0 = value[t + 1][0];
        let c0 = q.mu0 * (stage.alpha - 1.0) + next_c0 + (1.0 + q.e0).log2() - h2(stage.alpha)
            - s;
        let c1 = q.mu1 * (stage.beta - 1.0) + next_c0 + (1.0 + q.e1).log2() - h2(stage.beta);
        value[t] = vec![c0, c1];
        delta[t] = vec![c1 - c0];
        pi_tensor[t] = vec![q.pi[0].to_vec(), q.pi[1].to_vec()];
        nu_tensor[t] = vec![
            vec![q.nu[0], 1.0 - q.nu[0]],
            vec![q.nu[1], 1.0 - q.nu[1]],
        ];
    }
    let policy = InputPolicy::new(2, 2, 1, pi_tensor)?;
    let output = OutputKernel::new(2, 1, nu_tensor)?;
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

/// The closed-form fixed point `Δ_∞` of the value-difference recursion.
///
/// Substituting `z = 2^Δ` into the fixed-point equation turns it into a
/// quadratic with a single positive root:
///
/// ```text
/// Δ_∞ = log2( (2^{ℓ+μ_1} − 1) + sqrt( (1 − 2^{ℓ+μ_1})² + 2^{ℓ+μ_0+2} ) ) − μ_0 − 1
/// ℓ   = μ_1(β−1) − μ_0(α−1) + H(α) − H(β) + s
/// ```
fn delta_fixed_point(stage: &BumcoStage, s: f64) -> f64 {
    let (mu0, mu1) = slopes(stage, s);
    let ell = mu1 * (stage.beta - 1.0) - mu0 * (stage.alpha - 1.0) + h2(stage.alpha)
        - h2(stage.beta)
        + s;
    let linear = (ell + mu1).exp2();
    let radicand = (1.0 - linear).powi(2) + (ell + mu0 + 2.0).exp2();
    (linear - 1.0 + radicand.sqrt()).log2() - mu0 - 1.0
}

/// One application of the backward value-difference map
/// `Δ' ↦ C(1) − C(0)`.
fn delta_step(stage: &BumcoStage, s: f64, next_delta: f64) -> f64 {
    let (mu0, mu1) = slopes(stage, s);
    let e0 = (mu0 + next_delta).exp2();
    let e1 = (mu1 + next_delta).exp2();
    (mu1 * (stage.beta - 1.0) + (1.0 + e1).log2() - h2(stage.beta))
        - (mu0 * (stage.alpha - 1.0) + (1.0 + e0).log2() - h2(stage.alpha) - s)
}

/// The infinite-horizon limit of the BUMCO recursion: limiting policy
/// and output kernel, invariant distribution of `Y_{t-1}`, and ergodic
/// capacity in bits per channel use.
///
/// # Errors
///
/// [`Error::Regime`] when the limiting closed form leaves `[0, 1]`;
/// [`Error::Inconsistent`] if forward iteration of the recursion
/// disagrees with the closed-form fixed point beyond `1e-9`, or the
/// claimed invariant distribution fails its fixed-point identity.
pub fn bumco_steady_state(stage: &BumcoStage) -> Result<SteadyState> {
    steady_state_with_multiplier(stage, 0.0, false)
}

/// The infinite-horizon limit under the matched input cost with
/// multiplier `s`: as [`bumco_steady_state`], but with the
/// cost-adjusted recursion, and reporting the achieved average cost
/// `κ(s)` so that `capacity` is the information value `C(κ)`.
///
/// # Errors
///
/// As [`bumco_steady_state`], plus [`Error::OutOfRange`] for a negative
/// or non-finite `s`.
pub fn bumco_cost_steady_state(stage: &BumcoStage, s: f64) -> Result<SteadyState> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::OutOfRange {
            path: "s".into(),
            value: s,
        });
    }
    steady_state_with_multiplier(stage, s, true)
}

fn steady_state_with_multiplier(
    stage: &BumcoStage,
    s: f64,
    with_cost: bool,
) -> Result<SteadyState> {
    let delta_inf = delta_fixed_point(stage, s);
    // Cross-validate the quadratic against plain iteration of the
    // recursion it solves.
    let mut iterate = 0.0f64;
    let mut settled = false;
    for _ in 0..100_000 {
        let next = delta_step(stage, s, iterate);
        let done = (next - iterate).abs() < 1e-12;
        iterate = next;
        if done {
            settled = true;
            break;
        }
    }
    if !settled {
        return Err(Error::Inconsistent(format!(
            "value-difference iteration did not settle (last iterate {iterate})"
        )));
    }
    if (iterate - delta_inf).abs() > 1e-9 {
        return Err(Error::Inconsistent(format!(
            "fixed point mismatch: closed form {delta_inf}, iteration {iterate}"
        )));
    }

    let q = stage_quantities(stage, s, delta_inf, 0)?;
    let (nu00, nu01) = (q.nu[0], q.nu[1]);
    // Invariant distribution of the two-state output chain with
    // transition columns ν_∞(·|0) and ν_∞(·|1).
    let total = nu01 + (1.0 - nu00);
    let stationary = vec![nu01 / total, (1.0 - nu00) / total];
    let residual = nu00 * stationary[0] + nu01 * stationary[1] - stationary[0];
    if residual.abs() > 1e-12 {
        return Err(Error::Inconsistent(format!(
            "invariant distribution violates its fixed-point identity by {residual}"
        )));
    }

    let information = |w: usize| -> f64 {
        let (q0, q1) = match w {
            0 => (stage.alpha, stage.gamma),
            _ => (stage.beta, stage.delta),
        };
        h2(q.nu[w]) - q.pi[w][0] * h2(q0) - q.pi[w][1] * h2(q1)
    };
    let capacity = stationary[0] * information(0) + stationary[1] * information(1);
    let kappa = with_cost
        .then(|| stationary[0] * q.pi[0][0] + stationary[1] * q.pi[1][1]);

    Ok(SteadyState {
        delta_inf: vec![delta_inf],
        pi_inf: vec![q.pi[0].to_vec(), q.pi[1].to_vec()],
        nu_inf: vec![
            vec![nu00, 1.0 - nu00],
            vec![nu01, 1.0 - nu01],
        ],
        stationary,
        capacity,
        kappa,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{directed_information, expected_cost, CostFunction};

    fn params(n: usize) -> BumcoParams {
        BumcoParams::constant(0.9, 0.1, 0.2, 0.4, n).unwrap()
    }

    #[test]
    fn steady_state_matches_the_reference_values() {
        let st = bumco_steady_state(&BumcoStage::new(0.9, 0.1, 0.2, 0.4).unwrap()).unwrap();
        assert!((st.delta_inf[0] - -0.457710361786757941858).abs() < 1e-12);
        assert!((st.stationary[0] - 0.454165520208713563395).abs() < 1e-12);
        assert!((st.pi_inf[0][0] - 0.626051741513670843415).abs() < 1e-12);
        assert!((st.pi_inf[1][0] - 0.329972779621726102806).abs() < 1e-12);
        assert!((st.nu_inf[0][0] - 0.638236219059569590390).abs() < 1e-12);
        assert!((st.nu_inf[1][0] - 0.301008166113482169158).abs() < 1e-12);
        assert!((st.capacity - 0.214975233797336864537).abs() < 1e-12);
        assert!(st.kappa.is_none());
    }

    #[test]
    fn cost_steady_state_matches_the_reference_values() {
        let stage = BumcoStage::new(0.9, 0.1, 0.2, 0.4).unwrap();
        let st = bumco_cost_steady_state(&stage, 0.05).unwrap();
        assert!((st.delta_inf[0] - -0.458655620903212388324).abs() < 1e-12);
        assert!((st.kappa.unwrap() - 0.599230587427003167941).abs() < 1e-12);
        assert!((st.capacity - 0.213691508887402052621).abs() < 1e-12);
        assert!((st.pi_inf[0][0] - 0.609830791451762913177).abs() < 1e-12);
        assert!((st.pi_inf[1][0] - 0.408650417390138012509).abs() < 1e-12);
    }

    #[test]
    fn unconstrained_cost_multiplier_reduces_to_the_plain_solve() {
        let mu = InitialCondition::uniform(2);
        let plain = bumco_solve(&params(7), &mu).unwrap();
        let zero = bumco_cost_solve(&params(7), 0.0, &mu).unwrap();
        assert_eq!(plain.ftfi_value, zero.ftfi_value);
        assert_eq!(plain.value.value(0, 0), zero.value.value(0, 0));
        assert_eq!(plain.policy.tensor(), zero.policy.tensor());
    }

    #[test]
    fn terminal_stage_matches_the_reference_values() {
        let mu = InitialCondition::point_mass(0, 2).unwrap();
        let sol = bumco_solve(&params(0), &mu).unwrap();
        assert!((sol.value.value(0, 0) - 0.397754346568529364).abs() < 1e-12);
        assert!((sol.value.value(0, 1) - 0.0918056111606906557).abs() < 1e-12);
        assert!((sol.policy.prob(0, 0, 0) - 0.517555461135860554).abs() < 1e-12);
        assert!((sol.output.prob(0, 0, 0) - 0.562288822795102388).abs() < 1e-12);
        assert!((sol.delta[0][0] - -0.3059487354078387083).abs() < 1e-12);
        assert!((sol.ftfi_value - 0.397754346568529364).abs() < 1e-12);
    }

    #[test]
    fn two_stage_values_match_the_reference_recursion() {
        let mu = InitialCondition::uniform(2);
        let sol = bumco_solve(&params(1), &mu).unwrap();
        assert!((sol.value.value(0, 0) - 0.6694916372932076).abs() < 1e-12);
        assert!((sol.value.value(0, 1) - 0.262754993003416358).abs() < 1e-12);
    }

    #[test]
    fn long_horizon_total_matches_the_reference_value() {
        let mu = InitialCondition::point_mass(1, 2).unwrap();
        let sol = bumco_solve(&params(1000), &mu).unwrap();
        assert!(
            (sol.ftfi_value - 215.000086034793065285).abs() < 1e-9,
            "{}",
            sol.ftfi_value
        );
    }

    #[test]
    fn cost_solution_has_the_reference_information_and_cost() {
        let n = 1000;
        let p = params(n);
        let mu = InitialCondition::point_mass(1, 2).unwrap();
        let sol = bumco_cost_solve(&p, 0.05, &mu).unwrap();
        let q = p.channel();
        let gamma = CostFunction::matched_input_binary(n);
        let di = directed_information(&q, &sol.policy, &mu).unwrap();
        let cost = expected_cost(&q, &sol.policy, &gamma, &mu).unwrap();
        assert!((di - 213.714007618222938124).abs() < 1e-6, "{di}");
        assert!((cost - 0.598968974673594416472).abs() < 1e-9, "{cost}");
        // The Lagrangian value function accounts for both terms.
        let lagrangian = di - 0.05 * (n + 1) as f64 * cost;
        assert!((sol.ftfi_value - lagrangian).abs() < 1e-6);
    }

    #[test]
    fn an_aggressive_multiplier_escapes_the_interior_regime() {
        let mu = InitialCondition::uniform(2);
        match bumco_cost_solve(&params(0), 5.0, &mu) {
            Err(Error::Regime { quantity, value, .. }) => {
                assert!(quantity.starts_with("pi("));
                assert!(!(0.0..=1.0).contains(&value));
            }
            other => panic!("expected regime error, got {other:?}"),
        }
        assert!(matches!(
            bumco_cost_steady_state(&BumcoStage::new(0.9, 0.1, 0.2, 0.4).unwrap(), 5.0),
            Err(Error::Regime { .. })
        ));
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(matches!(
            BumcoStage::new(1.2, 0.1, 0.2, 0.4),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            BumcoStage::new(0.5, 0.1, 0.5, 0.4),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            BumcoStage::new(0.9, 0.3, 0.2, 0.3),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(BumcoParams::new(vec![]), Err(Error::Shape(_))));
        let mu = InitialCondition::uniform(2);
        assert!(matches!(
            bumco_cost_solve(&params(1), -0.1, &mu),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn channel_kernel_lays_out_the_parameters_correctly() {
        let q = BumcoStage::new(0.9, 0.1, 0.2, 0.4).unwrap().channel(2);
        assert_eq!(q.prob(0, 0, 0, 0), 0.9); // alpha
        assert_eq!(q.prob(1, 1, 0, 0), 0.1); // beta
        assert_eq!(q.prob(2, 0, 1, 0), 0.2); // gamma
        assert_eq!(q.prob(0, 1, 1, 0), 0.4); // delta
    }
}
