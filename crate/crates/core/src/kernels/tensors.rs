//! The probability tensors: channel kernels, input policies, induced output
//! kernels, cost functions, and initial word distributions.
//!
//! Every constructor validates shapes and column-stochasticity (sum within
//! [`NORMALIZATION_TOL`](crate::kernels::NORMALIZATION_TOL) of 1) and
//! rejects on failure; nothing is renormalized silently. All types are
//! immutable after construction and safe to share across threads.

use super::alphabet::{FiniteAlphabet, WordSpace};
use super::NORMALIZATION_TOL;
use crate::{Error, Result};

fn check_probability_column(path: impl Fn() -> String, column: &[f64]) -> Result<()> {
    let mut sum = 0.0;
    for (i, &v) in column.iter().enumerate() {
        if !v.is_finite() || !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange { path: format!("{}[{i}]", path()), value: v });
        }
        sum += v;
    }
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotStochastic { path: path(), sum });
    }
    Ok(())
}

/// Time-varying channel kernel `q_t(y | w, x)` with output memory `M`:
/// for each stage `t ∈ {0, …, n}`, memory word `w` of length `M`, and input
/// `x`, a distribution over outputs. `M = 0` is a memoryless channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelKernel {
    input_alphabet: FiniteAlphabet,
    output_alphabet: FiniteAlphabet,
    memory_order: usize,
    /// `q[t][w][x][y]`.
    q: Vec<Vec<Vec<Vec<f64>>>>,
}

impl ChannelKernel {
    /// Builds and validates a kernel from its `[t][w][x][y]` tensor.
    ///
    /// # Errors
    ///
    /// [`Error::Shape`] on a dimension mismatch, [`Error::OutOfRange`] /
    /// [`Error::NotStochastic`] on invalid probabilities.
    pub fn new(
        input_alphabet: FiniteAlphabet,
        output_alphabet: FiniteAlphabet,
        memory_order: usize,
        q: Vec<Vec<Vec<Vec<f64>>>>,
    ) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::Shape("channel kernel needs at least one stage".into()));
        }
        let words = WordSpace::new(memory_order, output_alphabet.size()).count();
        for (t, stage) in q.iter().enumerate() {
            if stage.len() != words {
                return Err(Error::Shape(format!(
                    "q[{t}] has {} words, expected {words}",
                    stage.len()
                )));
            }
            for (w, per_word) in stage.iter().enumerate() {
                if per_word.len() != input_alphabet.size() {
                    return Err(Error::Shape(format!(
                        "q[{t}][{w}] has {} inputs, expected {}",
                        per_word.len(),
                        input_alphabet.size()
                    )));
                }
                for (x, column) in per_word.iter().enumerate() {
                    if column.len() != output_alphabet.size() {
                        return Err(Error::Shape(format!(
                            "q[{t}][{w}][{x}] has {} outputs, expected {}",
                            column.len(),
                            output_alphabet.size()
                        )));
                    }
                    check_probability_column(|| format!("q[{t}][{w}][{x}]"), column)?;
                }
            }
        }
        Ok(ChannelKernel { input_alphabet, output_alphabet, memory_order, q })
    }

    /// Builds a time-invariant kernel by repeating one stage tensor
    /// `q[w][x][y]` for stages `0..=n`.
    pub fn time_invariant(
        input_alphabet: FiniteAlphabet,
        output_alphabet: FiniteAlphabet,
        memory_order: usize,
        stage: Vec<Vec<Vec<f64>>>,
        n: usize,
    ) -> Result<Self> {
        ChannelKernel::new(input_alphabet, output_alphabet, memory_order, vec![stage; n + 1])
    }

    /// Horizon `n` (stages run `t = 0..=n`).
    pub fn horizon_n(&self) -> usize {
        self.q.len() - 1
    }

    /// Number of stages, `n + 1`.
    pub fn stages(&self) -> usize {
        self.q.len()
    }

    /// Output memory order `M`.
    pub fn memory_order(&self) -> usize {
        self.memory_order
    }

    pub fn input_alphabet(&self) -> &FiniteAlphabet {
        &self.input_alphabet
    }

    pub fn output_alphabet(&self) -> &FiniteAlphabet {
        &self.output_alphabet
    }

    /// The word space the kernel conditions on (length `M`).
    pub fn word_space(&self) -> WordSpace {
        WordSpace::new(self.memory_order, self.output_alphabet.size())
    }

    /// Stage tensor `q_t[w][x][y]`.
    pub fn stage(&self, t: usize) -> &[Vec<Vec<f64>>] {
        &self.q[t]
    }

    /// Single entry `q_t(y | w, x)`.
    pub fn prob(&self, t: usize, w: usize, x: usize, y: usize) -> f64 {
        self.q[t][w][x][y]
    }

    /// The full tensor, `[t][w][x][y]`.
    pub fn tensor(&self) -> &Vec<Vec<Vec<Vec<f64>>>> {
        &self.q
    }
}

/// Time-varying input policy `π_t(x | w)` with memory `J`: for each stage
/// and length-`J` output word, a distribution over inputs. `J = max{M, N}`
/// when a cost with memory `N` is attached, else `J = M`.
#[derive(Debug, Clone, PartialEq)]
pub struct InputPolicy {
    input_size: usize,
    output_size: usize,
    memory_order: usize,
    /// `pi[t][w][x]`.
    pi: Vec<Vec<Vec<f64>>>,
}

impl InputPolicy {
    /// Builds and validates a policy from its `[t][w][x]` tensor.
    ///
    /// # Errors
    ///
    /// As for [`ChannelKernel::new`].
    pub fn new(
        input_size: usize,
        output_size: usize,
        memory_order: usize,
        pi: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        if pi.is_empty() {
            return Err(Error::Shape("input policy needs at least one stage".into()));
        }
        let words = WordSpace::new(memory_order, output_size).count();
        for (t, stage) in pi.iter().enumerate() {
            if stage.len() != words {
                return Err(Error::Shape(format!(
                    "pi[{t}] has {} words, expected {words}",
                    stage.len()
                )));
            }
            for (w, column) in stage.iter().enumerate() {
                if column.len() != input_size {
                    return Err(Error::Shape(format!(
                        "pi[{t}][{w}] has {} inputs, expected {input_size}",
                        column.len()
                    )));
                }
                check_probability_column(|| format!("pi[{t}][{w}]"), column)?;
            }
        }
        Ok(InputPolicy { input_size, output_size, memory_order, pi })
    }

    /// The uniform policy over `input_size` symbols for stages `0..=n`.
    pub fn uniform(input_size: usize, output_size: usize, memory_order: usize, n: usize) -> Self {
        let words = WordSpace::new(memory_order, output_size).count();
        let column = vec![1.0 / input_size as f64; input_size];
        InputPolicy {
            input_size,
            output_size,
            memory_order,
            pi: vec![vec![column; words]; n + 1],
        }
    }

    pub fn horizon_n(&self) -> usize {
        self.pi.len() - 1
    }

    pub fn stages(&self) -> usize {
        self.pi.len()
    }

    /// Policy memory order `J`.
    pub fn memory_order(&self) -> usize {
        self.memory_order
    }

    pub fn input_size(&self) -> usize {
        self.input_size
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    /// The word space the policy conditions on (length `J`).
    pub fn word_space(&self) -> WordSpace {
        WordSpace::new(self.memory_order, self.output_size)
    }

    /// Stage tensor `π_t[w][x]`.
    pub fn stage(&self, t: usize) -> &[Vec<f64>] {
        &self.pi[t]
    }

    /// Single entry `π_t(x | w)`.
    pub fn prob(&self, t: usize, w: usize, x: usize) -> f64 {
        self.pi[t][w][x]
    }

    /// The full tensor, `[t][w][x]`.
    pub fn tensor(&self) -> &Vec<Vec<Vec<f64>>> {
        &self.pi
    }
}

/// Induced output kernel `ν_t(y | w)` over length-`J` words.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputKernel {
    output_size: usize,
    memory_order: usize,
    /// `nu[t][w][y]`.
    nu: Vec<Vec<Vec<f64>>>,
}

impl OutputKernel {
    /// Builds and validates an output kernel from its `[t][w][y]` tensor.
    ///
    /// # Errors
    ///
    /// As for [`ChannelKernel::new`].
    pub fn new(output_size: usize, memory_order: usize, nu: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        if nu.is_empty() {
            return Err(Error::Shape("output kernel needs at least one stage".into()));
        }
        let words = WordSpace::new(memory_order, output_size).count();
        for (t, stage) in nu.iter().enumerate() {
            if stage.len() != words {
                return Err(Error::Shape(format!(
                    "nu[{t}] has {} words, expected {words}",
                    stage.len()
                )));
            }
            for (w, column) in stage.iter().enumerate() {
                if column.len() != output_size {
                    return Err(Error::Shape(format!(
                        "nu[{t}][{w}] has {} outputs, expected {output_size}",
                        column.len()
                    )));
                }
                check_probability_column(|| format!("nu[{t}][{w}]"), column)?;
            }
        }
        Ok(OutputKernel { output_size, memory_order, nu })
    }

    pub fn horizon_n(&self) -> usize {
        self.nu.len() - 1
    }

    pub fn memory_order(&self) -> usize {
        self.memory_order
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    /// Stage tensor `ν_t[w][y]`.
    pub fn stage(&self, t: usize) -> &[Vec<f64>] {
        &self.nu[t]
    }

    /// Single entry `ν_t(y | w)`.
    pub fn prob(&self, t: usize, w: usize, y: usize) -> f64 {
        self.nu[t][w][y]
    }

    /// The full tensor, `[t][w][y]`.
    pub fn tensor(&self) -> &Vec<Vec<Vec<f64>>> {
        &self.nu
    }
}

/// Time-varying transmission cost `γ_t(x, w)` with memory `N`: a finite
/// nonnegative cost per (input, length-`N` output word). `N = 0` is a cost
/// on the input alone.
#[derive(Debug, Clone, PartialEq)]
pub struct CostFunction {
    input_size: usize,
    output_size: usize,
    memory_order: usize,
    /// `gamma[t][w][x]`.
    gamma: Vec<Vec<Vec<f64>>>,
}

impl CostFunction {
    /// Builds and validates a cost function from its `[t][w][x]` tensor.
    ///
    /// # Errors
    ///
    /// [`Error::Shape`] on dimension mismatch, [`Error::InvalidCost`] on a
    /// negative or non-finite entry.
    pub fn new(
        input_size: usize,
        output_size: usize,
        memory_order: usize,
        gamma: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        if gamma.is_empty() {
            return Err(Error::Shape("cost function needs at least one stage".into()));
        }
        let words = WordSpace::new(memory_order, output_size).count();
        for (t, stage) in gamma.iter().enumerate() {
            if stage.len() != words {
                return Err(Error::Shape(format!(
                    "gamma[{t}] has {} words, expected {words}",
                    stage.len()
                )));
            }
            for (w, column) in stage.iter().enumerate() {
                if column.len() != input_size {
                    return Err(Error::Shape(format!(
                        "gamma[{t}][{w}] has {} inputs, expected {input_size}",
                        column.len()
                    )));
                }
                for (x, &v) in column.iter().enumerate() {
                    if !v.is_finite() || v < 0.0 {
                        return Err(Error::InvalidCost {
                            path: format!("gamma[{t}][{w}][{x}]"),
                            value: v,
                        });
                    }
                }
            }
        }
        Ok(CostFunction { input_size, output_size, memory_order, gamma })
    }

    /// The matched-input cost `γ(x, y_prev) = 1{x = y_prev}` on a binary
    /// channel with unit memory, repeated for stages `0..=n`: transmitting
    /// the symbol that was just received costs 1, the other symbol is free.
    pub fn matched_input_binary(n: usize) -> Self {
        let stage = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        CostFunction {
            input_size: 2,
            output_size: 2,
            memory_order: 1,
            gamma: vec![stage; n + 1],
        }
    }

    pub fn horizon_n(&self) -> usize {
        self.gamma.len() - 1
    }

    /// Cost memory order `N`.
    pub fn memory_order(&self) -> usize {
        self.memory_order
    }

    pub fn input_size(&self) -> usize {
        self.input_size
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    /// Stage tensor `γ_t[w][x]`.
    pub fn stage(&self, t: usize) -> &[Vec<f64>] {
        &self.gamma[t]
    }

    /// Single entry `γ_t(x, w)`.
    pub fn value(&self, t: usize, w: usize, x: usize) -> f64 {
        self.gamma[t][w][x]
    }

    /// The full tensor, `[t][w][x]`.
    pub fn tensor(&self) -> &Vec<Vec<Vec<f64>>> {
        &self.gamma
    }
}

/// Distribution `μ` over length-`J` memory words at time −1: the initial
/// condition of the forward propagation and the weights of the DP value at
/// stage 0.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialCondition {
    mu: Vec<f64>,
}

impl InitialCondition {
    /// Builds and validates an initial word distribution.
    ///
    /// # Errors
    ///
    /// [`Error::OutOfRange`] / [`Error::NotStochastic`] on invalid entries.
    pub fn new(mu: Vec<f64>) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::Shape("initial condition must cover at least one word".into()));
        }
        check_probability_column(|| "mu".into(), &mu)?;
        Ok(InitialCondition { mu })
    }

    /// Point mass on word `w` out of `words`.
    pub fn point_mass(w: usize, words: usize) -> Result<Self> {
        if w >= words {
            return Err(Error::Shape(format!("initial word {w} not in 0..{words}")));
        }
        let mut mu = vec![0.0; words];
        mu[w] = 1.0;
        Ok(InitialCondition { mu })
    }

    /// Uniform distribution over `words` words.
    pub fn uniform(words: usize) -> Self {
        InitialCondition { mu: vec![1.0 / words as f64; words] }
    }

    /// Number of words covered.
    pub fn words(&self) -> usize {
        self.mu.len()
    }

    /// Mass on word `w`.
    pub fn prob(&self, w: usize) -> f64 {
        self.mu[w]
    }

    /// The distribution as a slice.
    pub fn as_slice(&self) -> &[f64] {
        &self.mu
    }
}
