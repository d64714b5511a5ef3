//! Probability objects for channels with memory, and exact policy evaluation.
//!
//! # The objects
//!
//! A channel of the class treated here emits `Y_t` according to a kernel
//! `q_t(y_t | y_{t-M}^{t-1}, x_t)` that sees the current input and the last
//! `M` outputs. An input policy `π_t(x_t | y_{t-J}^{t-1})` sees the last
//! `J` outputs, where `J = max{M, N}` once a transmission cost
//! `γ_t(x_t, y_{t-N}^{t-1})` with memory `N` is attached (and `J = M`
//! otherwise). Together with an initial distribution `μ` over length-`J`
//! output words, these induce the output kernel
//!
//! ```text
//!   ν_t(y | w) = Σ_x q_t(y | suffix_M(w), x) · π_t(x | w)
//! ```
//!
//! and a Markov chain on memory words: after output `y`, word `w` becomes
//! `shift(w, y)` (drop the oldest symbol, append `y`).
//!
//! # Conventions
//!
//! * Memory words store symbols **oldest first / most recent last**, and the
//!   word index enumerates words lexicographically in that ordering — so the
//!   most recent output is the least-significant digit of the index, the
//!   length-`M` suffix of a length-`J` word is `w mod |Y|^M`, and the shift
//!   is `(w mod |Y|^{J-1}) · |Y| + y`.
//! * All information quantities are in bits; `0·log 0 = 0`.
//! * Every probability column must sum to 1 within `1e-12` at construction.
//!   Constructors reject, they never renormalize.
//!
//! # Evaluation
//!
//! [`directed_information`] returns the *total* directed information over
//! the horizon (bits); divide by `n + 1` for the per-channel-use rate.
//! [`expected_cost`] returns the per-unit-time average cost. Both propagate
//! the memory-word distribution forward instead of materializing the joint
//! trajectory law, which the `M`-order Markov structure of the output
//! process makes exact; the [`crate::oracle`] module certifies this against
//! literal trajectory enumeration.

mod alphabet;
mod functionals;
pub mod schema;
mod tensors;

pub use alphabet::{FiniteAlphabet, MemoryWord, WordSpace};
pub(crate) use functionals::h2;
pub use functionals::{
    binary_entropy, directed_information, directed_information_with_output, expected_cost,
    induce_output_kernel,
};
pub use tensors::{ChannelKernel, CostFunction, InitialCondition, InputPolicy, OutputKernel};

/// Tolerance within which every probability column must sum to 1.
pub const NORMALIZATION_TOL: f64 = 1e-12;
