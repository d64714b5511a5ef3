//! Feedback capacity of finite-alphabet channels with memory.
//!
//! This crate computes the finite-horizon feedback capacity
//!
//! ```text
//!   C_0^n = sup_π Σ_{t=0}^n E^π[ log2( q_t(Y_t | Y_{t-M}^{t-1}, X_t) / ν_t^π(Y_t | Y_{t-J}^{t-1}) ) ]
//! ```
//!
//! — the maximum of directed information `I(X^n → Y^n)` over channel input
//! policies — for channels whose kernel depends on the current input and the
//! last `M` output symbols, optionally subject to an average transmission-cost
//! constraint with memory `N` (the policy then conditions on the last
//! `J = max{M, N}` outputs).
//!
//! The crate is organized around four views of the same optimization problem:
//!
//! * [`kernels`] — the probability objects themselves (alphabets, memory
//!   words, channel kernels, input policies, induced output kernels, cost
//!   functions) and exact evaluation of directed information and expected
//!   cost for a *given* policy, by forward propagation of the memory-word
//!   distribution.
//! * [`dp`] — the backward dynamic program that *finds* the optimal policy:
//!   a per-stage alternating maximization (Blahut–Arimoto style) over a
//!   reverse kernel and the policy column, a verifier for the per-stage
//!   necessary-and-sufficient optimality conditions, and a bisection on the
//!   Lagrange multiplier for cost-constrained capacity.
//! * [`closedform`] — exact recursive solutions for three worked binary
//!   channel families (BUMCO, BEUMCO, BSTMCO), their steady states, invariant
//!   output distributions and ergodic capacities, plus degenerate
//!   constructors (POST, BSSC, BSC, BEC).
//! * [`oracle`] — deliberately slow, independent reference implementations
//!   (trajectory enumeration, grid search, power iteration) used by the test
//!   suite to certify everything else.
//!
//! All information quantities are in bits (base-2 logarithms) with the
//! convention `0·log 0 = 0`. All distribution columns are validated to sum
//! to 1 within `1e-12` at construction; nothing is ever renormalized
//! silently.

pub mod closedform;
pub mod dp;
mod error;
pub mod kernels;
pub mod oracle;

pub use error::{Error, Result};
