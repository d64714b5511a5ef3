//! Certification oracles: slow, simple computations that independently
//! confirm what the fast paths produce.
//!
//! Nothing here shares logic with the dynamic-programming solver. The
//! exhaustive directed-information evaluator enumerates every joint
//! input/output trajectory and builds output-prefix probability tables by
//! explicit marginalization; the brute-force optimizer climbs the policy
//! simplex on a refinable grid with the certified evaluator as its only
//! objective; the stationary-distribution routine is plain power
//! iteration. All three are deliberately exponential or iterative and
//! refuse (with [`crate::Error::Budget`]) problems beyond their budgets
//! rather than approximating silently.

mod exhaustive;
mod grid;
mod stationary;

pub use exhaustive::exhaustive_directed_info;
pub use grid::{brute_force_ftfi, GridSpec};
pub use stationary::stationary_distribution;
