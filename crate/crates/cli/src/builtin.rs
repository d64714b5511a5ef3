//! Built-in channel shorthand.
//!
//! Every channel family with a closed-form treatment is addressable from
//! the command line as `family:param,param,…`:
//!
//! | shorthand          | family                                         |
//! |--------------------|------------------------------------------------|
//! | `bumco:α,β,γ,δ`    | binary unit-memory channel output              |
//! | `beumco:α,γ,β`     | binary erasure unit-memory channel output      |
//! | `bstmco:α,β,γ,δ`   | binary symmetric two-memory channel output     |
//! | `post:α,β`         | previous-output symmetric-transition channel   |
//! | `bssc:α,β`         | binary state-symmetric channel                 |
//! | `bsc:α`            | memoryless binary symmetric channel            |
//! | `bec:α`            | memoryless binary erasure channel              |
//!
//! The degenerate families (`post`, `bssc`, `bsc`) reduce to a `bumco`
//! stage and `bec` to a `beumco` stage, so each shorthand resolves to one
//! of three stage kinds. A stage knows how to unroll itself to any
//! horizon, solve its closed-form recursion, and report its steady state.

use anyhow::{bail, Context, Result};
use ftfi_core::closedform::{
    bec, beumco_solve, beumco_steady_state, bsc, bssc, bstmco_solve, bumco_cost_solve,
    bumco_cost_steady_state, bumco_solve, bumco_steady_state, post, BeumcoParams, BeumcoStage,
    BstmcoParams, BstmcoStage, BumcoParams, BumcoStage, ClosedFormSolution, SteadyState,
};
use ftfi_core::kernels::{ChannelKernel, CostFunction, InitialCondition};

/// A parsed built-in channel: one stage of whichever family the
/// shorthand named.
#[derive(Debug, Clone)]
pub enum Family {
    Bumco(BumcoStage),
    Beumco(BeumcoStage),
    Bstmco(BstmcoStage),
}

impl Family {
    /// Parses `family:param,param,…` shorthand.
    ///
    /// # Errors
    ///
    /// Fails on an unknown family name, the wrong number of parameters,
    /// an unparsable number, or a parameter outside the family's domain.
    pub fn parse(text: &str) -> Result<Self> {
        let (name, rest) = text
            .split_once(':')
            .with_context(|| format!("channel `{text}` is not of the form family:params"))?;
        let params: Vec<f64> = rest
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .with_context(|| format!("channel parameter `{p}` is not a number"))
            })
            .collect::<Result<_>>()?;
        let arity = |want: usize| -> Result<()> {
            if params.len() != want {
                bail!(
                    "channel family `{name}` takes {want} parameter(s), got {}",
                    params.len()
                );
            }
            Ok(())
        };
        let family = match name {
            "bumco" => {
                arity(4)?;
                Family::Bumco(BumcoStage::new(params[0], params[1], params[2], params[3])?)
            }
            "beumco" => {
                arity(3)?;
                Family::Beumco(BeumcoStage::new(params[0], params[1], params[2])?)
            }
            "bstmco" => {
                arity(4)?;
                Family::Bstmco(BstmcoStage::new(
                    params[0], params[1], params[2], params[3],
                )?)
            }
            "post" => {
                arity(2)?;
                Family::Bumco(post(params[0], params[1])?)
            }
            "bssc" => {
                arity(2)?;
                Family::Bumco(bssc(params[0], params[1])?)
            }
            "bsc" => {
                arity(1)?;
                Family::Bumco(bsc(params[0])?)
            }
            "bec" => {
                arity(1)?;
                Family::Beumco(bec(params[0])?)
            }
            other => bail!(
                "unknown channel family `{other}` \
                 (expected bumco, beumco, bstmco, post, bssc, bsc, or bec)"
            ),
        };
        Ok(family)
    }

    /// Number of policy memory words `|Y|^J` for this family.
    pub fn words(&self) -> usize {
        match self {
            Family::Bumco(_) => 2,
            Family::Beumco(_) => 3,
            Family::Bstmco(_) => 4,
        }
    }

    /// The channel kernel unrolled to horizon `n`.
    pub fn channel(&self, n: usize) -> ChannelKernel {
        match self {
            Family::Bumco(stage) => stage.channel(n),
            Family::Beumco(stage) => stage.channel(n),
            Family::Bstmco(stage) => stage.channel(n),
        }
    }

    /// The built-in per-stage cost for this family, when one exists: the
    /// matched-input cost `γ(x, w) = 1{x = w}` of the binary
    /// unit-memory family.
    pub fn default_cost(&self, n: usize) -> Option<CostFunction> {
        match self {
            Family::Bumco(_) => Some(CostFunction::matched_input_binary(n)),
            Family::Beumco(_) | Family::Bstmco(_) => None,
        }
    }

    /// Solves the family's closed-form backward recursion on horizon
    /// `n`, Lagrangian-attached when `s` is given.
    ///
    /// # Errors
    ///
    /// Regime errors when a closed-form entry leaves `[0, 1]`; an input
    /// error when `s` is given for a family without a cost-attached
    /// closed form.
    pub fn solve(
        &self,
        n: usize,
        mu: &InitialCondition,
        s: Option<f64>,
    ) -> Result<ClosedFormSolution> {
        let solution = match (self, s) {
            (Family::Bumco(stage), None) => {
                bumco_solve(&BumcoParams::new(vec![stage.clone(); n + 1])?, mu)?
            }
            (Family::Bumco(stage), Some(s)) => {
                bumco_cost_solve(&BumcoParams::new(vec![stage.clone(); n + 1])?, s, mu)?
            }
            (Family::Beumco(stage), None) => {
                beumco_solve(&BeumcoParams::new(vec![stage.clone(); n + 1])?, mu)?
            }
            (Family::Bstmco(stage), None) => {
                bstmco_solve(&BstmcoParams::new(vec![stage.clone(); n + 1])?, mu)?
            }
            (Family::Beumco(_) | Family::Bstmco(_), Some(_)) => bail!(
                "a cost-attached closed form exists only for the bumco family; \
                 run the `ftfi` command for a Lagrangian dynamic program instead"
            ),
        };
        Ok(solution)
    }

    /// The family's infinite-horizon steady state, cost-attached when
    /// `s` is given.
    ///
    /// # Errors
    ///
    /// Regime errors from the closed forms; an input error for families
    /// without a steady-state characterization of the requested kind.
    pub fn steady(&self, s: Option<f64>) -> Result<SteadyState> {
        let steady = match (self, s) {
            (Family::Bumco(stage), None) => bumco_steady_state(stage)?,
            (Family::Bumco(stage), Some(s)) => bumco_cost_steady_state(stage, s)?,
            (Family::Beumco(stage), None) => beumco_steady_state(stage)?,
            (Family::Beumco(_), Some(_)) => bail!(
                "a cost-attached steady state exists only for the bumco family"
            ),
            (Family::Bstmco(_), _) => bail!(
                "no closed-form steady state for the bstmco family; \
                 solve a long horizon and inspect converged_at_stage instead"
            ),
        };
        Ok(steady)
    }
}
