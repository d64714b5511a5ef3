//! `ftfi` — feedback capacity of channels with memory, from the shell.
//!
//! Computes finite-horizon directed-information maxima and their
//! capacity-achieving input distributions by backward dynamic
//! programming, runs the closed-form recursions for the built-in channel
//! families, sweeps transmission-cost multipliers, certifies candidate
//! policies against the sequential optimality conditions, and
//! cross-checks the solver against an exhaustive grid oracle.
//!
//! ```text
//! ftfi ftfi         --channel bumco:0.9,0.1,0.2,0.4 --n 1000 --mu 1
//! ftfi closed-form  --channel beumco:0.95,0.6,0.8 --steady
//! ftfi capacity     --channel bumco:0.9,0.1,0.2,0.4 --n 200 --kappa 0.5992
//! ftfi cost-sweep   --channel bumco:0.9,0.1,0.2,0.4 --n 100 --s 0:0.3:7
//! ftfi verify       --channel bumco:0.9,0.1,0.2,0.4 --n 10 --policy pi.json
//! ftfi oracle-check --channel bumco:0.9,0.1,0.2,0.4 --n 2
//! ```
//!
//! Every command prints a one-line result to stdout (a summary JSON, or
//! CSV/text where noted) and, given `--out DIR`, writes plot-ready
//! trajectory artifacts. Exit codes: `0` success, `1` input error
//! (malformed flags, specs, or files), `2` numerical refusal (a
//! closed-form regime violation, an unconverged stage, a failed
//! certificate, or an oracle mismatch).

mod artifacts;
mod builtin;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ftfi_core::closedform::converged_at_stage;
use ftfi_core::dp::{
    cost_constrained_capacity, solve_ftfi, verify_kkt, CostOptions, SolveOptions,
};
use ftfi_core::kernels::schema::ProblemSpec;
use ftfi_core::kernels::{
    expected_cost, ChannelKernel, CostFunction, InitialCondition, InputPolicy, WordSpace,
};
use ftfi_core::oracle::{brute_force_ftfi, GridSpec};

use artifacts::{Format, Summary, Trajectories};
use builtin::Family;

#[derive(Parser)]
#[command(
    name = "ftfi",
    version,
    about = "Feedback capacity of channels with memory: dynamic programs, \
             closed forms, cost sweeps, and optimality certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the finite-horizon dynamic program (optionally Lagrangian).
    Ftfi(FtfiArgs),
    /// Capacity under a cost budget, by bisection on the multiplier.
    Capacity(CapacityArgs),
    /// Tabulate (s, kappa, rate) along a multiplier range.
    CostSweep(CostSweepArgs),
    /// Certify a candidate policy against the optimality conditions.
    Verify(VerifyArgs),
    /// Closed-form recursions and steady states of built-in families.
    ClosedForm(ClosedFormArgs),
    /// Cross-check the dynamic program against the grid oracle.
    OracleCheck(OracleCheckArgs),
}

/// Where the problem comes from.
#[derive(Args)]
struct ProblemArgs {
    /// Built-in channel: bumco:a,b,g,d | beumco:a,g,b | bstmco:a,b,g,d |
    /// post:a,b | bssc:a,b | bsc:a | bec:a
    #[arg(long, value_name = "FAMILY:PARAMS", conflicts_with = "spec")]
    channel: Option<String>,

    /// Problem document (JSON schema: n, M, J, N, alphabets, q, pi?,
    /// gamma?, mu?)
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,

    /// Horizon n (stages 0..=n); built-in channels only — a spec document
    /// fixes its own horizon
    #[arg(long, conflicts_with = "spec")]
    n: Option<usize>,

    /// Initial memory distribution: "uniform", a word index (point
    /// mass), or a JSON file with one probability per word
    #[arg(long, value_name = "MU")]
    mu: Option<String>,
}

/// Numerical tolerances (all must be positive).
#[derive(Args)]
struct TolArgs {
    /// Stage stopping rule: sup-norm policy change per inner iteration
    #[arg(long, default_value_t = 1e-12)]
    tol_inner: f64,

    /// Budget search acceptance: |achieved cost - kappa| below this
    #[arg(long, default_value_t = 1e-4)]
    tol_cost: f64,

    /// Trajectory diagnostic: sup-norm stage-to-stage change under which
    /// the recursion counts as converged
    #[arg(long, default_value_t = 1e-3)]
    traj_tol: f64,
}

impl TolArgs {
    fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("--tol-inner", self.tol_inner),
            ("--tol-cost", self.tol_cost),
            ("--traj-tol", self.traj_tol),
        ] {
            if !value.is_finite() || value <= 0.0 {
                bail!("{name} must be positive, got {value}");
            }
        }
        Ok(())
    }

    fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            tol_inner: self.tol_inner,
            ..SolveOptions::default()
        }
    }
}

/// Artifact destination.
#[derive(Args)]
struct OutputArgs {
    /// Directory for trajectory artifacts (created if missing); the
    /// summary always prints to stdout
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Trajectory artifact format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct FtfiArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Transmission-cost multiplier: solve the Lagrangian objective
    #[arg(long)]
    s: Option<f64>,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CapacityArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Per-stage cost budget kappa to spend exactly
    #[arg(long)]
    kappa: f64,
    /// Upper end of the multiplier bracket searched (lower end is 0)
    #[arg(long, default_value_t = 8.0)]
    s: f64,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CostSweepArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Multiplier range lo:hi:count (count >= 2 evenly spaced points)
    #[arg(long, value_name = "LO:HI:COUNT")]
    s: String,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Candidate policy: JSON file holding a [t][w][x] tensor or an
    /// object with a "pi" key (defaults to the spec document's pi)
    #[arg(long, value_name = "FILE")]
    policy: Option<PathBuf>,
    /// Verify Lagrangian optimality at this multiplier
    #[arg(long)]
    s: Option<f64>,
    /// Largest optimality-condition residual accepted
    #[arg(long, default_value_t = 1e-8)]
    tol_kkt: f64,
}

#[derive(Args)]
struct ClosedFormArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Transmission-cost multiplier (bumco family only)
    #[arg(long)]
    s: Option<f64>,
    /// Report the infinite-horizon steady state instead of a trajectory
    #[arg(long)]
    steady: bool,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OracleCheckArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Transmission-cost multiplier for a Lagrangian check
    #[arg(long)]
    s: Option<f64>,
    /// Largest |dp - grid| gap accepted
    #[arg(long, default_value_t = 2e-5)]
    tol_gap: f64,
    #[command(flatten)]
    tol: TolArgs,
}

// ---------------------------------------------------------------------
// Problem assembly
// ---------------------------------------------------------------------

/// A fully resolved problem: channel, policy memory, initial condition,
/// and the cost function when one is in play.
struct Problem {
    channel: ChannelKernel,
    memory_order_j: usize,
    mu: InitialCondition,
    cost: Option<CostFunction>,
    family: Option<Family>,
    /// A policy embedded in the spec document, available to `verify`.
    embedded_policy: Option<InputPolicy>,
}

impl Problem {
    fn cost_pair(&self, s: Option<f64>) -> Option<(&CostFunction, f64)> {
        match (&self.cost, s) {
            (Some(gamma), Some(s)) => Some((gamma, s)),
            _ => None,
        }
    }

    /// The canonical problem document with `pi` filled in by a solver.
    fn document(&self, solved: &InputPolicy) -> ProblemSpec {
        ProblemSpec {
            channel: self.channel.clone(),
            memory_order_j: self.memory_order_j,
            policy: Some(solved.clone()),
            cost: self.cost.clone(),
            initial: Some(self.mu.clone()),
        }
    }
}

fn resolve_mu(
    flag: Option<&str>,
    from_doc: Option<InitialCondition>,
    words: usize,
) -> Result<InitialCondition> {
    let Some(text) = flag else {
        return Ok(match from_doc {
            Some(mu) => mu,
            None => InitialCondition::uniform(words),
        });
    };
    if text == "uniform" {
        return Ok(InitialCondition::uniform(words));
    }
    if let Ok(index) = text.parse::<usize>() {
        return Ok(InitialCondition::point_mass(index, words)?);
    }
    let body = fs::read_to_string(text).with_context(|| {
        format!("--mu `{text}` is neither \"uniform\", a word index, nor a readable file")
    })?;
    let weights: Vec<f64> = serde_json::from_str(&body)
        .with_context(|| format!("{text} does not hold a JSON array of probabilities"))?;
    if weights.len() != words {
        bail!(
            "{text} lists {} probabilities, the policy memory has {words} words",
            weights.len()
        );
    }
    Ok(InitialCondition::new(weights)?)
}

/// Resolves `--channel`/`--spec`, `--n`, and `--mu` into a [`Problem`].
/// `want_cost` demands a cost function (because `--s` or `--kappa` was
/// given): built-in channels fall back to the matched-input cost where
/// the family has one, spec documents must carry `gamma`.
fn assemble(args: &ProblemArgs, want_cost: bool) -> Result<Problem> {
    match (&args.channel, &args.spec) {
        (Some(shorthand), None) => {
            let family = Family::parse(shorthand)?;
            let n = args
                .n
                .context("--n is required with a built-in channel")?;
            let channel = family.channel(n);
            let cost = if want_cost {
                Some(family.default_cost(n).context(
                    "no built-in cost for this family; supply gamma via a --spec document",
                )?)
            } else {
                None
            };
            let mu = resolve_mu(args.mu.as_deref(), None, family.words())?;
            Ok(Problem {
                memory_order_j: channel.memory_order(),
                channel,
                mu,
                cost,
                family: Some(family),
                embedded_policy: None,
            })
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            let doc = ProblemSpec::from_json(&text)
                .with_context(|| format!("{} is not a valid problem document", path.display()))?;
            if want_cost && doc.cost.is_none() {
                bail!(
                    "{} carries no cost function (gamma), required by --s/--kappa",
                    path.display()
                );
            }
            let words = WordSpace::new(doc.memory_order_j, doc.channel.output_alphabet().size())
                .count();
            let mu = resolve_mu(args.mu.as_deref(), doc.initial.clone(), words)?;
            Ok(Problem {
                channel: doc.channel,
                memory_order_j: doc.memory_order_j,
                mu,
                cost: doc.cost,
                family: None,
                embedded_policy: doc.policy,
            })
        }
        (None, None) => bail!("provide a channel: --channel FAMILY:PARAMS or --spec FILE"),
        (Some(_), Some(_)) => unreachable!("clap rejects --channel with --spec"),
    }
}

// ---------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------

fn emit(
    problem: &Problem,
    traj: &Trajectories<'_>,
    summary: &Summary,
    output: &OutputArgs,
) -> Result<()> {
    let text = summary.to_canonical_json();
    if let Some(dir) = &output.out {
        artifacts::write_trajectories(dir, output.format, &problem.document(traj.policy), traj)?;
        fs::write(dir.join("summary.json"), &text)
            .with_context(|| format!("cannot write {}", dir.join("summary.json").display()))?;
    }
    print!("{text}");
    Ok(())
}

fn run_ftfi(args: &FtfiArgs) -> Result<ExitCode> {
    args.tol.validate()?;
    let problem = assemble(&args.problem, args.s.is_some())?;
    let sol = solve_ftfi(
        &problem.channel,
        &problem.mu,
        problem.cost_pair(args.s),
        &args.tol.solve_options(),
    )?;
    let summary = Summary {
        ftfi: Some(sol.ftfi_value),
        per_unit_time: Some(sol.per_unit_time()),
        s: Some(sol.s),
        kappa: sol.achieved_cost,
        capacity_ergodic: None,
        converged_at_stage: Some(converged_at_stage(
            &sol.policy,
            &sol.output,
            args.tol.traj_tol,
        )),
    };
    emit(
        &problem,
        &Trajectories {
            policy: &sol.policy,
            output: &sol.output,
            value: &sol.value,
            delta: None,
        },
        &summary,
        &args.output,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn run_capacity(args: &CapacityArgs) -> Result<ExitCode> {
    args.tol.validate()?;
    if !args.s.is_finite() || args.s <= 0.0 {
        bail!("--s (multiplier bracket upper end) must be positive, got {}", args.s);
    }
    let problem = assemble(&args.problem, true)?;
    let gamma = problem.cost.as_ref().expect("assemble demanded a cost");
    let opts = CostOptions {
        cost_tol: args.tol.tol_cost,
        solve: args.tol.solve_options(),
        ..CostOptions::default()
    };
    let (s_star, sol) = cost_constrained_capacity(
        &problem.channel,
        gamma,
        &problem.mu,
        args.kappa,
        (0.0, args.s),
        &opts,
    )?;
    let stages = problem.channel.horizon_n() + 1;
    let summary = Summary {
        ftfi: Some(sol.directed_info),
        per_unit_time: Some(sol.directed_info / stages as f64),
        s: Some(s_star),
        kappa: sol.achieved_cost,
        capacity_ergodic: None,
        converged_at_stage: Some(converged_at_stage(
            &sol.policy,
            &sol.output,
            args.tol.traj_tol,
        )),
    };
    emit(
        &problem,
        &Trajectories {
            policy: &sol.policy,
            output: &sol.output,
            value: &sol.value,
            delta: None,
        },
        &summary,
        &args.output,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn parse_sweep_range(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, count] = parts.as_slice() else {
        bail!("--s `{text}` is not of the form lo:hi:count");
    };
    let lo: f64 = lo.parse().with_context(|| format!("bad range start `{lo}`"))?;
    let hi: f64 = hi.parse().with_context(|| format!("bad range end `{hi}`"))?;
    let count: usize = count
        .parse()
        .with_context(|| format!("bad range count `{count}`"))?;
    if count < 2 {
        bail!("--s range needs at least 2 points, got {count}");
    }
    if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi <= lo {
        bail!("--s range must satisfy 0 <= lo < hi, got {lo}:{hi}");
    }
    let step = (hi - lo) / (count - 1) as f64;
    Ok((0..count).map(|i| lo + step * i as f64).collect())
}

fn run_cost_sweep(args: &CostSweepArgs) -> Result<ExitCode> {
    args.tol.validate()?;
    let grid = parse_sweep_range(&args.s)?;
    let problem = assemble(&args.problem, true)?;
    let gamma = problem.cost.as_ref().expect("assemble demanded a cost");
    let opts = args.tol.solve_options();
    let stages = problem.channel.horizon_n() + 1;
    let mut points = Vec::with_capacity(grid.len());
    for &s in &grid {
        let sol = solve_ftfi(&problem.channel, &problem.mu, Some((gamma, s)), &opts)?;
        let kappa = sol.achieved_cost.expect("cost-attached solve reports kappa");
        points.push((s, kappa, sol.directed_info / stages as f64));
    }
    let table = artifacts::write_sweep(args.output.out.as_deref(), &points)?;
    print!("{table}");
    Ok(ExitCode::SUCCESS)
}

fn load_policy(path: &Path, problem: &Problem) -> Result<InputPolicy> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("{} is not JSON", path.display()))?;
    let tensor_value = match &value {
        serde_json::Value::Array(_) => &value,
        serde_json::Value::Object(map) if map.contains_key("q") => {
            let doc = ProblemSpec::from_json(&text)
                .with_context(|| format!("{} is not a valid problem document", path.display()))?;
            return doc
                .policy
                .with_context(|| format!("{} carries no pi to verify", path.display()));
        }
        serde_json::Value::Object(map) => map
            .get("pi")
            .with_context(|| format!("{} has no \"pi\" key", path.display()))?,
        _ => bail!("{} holds neither a tensor nor an object", path.display()),
    };
    let tensor: Vec<Vec<Vec<f64>>> = serde_json::from_value(tensor_value.clone())
        .with_context(|| format!("{}: pi is not a [t][w][x] tensor", path.display()))?;
    Ok(InputPolicy::new(
        problem.channel.input_alphabet().size(),
        problem.channel.output_alphabet().size(),
        problem.memory_order_j,
        tensor,
    )?)
}

fn run_verify(args: &VerifyArgs) -> Result<ExitCode> {
    if !args.tol_kkt.is_finite() || args.tol_kkt <= 0.0 {
        bail!("--tol-kkt must be positive, got {}", args.tol_kkt);
    }
    let problem = assemble(&args.problem, args.s.is_some())?;
    let pi = match &args.policy {
        Some(path) => load_policy(path, &problem)?,
        None => problem
            .embedded_policy
            .clone()
            .context("--policy FILE is required (the problem source carries no pi)")?,
    };
    let report = verify_kkt(
        &problem.channel,
        &pi,
        problem.cost_pair(args.s),
        args.tol_kkt,
    )?;
    let worst = report
        .entries
        .iter()
        .max_by(|a, b| {
            let a = a.equality_residual.max(a.inequality_violation);
            let b = b.equality_residual.max(b.inequality_violation);
            a.total_cmp(&b)
        })
        .expect("at least one stage entry");
    println!("max equality residual:    {:.16e}", report.max_equality_residual);
    println!("max inequality violation: {:.16e}", report.max_inequality_violation);
    println!("tolerance:                {:.16e}", report.tol);
    println!("worst entry:              stage t={} word w={}", worst.t, worst.w);
    println!("verdict:                  {}", if report.pass { "PASS" } else { "FAIL" });
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn run_closed_form(args: &ClosedFormArgs) -> Result<ExitCode> {
    args.tol.validate()?;
    if args.problem.spec.is_some() {
        bail!(
            "closed forms exist for the built-in families only; \
             run `ftfi --spec ...` for arbitrary documents"
        );
    }
    if args.steady {
        let Some(shorthand) = &args.problem.channel else {
            bail!("provide a channel: --channel FAMILY:PARAMS");
        };
        let family = Family::parse(shorthand)?;
        let steady = family.steady(args.s)?;
        let summary = Summary {
            s: args.s,
            kappa: steady.kappa,
            capacity_ergodic: Some(steady.capacity),
            ..Summary::default()
        };
        if let Some(dir) = &args.output.out {
            artifacts::write_steady(dir, &steady)?;
            fs::write(dir.join("summary.json"), summary.to_canonical_json())
                .with_context(|| format!("cannot write {}", dir.join("summary.json").display()))?;
        }
        print!("{}", summary.to_canonical_json());
        return Ok(ExitCode::SUCCESS);
    }

    let problem = assemble(&args.problem, args.s.is_some())?;
    let family = problem.family.as_ref().expect("built-in source checked above");
    let n = problem.channel.horizon_n();
    let solution = family.solve(n, &problem.mu, args.s)?;
    let kappa = match problem.cost_pair(args.s) {
        Some((gamma, _)) => Some(expected_cost(
            &problem.channel,
            &solution.policy,
            gamma,
            &problem.mu,
        )?),
        None => None,
    };
    let summary = Summary {
        ftfi: Some(solution.ftfi_value),
        per_unit_time: Some(solution.ftfi_value / (n + 1) as f64),
        s: args.s,
        kappa,
        capacity_ergodic: None,
        converged_at_stage: Some(converged_at_stage(
            &solution.policy,
            &solution.output,
            args.tol.traj_tol,
        )),
    };
    emit(
        &problem,
        &Trajectories {
            policy: &solution.policy,
            output: &solution.output,
            value: &solution.value,
            delta: Some((&solution.delta, &solution.delta_names)),
        },
        &summary,
        &args.output,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn run_oracle_check(args: &OracleCheckArgs) -> Result<ExitCode> {
    args.tol.validate()?;
    if !args.tol_gap.is_finite() || args.tol_gap <= 0.0 {
        bail!("--tol-gap must be positive, got {}", args.tol_gap);
    }
    let problem = assemble(&args.problem, args.s.is_some())?;
    let cost = problem.cost_pair(args.s);
    let dp = solve_ftfi(
        &problem.channel,
        &problem.mu,
        cost,
        &args.tol.solve_options(),
    )?;
    let (_, grid_value) =
        brute_force_ftfi(&problem.channel, &problem.mu, cost, &GridSpec::default())?;
    let gap = (dp.ftfi_value - grid_value).abs();
    let pass = gap <= args.tol_gap;
    println!("dp value:   {:.16e}", dp.ftfi_value);
    println!("grid value: {:.16e}", grid_value);
    println!("|gap|:      {:.16e} (tolerance {:.16e})", gap, args.tol_gap);
    println!("verdict:    {}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

// ---------------------------------------------------------------------
// Entry
// ---------------------------------------------------------------------

fn classify(err: &anyhow::Error) -> ExitCode {
    match err.downcast_ref::<ftfi_core::Error>() {
        Some(core) if core.is_regime_or_convergence() => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

/// Formats the error chain, skipping causes a wrapper already quotes
/// verbatim (library errors embed their source's text in their own
/// message, which would otherwise print twice).
fn render(err: &anyhow::Error) -> String {
    let mut text = String::new();
    for cause in err.chain() {
        let cause = cause.to_string();
        if text.ends_with(&cause) {
            continue;
        }
        if !text.is_empty() {
            text.push_str(": ");
        }
        text.push_str(&cause);
    }
    text
}

fn main() -> ExitCode {
    // Die quietly on SIGPIPE like other shell filters, instead of
    // panicking when a downstream `head` closes stdout early.
    #[cfg(unix)]
    // SAFETY: restoring a default signal disposition has no preconditions.
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help/version are success paths; everything else is an
            // input error (exit 1, not clap's default 2 — that code
            // means a numerical refusal here).
            let benign = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = err.print();
            return if benign { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    let outcome = match &cli.command {
        Command::Ftfi(args) => run_ftfi(args),
        Command::Capacity(args) => run_capacity(args),
        Command::CostSweep(args) => run_cost_sweep(args),
        Command::Verify(args) => run_verify(args),
        Command::ClosedForm(args) => run_closed_form(args),
        Command::OracleCheck(args) => run_oracle_check(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", render(&err));
            classify(&err)
        }
    }
}
