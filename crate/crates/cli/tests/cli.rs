//! End-to-end tests of the `ftfi` binary: reference figures through the
//! command-line surface, artifact determinism, document round-trips, and
//! the exit-code contract (0 success, 1 input error, 2 numerical
//! refusal).

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use anyhow::{Context, Result};
use ftfi_core::kernels::schema::ProblemSpec;
use serde_json::Value;

fn ftfi(args: &[&str]) -> Result<Output> {
    Command::new(env!("CARGO_BIN_EXE_ftfi"))
        .args(args)
        .output()
        .context("cannot spawn the ftfi binary")
}

fn stdout_json(output: &Output) -> Result<Value> {
    let text = String::from_utf8(output.stdout.clone())?;
    serde_json::from_str(text.trim()).with_context(|| format!("stdout is not JSON: {text}"))
}

fn field(summary: &Value, key: &str) -> f64 {
    summary[key].as_f64().unwrap_or_else(|| panic!("summary lacks {key}: {summary}"))
}

#[test]
fn bumco_finite_horizon_reproduces_the_reference_rate() -> Result<()> {
    let out = ftfi(&["ftfi", "--channel", "bumco:0.9,0.1,0.2,0.4", "--n", "1000", "--mu", "1"])?;
    assert!(out.status.success(), "{out:?}");
    let summary = stdout_json(&out)?;
    assert!((field(&summary, "per_unit_time") - 0.2148).abs() < 2e-3);
    assert_eq!(summary["converged_at_stage"], Value::from(6));
    Ok(())
}

#[test]
fn beumco_steady_state_reports_the_ergodic_capacity() -> Result<()> {
    let out = ftfi(&["closed-form", "--channel", "beumco:0.95,0.6,0.8", "--steady"])?;
    assert!(out.status.success(), "{out:?}");
    let summary = stdout_json(&out)?;
    assert!((field(&summary, "capacity_ergodic") - 0.8307).abs() < 1e-3);
    Ok(())
}

#[test]
fn capacity_command_spends_the_requested_budget() -> Result<()> {
    let out = ftfi(&[
        "capacity",
        "--channel",
        "bumco:0.9,0.1,0.2,0.4",
        "--n",
        "100",
        "--kappa",
        "0.5992",
    ])?;
    assert!(out.status.success(), "{out:?}");
    let summary = stdout_json(&out)?;
    assert!((field(&summary, "kappa") - 0.5992).abs() < 1e-3);
    let s = field(&summary, "s");
    assert!(s > 0.0 && s < 0.2, "multiplier {s} out of the expected range");
    Ok(())
}

#[test]
fn verify_rejects_a_uniform_policy_with_a_residual_report() -> Result<()> {
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("uniform.json");
    let stage = "[[0.5,0.5],[0.5,0.5]]";
    let stages: Vec<&str> = (0..11).map(|_| stage).collect();
    fs::write(&path, format!("[{}]", stages.join(",")))?;
    let out = ftfi(&[
        "verify",
        "--channel",
        "bumco:0.9,0.1,0.2,0.4",
        "--n",
        "10",
        "--policy",
        path.to_str().unwrap(),
    ])?;
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let text = String::from_utf8(out.stdout)?;
    assert!(text.contains("max equality residual"), "{text}");
    assert!(text.contains("verdict:                  FAIL"), "{text}");
    Ok(())
}

#[test]
fn verify_certifies_a_solved_document_end_to_end() -> Result<()> {
    let dir = tempfile::tempdir()?;
    let art = dir.path().join("run");
    let out = ftfi(&[
        "closed-form",
        "--channel",
        "bumco:0.9,0.1,0.2,0.4",
        "--n",
        "8",
        "--out",
        art.to_str().unwrap(),
    ])?;
    assert!(out.status.success(), "{out:?}");
    let doc = art.join("problem.json");
    let out = ftfi(&["verify", "--spec", doc.to_str().unwrap()])?;
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout)?;
    assert!(text.contains("verdict:                  PASS"), "{text}");
    Ok(())
}

fn read_dir_sorted(dir: &Path) -> Result<Vec<(String, Vec<u8>)>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        files.push((
            entry.file_name().to_string_lossy().into_owned(),
            fs::read(entry.path())?,
        ));
    }
    files.sort();
    Ok(files)
}

#[test]
fn identical_invocations_write_byte_identical_artifacts() -> Result<()> {
    let dir = tempfile::tempdir()?;
    let mut runs = Vec::new();
    for name in ["first", "second"] {
        let art = dir.path().join(name);
        let out = ftfi(&[
            "ftfi",
            "--channel",
            "bumco:0.9,0.1,0.2,0.4",
            "--n",
            "30",
            "--s",
            "0.05",
            "--out",
            art.to_str().unwrap(),
        ])?;
        assert!(out.status.success(), "{out:?}");
        runs.push((read_dir_sorted(&art)?, out.stdout));
    }
    assert_eq!(runs[0], runs[1], "artifacts differ between identical runs");
    let names: Vec<&str> = runs[0].0.iter().map(|(name, _)| name.as_str()).collect();
    assert_eq!(
        names,
        ["output_kernel.csv", "policy.csv", "problem.json", "summary.json", "values.csv"]
    );
    Ok(())
}

#[test]
fn written_documents_reparse_to_identical_canonical_text() -> Result<()> {
    let dir = tempfile::tempdir()?;
    let art = dir.path().join("run");
    let out = ftfi(&[
        "closed-form",
        "--channel",
        "beumco:0.95,0.6,0.8",
        "--n",
        "6",
        "--mu",
        "0",
        "--out",
        art.to_str().unwrap(),
    ])?;
    assert!(out.status.success(), "{out:?}");
    let text = fs::read_to_string(art.join("problem.json"))?;
    let reparsed = ProblemSpec::from_json(&text)?;
    assert_eq!(reparsed.to_canonical_json() + "\n", text);
    Ok(())
}

#[test]
fn cost_sweep_tabulates_monotone_cost_and_rate() -> Result<()> {
    let out = ftfi(&[
        "cost-sweep",
        "--channel",
        "bumco:0.9,0.1,0.2,0.4",
        "--n",
        "30",
        "--s",
        "0:0.25:6",
    ])?;
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout)?;
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,kappa,per_unit_time"));
    let rows: Vec<Vec<f64>> = lines
        .map(|line| line.split(',').map(|cell| cell.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 6);
    for pair in rows.windows(2) {
        assert!(pair[1][0] > pair[0][0], "multipliers not increasing");
        assert!(pair[1][1] < pair[0][1], "cost not decreasing in s");
        assert!(pair[1][2] < pair[0][2], "rate not decreasing in s");
    }
    Ok(())
}

#[test]
fn oracle_check_passes_on_a_small_reference_channel() -> Result<()> {
    let out = ftfi(&["oracle-check", "--channel", "bumco:0.9,0.1,0.2,0.4", "--n", "2"])?;
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout)?;
    assert!(text.contains("verdict:    PASS"), "{text}");
    Ok(())
}

#[test]
fn input_errors_exit_with_code_one() -> Result<()> {
    // No channel source at all.
    let out = ftfi(&["ftfi", "--n", "5"])?;
    assert_eq!(out.status.code(), Some(1), "{out:?}");

    // Unknown family shorthand.
    let out = ftfi(&["ftfi", "--channel", "nope:0.5", "--n", "5"])?;
    assert_eq!(out.status.code(), Some(1), "{out:?}");

    // Malformed document: exit 1 and the message names the file.
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\"n\": 0}")?;
    let out = ftfi(&["ftfi", "--spec", path.to_str().unwrap()])?;
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    let err = String::from_utf8(out.stderr)?;
    assert!(err.contains("bad.json"), "{err}");

    // Nonpositive tolerance.
    let out = ftfi(&[
        "ftfi", "--channel", "bsc:0.1", "--n", "2", "--tol-inner", "0.0",
    ])?;
    assert_eq!(out.status.code(), Some(1), "{out:?}");

    // Malformed sweep range.
    let out = ftfi(&[
        "cost-sweep", "--channel", "bumco:0.9,0.1,0.2,0.4", "--n", "5", "--s", "0.3",
    ])?;
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    Ok(())
}

#[test]
fn regime_violations_exit_with_code_two() -> Result<()> {
    let out = ftfi(&[
        "closed-form",
        "--channel",
        "bumco:0.99,0.01,0.5,0.5",
        "--n",
        "300",
        "--s",
        "3.0",
    ])?;
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let err = String::from_utf8(out.stderr)?;
    assert!(err.contains("out of regime"), "{err}");
    Ok(())
}

#[test]
fn degenerate_families_run_through_the_shorthand() -> Result<()> {
    for (channel, expected) in [
        ("bsc:0.1", 1.0 - (-(0.1f64) * 0.1f64.log2() - 0.9 * 0.9f64.log2())),
        ("bec:0.25", 0.75),
    ] {
        let out = ftfi(&["closed-form", "--channel", channel, "--steady"])?;
        assert!(out.status.success(), "{out:?}");
        let summary = stdout_json(&out)?;
        assert!(
            (field(&summary, "capacity_ergodic") - expected).abs() < 1e-9,
            "{channel}: {summary}"
        );
    }
    Ok(())
}
