//! Plot-ready artifact writers.
//!
//! Every run prints a one-line summary JSON to stdout; with `--out DIR`
//! it also writes trajectory artifacts into the directory. All output is
//! canonical — CSV floats are printed as `{:.16e}` and JSON goes through
//! the canonical writer (sorted keys, 17-significant-digit floats) — so
//! identical configurations produce byte-identical artifacts.
//!
//! Fixed CSV headers:
//!
//! | file              | columns              | rows                          |
//! |-------------------|----------------------|-------------------------------|
//! | `policy.csv`      | `t,w,x_or_y,prob`    | `π_t(x \| w)`, `x` in column 3 |
//! | `output_kernel.csv` | `t,w,x_or_y,prob`  | `ν_t(y \| w)`, `y` in column 3 |
//! | `values.csv`      | `t,w,value`          | `C_t(w)`, incl. terminal row  |
//! | `deltas.csv`      | `t,name,value`       | value differences per stage   |
//! | `sweep.csv`       | `s,kappa,per_unit_time` | one row per multiplier     |
//!
//! JSON mode replaces the four trajectory CSVs with `values.json`; the
//! canonical `problem.json` (channel, solved policy, cost, initial
//! condition — a document that re-parses bit-exactly) is written in both
//! modes.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use ftfi_core::closedform::SteadyState;
use ftfi_core::dp::ValueFunction;
use ftfi_core::kernels::schema::{
    canonical_json, floats_value, tensor2_value, ProblemSpec,
};
use ftfi_core::kernels::{InputPolicy, OutputKernel};
use serde_json::{Map, Value};

/// Trajectory artifact format selected by `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One solved finite-horizon trajectory set, whichever solver produced it.
pub struct Trajectories<'a> {
    pub policy: &'a InputPolicy,
    pub output: &'a OutputKernel,
    pub value: &'a ValueFunction,
    /// Closed-form value differences: rows `0..=n+1`, one named column
    /// per component.
    pub delta: Option<(&'a [Vec<f64>], &'a [&'static str])>,
}

/// The one-line run summary. `None` fields are omitted from the JSON.
#[derive(Debug, Default)]
pub struct Summary {
    pub ftfi: Option<f64>,
    pub per_unit_time: Option<f64>,
    pub s: Option<f64>,
    pub kappa: Option<f64>,
    pub capacity_ergodic: Option<f64>,
    /// `Some(None)` means the diagnostic ran and found no converged
    /// stage (serialized as `null`); `None` omits the key.
    pub converged_at_stage: Option<Option<usize>>,
}

impl Summary {
    /// The canonical one-line JSON text (with trailing newline).
    pub fn to_canonical_json(&self) -> String {
        let mut doc = Map::new();
        let mut put = |key: &str, v: Option<f64>| {
            if let Some(x) = v {
                doc.insert(key.into(), Value::from(x));
            }
        };
        put("ftfi", self.ftfi);
        put("per_unit_time", self.per_unit_time);
        put("s", self.s);
        put("kappa", self.kappa);
        put("capacity_ergodic", self.capacity_ergodic);
        if let Some(stage) = self.converged_at_stage {
            doc.insert(
                "converged_at_stage".into(),
                stage.map_or(Value::Null, Value::from),
            );
        }
        let mut text = canonical_json(&Value::Object(doc));
        text.push('\n');
        text
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn value_tensor(value: &ValueFunction, n: usize, words: usize) -> Vec<Vec<f64>> {
    (0..=n + 1)
        .map(|t| (0..words).map(|w| value.value(t, w)).collect())
        .collect()
}

/// Writes the trajectory artifacts plus the canonical problem document
/// into `dir` (created if missing).
///
/// # Errors
///
/// I/O errors, each naming the file it failed on.
pub fn write_trajectories(
    dir: &Path,
    format: Format,
    doc: &ProblemSpec,
    traj: &Trajectories<'_>,
) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    write_text(dir.join("problem.json").as_path(), &(doc.to_canonical_json() + "\n"))?;

    let n = traj.policy.horizon_n();
    let words = traj.policy.word_space().count();
    match format {
        Format::Csv => {
            let mut rows = Vec::new();
            for t in 0..=n {
                for (w, column) in traj.policy.stage(t).iter().enumerate() {
                    for (x, &p) in column.iter().enumerate() {
                        rows.push(vec![t.to_string(), w.to_string(), x.to_string(), fmt(p)]);
                    }
                }
            }
            write_csv(dir.join("policy.csv").as_path(), &["t", "w", "x_or_y", "prob"], &rows)?;

            let mut rows = Vec::new();
            for t in 0..=n {
                for (w, column) in traj.output.stage(t).iter().enumerate() {
                    for (y, &p) in column.iter().enumerate() {
                        rows.push(vec![t.to_string(), w.to_string(), y.to_string(), fmt(p)]);
                    }
                }
            }
            write_csv(
                dir.join("output_kernel.csv").as_path(),
                &["t", "w", "x_or_y", "prob"],
                &rows,
            )?;

            let mut rows = Vec::new();
            for (t, row) in value_tensor(traj.value, n, words).iter().enumerate() {
                for (w, &v) in row.iter().enumerate() {
                    rows.push(vec![t.to_string(), w.to_string(), fmt(v)]);
                }
            }
            write_csv(dir.join("values.csv").as_path(), &["t", "w", "value"], &rows)?;

            if let Some((delta, names)) = traj.delta {
                let mut rows = Vec::new();
                for (t, row) in delta.iter().enumerate() {
                    for (name, &v) in names.iter().zip(row) {
                        rows.push(vec![t.to_string(), (*name).to_string(), fmt(v)]);
                    }
                }
                write_csv(dir.join("deltas.csv").as_path(), &["t", "name", "value"], &rows)?;
            }
        }
        Format::Json => {
            let mut doc = Map::new();
            doc.insert(
                "C".into(),
                tensor2_value(&value_tensor(traj.value, n, words)),
            );
            if let Some((delta, names)) = traj.delta {
                doc.insert("delta".into(), tensor2_value(delta));
                doc.insert(
                    "delta_names".into(),
                    Value::Array(names.iter().map(|&s| Value::from(s)).collect()),
                );
            }
            write_text(
                dir.join("values.json").as_path(),
                &(canonical_json(&Value::Object(doc)) + "\n"),
            )?;
        }
    }
    Ok(())
}

/// Writes the steady state as canonical `steady.json` into `dir`.
///
/// # Errors
///
/// I/O errors, each naming the file it failed on.
pub fn write_steady(dir: &Path, steady: &SteadyState) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut doc = Map::new();
    doc.insert("capacity_ergodic".into(), Value::from(steady.capacity));
    doc.insert("delta_inf".into(), floats_value(&steady.delta_inf));
    doc.insert("pi_inf".into(), tensor2_value(&steady.pi_inf));
    doc.insert("nu_inf".into(), tensor2_value(&steady.nu_inf));
    doc.insert("stationary".into(), floats_value(&steady.stationary));
    if let Some(kappa) = steady.kappa {
        doc.insert("kappa".into(), Value::from(kappa));
    }
    write_text(
        dir.join("steady.json").as_path(),
        &(canonical_json(&Value::Object(doc)) + "\n"),
    )
}

/// Writes the multiplier sweep as `sweep.csv` into `dir`, and returns the
/// same CSV text for stdout.
///
/// # Errors
///
/// I/O errors, each naming the file it failed on.
pub fn write_sweep(dir: Option<&Path>, points: &[(f64, f64, f64)]) -> Result<String> {
    let mut text = String::from("s,kappa,per_unit_time\n");
    for &(s, kappa, rate) in points {
        text.push_str(&format!("{},{},{}\n", fmt(s), fmt(kappa), fmt(rate)));
    }
    if let Some(dir) = dir {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        write_text(dir.join("sweep.csv").as_path(), &text)?;
    }
    Ok(text)
}
