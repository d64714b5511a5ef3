//! JSON schema for channel/policy/cost documents, and the canonical writer.
//!
//! A problem document is a single JSON object
//!
//! ```json
//! {
//!   "n": 2, "M": 1, "J": 1, "N": 0,
//!   "input_alphabet": ["0", "1"],
//!   "output_alphabet": ["0", "1"],
//!   "q":     [[[ ... ]]],   // [t][w][x][y], w over |Y|^M words
//!   "pi":    [[[ ... ]]],   // [t][w][x],    w over |Y|^J words (optional)
//!   "gamma": [[[ ... ]]],   // [t][w][x],    w over |Y|^N words (optional)
//!   "mu":    [ ... ]        // [w],          w over |Y|^J words (optional)
//! }
//! ```
//!
//! Word index `w` enumerates memory words lexicographically with the most
//! recent output last (least significant digit).
//!
//! Writing is *canonical*: object keys sorted, no whitespace, and every
//! float printed as `{:.16e}` (17 significant digits), which round-trips
//! `f64` exactly. Two structurally equal documents therefore serialize to
//! byte-identical text, and a document written, re-parsed, and written
//! again is unchanged — the property the CLI's determinism guarantees rest
//! on.

use serde::Deserialize;
use serde_json::{Map, Value};

use super::alphabet::{FiniteAlphabet, WordSpace};
use super::tensors::{ChannelKernel, CostFunction, InitialCondition, InputPolicy};
use crate::{Error, Result};

/// A parsed and validated problem document: the channel, plus whichever of
/// policy / cost / initial condition the document carried.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub channel: ChannelKernel,
    /// Policy memory order `J` (`≥ M`; `max{M, N}` when a cost is present).
    pub memory_order_j: usize,
    pub policy: Option<InputPolicy>,
    pub cost: Option<CostFunction>,
    pub initial: Option<InitialCondition>,
}

#[derive(Deserialize)]
struct RawDoc {
    n: usize,
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "J")]
    j: usize,
    #[serde(rename = "N")]
    n_cost: usize,
    input_alphabet: Vec<String>,
    output_alphabet: Vec<String>,
    q: Vec<Vec<Vec<Vec<f64>>>>,
    #[serde(default)]
    pi: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default)]
    gamma: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default)]
    mu: Option<Vec<f64>>,
}

impl ProblemSpec {
    /// Parses and validates a problem document.
    ///
    /// # Errors
    ///
    /// [`Error::Json`] on malformed JSON (the message names the offending
    /// key/position); shape, range, and normalization errors from the
    /// object constructors otherwise.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawDoc = serde_json::from_str(text)?;
        let input_alphabet = FiniteAlphabet::new(raw.input_alphabet)?;
        let output_alphabet = FiniteAlphabet::new(raw.output_alphabet)?;
        let x_size = input_alphabet.size();
        let y_size = output_alphabet.size();
        if raw.q.len() != raw.n + 1 {
            return Err(Error::Shape(format!(
                "q has {} stages but n = {} (need n + 1)",
                raw.q.len(),
                raw.n
            )));
        }
        if raw.j < raw.m {
            return Err(Error::Shape(format!("J = {} must be >= M = {}", raw.j, raw.m)));
        }
        let channel = ChannelKernel::new(input_alphabet, output_alphabet, raw.m, raw.q)?;
        let policy = raw
            .pi
            .map(|pi| {
                if pi.len() != raw.n + 1 {
                    return Err(Error::Shape(format!(
                        "pi has {} stages but n = {} (need n + 1)",
                        pi.len(),
                        raw.n
                    )));
                }
                InputPolicy::new(x_size, y_size, raw.j, pi)
            })
            .transpose()?;
        let cost = raw
            .gamma
            .map(|gamma| {
                if gamma.len() != raw.n + 1 {
                    return Err(Error::Shape(format!(
                        "gamma has {} stages but n = {} (need n + 1)",
                        gamma.len(),
                        raw.n
                    )));
                }
                if raw.n_cost > raw.j {
                    return Err(Error::Shape(format!(
                        "N = {} must be <= J = {}",
                        raw.n_cost, raw.j
                    )));
                }
                CostFunction::new(x_size, y_size, raw.n_cost, gamma)
            })
            .transpose()?;
        let initial = raw
            .mu
            .map(|mu| {
                let words = WordSpace::new(raw.j, y_size).count();
                if mu.len() != words {
                    return Err(Error::Shape(format!(
                        "mu covers {} words, J = {} over {} outputs needs {words}",
                        mu.len(),
                        raw.j,
                        y_size
                    )));
                }
                InitialCondition::new(mu)
            })
            .transpose()?;
        Ok(ProblemSpec {
            channel,
            memory_order_j: raw.j,
            policy,
            cost,
            initial,
        })
    }

    /// Builds the JSON value of this spec (canonical form comes from
    /// [`canonical_json`]).
    pub fn to_value(&self) -> Value {
        let mut doc = Map::new();
        doc.insert("n".into(), Value::from(self.channel.horizon_n()));
        doc.insert("M".into(), Value::from(self.channel.memory_order()));
        doc.insert("J".into(), Value::from(self.memory_order_j));
        doc.insert(
            "N".into(),
            Value::from(self.cost.as_ref().map_or(0, CostFunction::memory_order)),
        );
        doc.insert(
            "input_alphabet".into(),
            labels_value(self.channel.input_alphabet()),
        );
        doc.insert(
            "output_alphabet".into(),
            labels_value(self.channel.output_alphabet()),
        );
        doc.insert("q".into(), tensor4_value(self.channel.tensor()));
        if let Some(pi) = &self.policy {
            doc.insert("pi".into(), tensor3_value(pi.tensor()));
        }
        if let Some(gamma) = &self.cost {
            doc.insert("gamma".into(), tensor3_value(gamma.tensor()));
        }
        if let Some(mu) = &self.initial {
            doc.insert("mu".into(), floats_value(mu.as_slice()));
        }
        Value::Object(doc)
    }

    /// Canonical JSON text of this spec.
    pub fn to_canonical_json(&self) -> String {
        canonical_json(&self.to_value())
    }
}

fn labels_value(alphabet: &FiniteAlphabet) -> Value {
    Value::Array(alphabet.labels().iter().map(|s| Value::from(s.as_str())).collect())
}

/// `[w]` float vector as a JSON array.
pub fn floats_value(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| Value::from(x)).collect())
}

/// `[a][b]` float tensor as nested JSON arrays.
pub fn tensor2_value(t: &[Vec<f64>]) -> Value {
    Value::Array(t.iter().map(|v| floats_value(v)).collect())
}

/// `[a][b][c]` float tensor as nested JSON arrays.
pub fn tensor3_value(t: &[Vec<Vec<f64>>]) -> Value {
    Value::Array(t.iter().map(|v| tensor2_value(v)).collect())
}

/// `[a][b][c][d]` float tensor as nested JSON arrays.
pub fn tensor4_value(t: &[Vec<Vec<Vec<f64>>>]) -> Value {
    Value::Array(t.iter().map(|v| tensor3_value(v)).collect())
}

/// Serializes a JSON value canonically: object keys sorted, no whitespace,
/// floats as 17-significant-digit scientific notation (`{:.16e}`), which
/// round-trips every finite `f64` bit-exactly.
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v);
    out
}

fn write_value(out: &mut String, v: &Value) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                // Finite by construction: the crate never produces NaN/inf
                // in serialized documents.
                let x = n.as_f64().expect("numeric JSON value");
                out.push_str(&format!("{x:.16e}"));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string serialization"))
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(out, item);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).expect("key serialization"));
                out.push(':');
                write_value(out, &map[*k]);
            }
            out.push('}');
        }
    }
}
