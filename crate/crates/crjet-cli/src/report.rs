//! Deterministic JSON reports.
//!
//! Invariants
//! - a run prints exactly one JSON object on standard output, both on
//!   success and on failure; human diagnostics go to standard error
//! - identical inputs, flags, and seed yield byte-identical output:
//!   keys are emitted in sorted order and nothing time- or
//!   machine-dependent enters the object unless `--timing` asks for it
//! - every failure carries one of the documented exit codes:
//!   1 verdict-negative, 2 input error, 3 rank/retry exhaustion

use crjet_core::error::Error as CoreError;
use crjet_core::gauss::{self, GaussRat};
use crjet_core::linalg::Matrix;
use crjet_core::segre::ChainPoint;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::input::ParseError;

/// A command failure destined for the error report: an exit code, a
/// machine-readable kind, and an optional source position.
#[derive(Clone, Debug)]
pub struct Fail {
    pub exit: i32,
    pub kind: &'static str,
    pub message: String,
    pub file: Option<String>,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub token: Option<String>,
}

impl Fail {
    pub fn input(message: impl Into<String>) -> Fail {
        Fail {
            exit: 2,
            kind: "input",
            message: message.into(),
            file: None,
            line: None,
            column: None,
            token: None,
        }
    }

    pub fn parse(file: &str, e: ParseError) -> Fail {
        Fail {
            exit: 2,
            kind: "parse",
            message: e.message,
            file: Some(file.to_string()),
            line: Some(e.line),
            column: Some(e.column),
            token: Some(e.token),
        }
    }

    pub fn io(file: &str, e: std::io::Error) -> Fail {
        Fail {
            exit: 2,
            kind: "io",
            message: e.to_string(),
            file: Some(file.to_string()),
            line: None,
            column: None,
            token: None,
        }
    }

    /// Map a core pipeline error onto the exit-code contract: rank and
    /// retry failures are "internal" (exit 3), everything else reports
    /// a defect of the inputs (exit 2).
    pub fn core(e: CoreError) -> Fail {
        fn exit_of(e: &CoreError) -> i32 {
            match e {
                CoreError::ChainStep { source, .. } => exit_of(source),
                CoreError::RetriesExhausted { .. }
                | CoreError::RankCondition { .. }
                | CoreError::NoInvertibleMinor { .. }
                | CoreError::SingularLinearPart
                | CoreError::LinearSystem { .. } => 3,
                _ => 2,
            }
        }
        let exit = exit_of(&e);
        Fail {
            exit,
            kind: if exit == 3 { "internal" } else { "input" },
            message: e.to_string(),
            file: None,
            line: None,
            column: None,
            token: None,
        }
    }

    pub fn to_json(&self, command: &str) -> Value {
        let mut obj = Map::new();
        obj.insert("exit".into(), json!(self.exit));
        obj.insert("kind".into(), json!(self.kind));
        obj.insert("message".into(), json!(self.message));
        if let Some(f) = &self.file {
            obj.insert("file".into(), json!(f));
        }
        if let Some(l) = self.line {
            obj.insert("line".into(), json!(l));
        }
        if let Some(c) = self.column {
            obj.insert("column".into(), json!(c));
        }
        if let Some(t) = &self.token {
            obj.insert("token".into(), json!(t));
        }
        json!({ "command": command, "error": Value::Object(obj) })
    }
}

/// Lowercase-hex SHA-256 of raw file bytes, embedded in every report
/// so a run pins down exactly what it read.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

pub fn inputs_json(inputs: &[(String, String)]) -> Value {
    Value::Array(
        inputs
            .iter()
            .map(|(path, hash)| json!({ "path": path, "sha256": hash }))
            .collect(),
    )
}

/// The single top-level object every command prints.
pub fn envelope(
    command: &str,
    inputs: &[(String, String)],
    seed: u64,
    options: Value,
    result: Value,
    timing_ms: Option<u128>,
) -> Value {
    let mut obj = Map::new();
    obj.insert("command".into(), json!(command));
    obj.insert("inputs".into(), inputs_json(inputs));
    obj.insert("seed".into(), json!(seed));
    obj.insert("options".into(), options);
    obj.insert("result".into(), result);
    if let Some(ms) = timing_ms {
        obj.insert("timing_ms".into(), json!(ms as u64));
    }
    Value::Object(obj)
}

pub fn point_json(p: &[GaussRat]) -> Value {
    json!(gauss::fmt_point(p))
}

pub fn chain_json(chain: &ChainPoint) -> Value {
    json!({
        "points": chain.points.iter().map(|p| point_json(p)).collect::<Vec<_>>(),
    })
}

pub fn matrix_json(m: &Matrix) -> Value {
    let rows: Vec<Vec<String>> = (0..m.nrows())
        .map(|i| m.row(i).iter().map(gauss::fmt_gauss).collect())
        .collect();
    json!(rows)
}

pub fn opt_u32_json(v: Option<u32>) -> Value {
    match v {
        Some(x) => json!(x),
        None => Value::Null,
    }
}

/// Render the report; the trailing newline is part of the byte
/// contract.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serialization cannot fail");
    s.push('\n');
    s
}
