//! Machine-readable command reports.
//!
//! Reports serialize deterministically: object keys are sorted (the default
//! `serde_json` map is a BTreeMap), matrices are row-major arrays, and any
//! integer beyond 2^53 is emitted as a decimal string so consumers that read
//! JSON numbers as doubles never lose precision.

use crate::linalg::{Mat, Rat};
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

/// Largest integer magnitude emitted as a bare JSON number.
const SAFE_INT: i64 = 1 << 53;

/// One report per CLI invocation.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub results: Value,
    pub provenance: Vec<Provenance>,
}

/// Ties a result field to the mathematical statement backing it, or to the
/// marker `derived` for values produced by this artifact's own computation.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub field: String,
    pub statement: String,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            results: Value::Object(Map::new()),
            provenance: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn result(&mut self, key: &str, value: Value) -> &mut Self {
        if let Value::Object(map) = &mut self.results {
            map.insert(key.to_string(), value);
        }
        self
    }

    pub fn cite(&mut self, field: &str, statement: &str) -> &mut Self {
        self.provenance.push(Provenance {
            field: format!("results.{field}"),
            statement: statement.to_string(),
        });
        self
    }

    /// Deterministic pretty JSON (sorted keys, stable formatting).
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// An integer as JSON, falling back to a decimal string beyond 2^53.
pub fn json_int(v: i64) -> Value {
    if v.abs() <= SAFE_INT {
        json!(v)
    } else {
        json!(v.to_string())
    }
}

pub fn json_opt_int(v: Option<i64>) -> Value {
    v.map_or(Value::Null, json_int)
}

/// Row-major integer matrix.
pub fn json_mat(m: &Mat<i64>) -> Value {
    Value::Array(
        m.to_rows()
            .into_iter()
            .map(|row| Value::Array(row.into_iter().map(json_int).collect()))
            .collect(),
    )
}

/// Rational rendered exactly: `"n"` or `"n/d"`.
pub fn json_rat(r: Rat) -> Value {
    if r.is_integer() {
        json_int(r.to_integer())
    } else {
        json!(format!("{}/{}", r.numer(), r.denom()))
    }
}

pub fn json_rat_mat(m: &Mat<Rat>) -> Value {
    Value::Array(
        m.to_rows()
            .into_iter()
            .map(|row| Value::Array(row.into_iter().map(json_rat).collect()))
            .collect(),
    )
}
