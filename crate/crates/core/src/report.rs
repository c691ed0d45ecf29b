//! Tabular sweep output and the numeric formatting conventions shared by all
//! machine-readable output.

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Serialize, Serializer};
use serde_json::Value;

pub(crate) fn ser_display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// A real as a JSON number with 12 significant digits (`null` if not finite).
pub fn real(x: f64) -> Value {
    serde_json::Number::from_f64(round12(x))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioSummary {
    pub min: Value,
    pub max: Value,
    pub mean: Value,
    pub count: usize,
}

/// Rows of a sweep plus min/max/mean of each real-valued ratio column.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub summary: BTreeMap<String, RatioSummary>,
}

impl SweepReport {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        SweepReport {
            name: name.to_string(),
            params: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Fills the summary for the named real-valued columns; non-numeric cells
    /// are skipped. Accumulation runs in row order.
    pub fn summarize(&mut self, ratio_columns: &[&str]) {
        for &name in ratio_columns {
            let Some(idx) = self.column(name) else { continue };
            let vals: Vec<f64> = self.rows.iter().filter_map(|r| r[idx].as_f64()).collect();
            if vals.is_empty() {
                continue;
            }
            let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mean = crate::harmonic::CompensatedSum::sum(vals.iter().copied()) / vals.len() as f64;
            self.summary.insert(
                name.to_string(),
                RatioSummary {
                    min: real(min),
                    max: real(max),
                    mean: real(mean),
                    count: vals.len(),
                },
            );
        }
    }
}
