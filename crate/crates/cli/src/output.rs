use duorat_core::report::{round12, SweepReport};
use serde_json::{Map, Value};

use crate::args::Format;

/// A command result: the canonical JSON document and, for list-like
/// results, the table used by the CSV and pretty renderings.
pub struct Output {
    pub doc: Value,
    pub table: Option<Table>,
}

pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Output {
    pub fn doc(doc: Value) -> Self {
        Output { doc, table: None }
    }

    pub fn with_table(doc: Value, columns: &[&str], rows: Vec<Vec<Value>>) -> Self {
        Output {
            doc,
            table: Some(Table {
                columns: columns.iter().map(|c| c.to_string()).collect(),
                rows,
            }),
        }
    }

    pub fn report(r: SweepReport) -> Self {
        let table = Table {
            columns: r.columns.clone(),
            rows: r.rows.clone(),
        };
        Output {
            doc: serde_json::to_value(&r).expect("report serializes"),
            table: Some(table),
        }
    }

    pub fn render(self, format: Format) -> String {
        let doc = normalize(self.doc);
        let table = self.table.map(|t| Table {
            columns: t.columns,
            rows: t.rows.into_iter().map(|r| r.into_iter().map(normalize).collect()).collect(),
        });
        match format {
            Format::Json => {
                let mut s = serde_json::to_string(&doc).expect("json");
                s.push('\n');
                s
            }
            Format::Csv => {
                let table = table.unwrap_or_else(|| single_row(&doc));
                to_csv(&table)
            }
            Format::Pretty => match table {
                Some(t) => aligned(&t),
                None => {
                    let mut s = serde_json::to_string_pretty(&doc).expect("json");
                    s.push('\n');
                    s
                }
            },
        }
    }
}

/// Rounds every non-integer number to 12 significant digits.
pub fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().unwrap_or(f64::NAN));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

fn single_row(doc: &Value) -> Table {
    match doc {
        Value::Object(map) => Table {
            columns: map.keys().cloned().collect(),
            rows: vec![map.values().cloned().collect()],
        },
        other => Table {
            columns: vec!["value".into()],
            rows: vec![vec![other.clone()]],
        },
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        other => serde_json::to_string(other).expect("json"),
    }
}

fn to_csv(t: &Table) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&t.columns).expect("in-memory write");
    for r in &t.rows {
        w.write_record(r.iter().map(cell)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

fn aligned(t: &Table) -> String {
    let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
    let mut widths: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
    for r in &cells {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |items: &mut dyn Iterator<Item = &String>| {
        let parts: Vec<String> = items
            .zip(&widths)
            .map(|(s, w)| format!("{s:>w$}", w = *w))
            .collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(&mut t.columns.iter());
    for r in &cells {
        out += &line(&mut r.iter());
    }
    out
}

/// A JSON object from `(key, value)` pairs; keys come out sorted.
pub fn obj(pairs: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}
