//! Flat key/value reports with a deterministic key order.

use std::collections::BTreeMap;

use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Default)]
pub struct Report {
    entries: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Self::default();
        r.set("command", command);
        r
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.entries.insert(key.to_string(), value.into());
        self
    }

    /// Non-finite numbers are written as strings so the JSON stays valid.
    pub fn num(&mut self, key: &str, x: f64) -> &mut Self {
        let v = if x.is_finite() { Value::from(x) } else { Value::from(x.to_string()) };
        self.entries.insert(key.to_string(), v);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.entries).expect("map of plain values");
                s.push('\n');
                s
            }
            Format::Text => {
                let width = self.entries.keys().map(String::len).max().unwrap_or(0);
                self.entries
                    .iter()
                    .map(|(k, v)| format!("{k:<width$}  {}\n", text(v)))
                    .collect()
            }
        }
    }
}

fn text(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format!("{x:.6e}"),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn complex_list(values: &[num_complex::Complex64]) -> Value {
    Value::from(values.iter().map(|z| Value::from(vec![z.re, z.im])).collect::<Vec<_>>())
}
