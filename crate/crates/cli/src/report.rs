use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

/// Machine-readable result of one command.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub args: Value,
    pub results: Map<String, Value>,
    pub tolerances: BTreeMap<String, f64>,
    pub verdicts: BTreeMap<String, bool>,
    pub wall_time_ms: f64,
}

impl Report {
    pub fn new(command: &str, args: Value) -> Self {
        Self {
            command: command.to_string(),
            args,
            results: Map::new(),
            tolerances: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            wall_time_ms: 0.0,
        }
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.results.insert(key.to_string(), v);
        self
    }

    pub fn tolerance(&mut self, key: &str, value: f64) -> &mut Self {
        self.tolerances.insert(key.to_string(), value);
        self
    }

    pub fn verdict(&mut self, key: &str, value: bool) -> &mut Self {
        self.verdicts.insert(key.to_string(), value);
        self
    }

    pub fn all_verdicts(&self) -> bool {
        self.verdicts.values().all(|&v| v)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command      {}", self.command);
        let width = self
            .results
            .keys()
            .chain(self.tolerances.keys())
            .chain(self.verdicts.keys())
            .map(String::len)
            .max()
            .unwrap_or(0);
        if !self.results.is_empty() {
            let _ = writeln!(out, "\n[results]");
            for (k, v) in &self.results {
                let _ = writeln!(out, "{k:<width$}  {}", compact(v));
            }
        }
        if !self.tolerances.is_empty() {
            let _ = writeln!(out, "\n[tolerances]");
            for (k, v) in &self.tolerances {
                let _ = writeln!(out, "{k:<width$}  {v:e}");
            }
        }
        if !self.verdicts.is_empty() {
            let _ = writeln!(out, "\n[verdicts]");
            for (k, v) in &self.verdicts {
                let _ = writeln!(out, "{k:<width$}  {}", if *v { "pass" } else { "FAIL" });
            }
        }
        let _ = writeln!(out, "\nwall time    {:.3} ms", self.wall_time_ms);
        out
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
