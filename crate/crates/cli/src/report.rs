//! Command reports: a serde structure for `--format machine` and a plain text
//! rendering for people.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use gma_core::{ConditionResult, LinearMap, Matrix, Scalar, Violation};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Machine,
}

/// A matrix written column by column, entries as exact scalar strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEntry {
    pub rows: usize,
    pub columns: Vec<Vec<String>>,
}

impl MapEntry {
    pub fn from_matrix(m: &Matrix) -> Self {
        MapEntry {
            rows: m.rows(),
            columns: (0..m.cols())
                .map(|j| m.column(j).iter().map(Scalar::to_string).collect())
                .collect(),
        }
    }

    pub fn from_map(f: &LinearMap) -> Self {
        Self::from_matrix(f.matrix())
    }

    pub fn from_vector(v: &[Scalar]) -> Self {
        MapEntry {
            rows: v.len(),
            columns: vec![v.iter().map(Scalar::to_string).collect()],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionEntry {
    pub id: String,
    pub statement: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_clause: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

impl From<&ConditionResult> for ConditionEntry {
    fn from(c: &ConditionResult) -> Self {
        ConditionEntry {
            id: c.id.clone(),
            statement: c.statement.clone(),
            holds: c.holds,
            failed_clause: c.failed_clause.clone(),
            witness: c.witness.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationEntry {
    pub identity: String,
    pub statement: String,
    pub indices: Vec<usize>,
}

impl From<&Violation> for ViolationEntry {
    fn from(v: &Violation) -> Self {
        ViolationEntry {
            identity: v.identity.code().to_string(),
            statement: v.identity.to_string(),
            indices: v.indices.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub dimensions: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub facts: BTreeMap<String, bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conditions: Vec<ConditionEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<ViolationEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, MapEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<MapEntry>>,
}

impl Report {
    pub fn new(command: impl Into<String>, verdict: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            verdict: verdict.into(),
            ..Default::default()
        }
    }

    pub fn dimension(&mut self, key: &str, value: usize) -> &mut Self {
        self.dimensions.insert(key.to_string(), value);
        self
    }

    pub fn fact(&mut self, key: &str, value: bool) -> &mut Self {
        self.facts.insert(key.to_string(), value);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Machine => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {}", self.command, self.verdict);
        if let Some(r) = &self.reason {
            let _ = writeln!(out, "  reason: {r}");
        }
        if let Some(f) = &self.field {
            let _ = writeln!(out, "  field: {f}");
        }
        for (k, v) in &self.dimensions {
            let _ = writeln!(out, "  dim {k} = {v}");
        }
        for (k, v) in &self.facts {
            let _ = writeln!(out, "  {k}: {}", if *v { "yes" } else { "no" });
        }
        for c in &self.conditions {
            let mark = if c.holds { "ok  " } else { "FAIL" };
            let _ = write!(out, "  [{mark}] ({}) {}", c.id, c.statement);
            if let Some(clause) = &c.failed_clause {
                let _ = write!(out, "; fails: {clause}");
            }
            if let Some(w) = &c.witness {
                let _ = write!(out, " at {w:?}");
            }
            out.push('\n');
        }
        for v in &self.violations {
            let _ = writeln!(out, "  violated {} ({}) at {:?}", v.identity, v.statement, v.indices);
        }
        for (name, m) in &self.maps {
            let _ = writeln!(out, "  {name}:");
            write_matrix(&mut out, m);
        }
        if let Some(basis) = &self.basis {
            for (i, m) in basis.iter().enumerate() {
                let _ = writeln!(out, "  basis[{i}]:");
                write_matrix(&mut out, m);
            }
        }
        out
    }
}

fn write_matrix(out: &mut String, m: &MapEntry) {
    let width = m.columns.iter().flatten().map(String::len).max().unwrap_or(1);
    for r in 0..m.rows {
        let row: Vec<String> = m.columns.iter().map(|c| format!("{:>width$}", c[r])).collect();
        let _ = writeln!(out, "    [{}]", row.join(" "));
    }
}
