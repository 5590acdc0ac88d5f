//! Structured check outcomes and deterministic CSV tables.

use serde::Serialize;

/// Record of one verification: identity name, sample statistics, worst
/// residual against its tolerance, and the verdict.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub pass: bool,
    pub max_residual: f64,
    pub tolerance: f64,
    pub samples: usize,
    /// Named scalar statistics (fit slopes, bounds, link slacks, ...).
    pub details: Vec<(String, f64)>,
}

impl VerificationReport {
    pub fn new(
        check: impl Into<String>,
        pass: bool,
        max_residual: f64,
        tolerance: f64,
        samples: usize,
    ) -> Self {
        Self { check: check.into(), pass, max_residual, tolerance, samples, details: Vec::new() }
    }

    pub fn with(mut self, key: impl Into<String>, value: f64) -> Self {
        self.details.push((key.into(), value));
        self
    }

    pub fn detail(&self, key: &str) -> Option<f64> {
        self.details.iter().find(|(k, _)| k == key).map(|&(_, v)| v)
    }
}

/// A plain table with deterministic CSV rendering. No timestamps ever appear
/// in table bodies; run metadata lives in the JSON summary.
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch in table {}", self.name);
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Fixed-precision float formatting so identical runs emit identical bytes.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        "0.0".to_string()
    } else {
        format!("{x:.12e}")
    }
}

pub fn fmt_bool(b: bool) -> String {
    if b { "true".into() } else { "false".into() }
}

/// Reports-as-table, the per-check CSV shape shared by all suites.
pub fn reports_table(name: &str, reports: &[VerificationReport]) -> Table {
    let mut t = Table::new(name, &["check", "pass", "max_residual", "tolerance", "samples"]);
    for r in reports {
        t.push(vec![
            r.check.clone(),
            fmt_bool(r.pass),
            fmt_f64(r.max_residual),
            fmt_f64(r.tolerance),
            r.samples.to_string(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rendering_is_stable() {
        let mut t = Table::new("demo", &["a", "b"]);
        t.push(vec![fmt_f64(1.5), fmt_bool(true)]);
        assert_eq!(t.to_csv(), "a,b\n1.500000000000e0,true\n");
    }
}
