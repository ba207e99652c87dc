//! Report assembly and rendering.
//!
//! A report is an ordered list of dotted keys with text values plus an
//! optional numeric table. The human rendering prints the keys as `#`
//! comment lines followed by CSV; the structured rendering prints every
//! key, including table rows, as `key = value`.

use std::fmt::Write as _;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, String)>,
    table: Option<Table>,
}

/// Seventeen significant digits, `.` separator, no locale.
pub fn csv_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Shortest round-trip form, switching to exponent notation for very
/// small or very large magnitudes.
pub fn number(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

pub fn list(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| number(*v)).collect();
    format!("[{}]", parts.join(", "))
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Self::default();
        r.put("command", command);
        r
    }

    pub fn put(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_owned(), value.to_string()));
        self
    }

    pub fn table(&mut self, columns: Vec<String>) -> &mut Table {
        self.table.insert(Table { columns, rows: Vec::new() })
    }

    pub fn render(&self, structured: bool) -> String {
        let mut out = String::new();
        if structured {
            for (k, v) in &self.entries {
                let _ = writeln!(out, "{k} = {v}");
            }
            if let Some(t) = &self.table {
                let _ = writeln!(out, "table.columns = {}", t.columns.join(", "));
                let _ = writeln!(out, "table.rows = {}", t.rows.len());
                for (i, row) in t.rows.iter().enumerate() {
                    let cells: Vec<String> = row.iter().map(|x| csv_number(*x)).collect();
                    let _ = writeln!(out, "table.row.{i} = {}", cells.join(", "));
                }
            }
        } else {
            for (k, v) in &self.entries {
                let _ = writeln!(out, "# {k}: {v}");
            }
            if let Some(t) = &self.table {
                let _ = writeln!(out, "{}", t.columns.join(","));
                for row in &t.rows {
                    let cells: Vec<String> = row.iter().map(|x| csv_number(*x)).collect();
                    let _ = writeln!(out, "{}", cells.join(","));
                }
            }
        }
        out
    }
}
