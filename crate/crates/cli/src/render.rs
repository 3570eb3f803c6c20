//! Deterministic text tables and JSON value helpers. Identical inputs and
//! flags produce byte-identical output: no timestamps, no hash-ordered
//! iteration.

use rankprob_core::rational::{format_decimal, format_fraction, Rational};
use serde_json::{json, Value};

/// Renders a rational as `fraction (decimal)`, the form used in every
/// table cell.
pub fn cell(value: &Rational, places: usize) -> String {
    format!(
        "{} ({})",
        format_fraction(value),
        format_decimal(value, places)
    )
}

/// A rational as a JSON object with exact and rounded forms.
pub fn json_number(value: &Rational, places: usize) -> Value {
    json!({
        "fraction": format_fraction(value),
        "decimal": format_decimal(value, places),
    })
}

/// Plain-text table with left-aligned, width-padded columns.
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(headers: I) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row<S: Into<String>, I: IntoIterator<Item = S>>(&mut self, cells: I) {
        let cells: Vec<String> = cells.into_iter().map(Into::into).collect();
        assert_eq!(cells.len(), self.headers.len(), "ragged table row");
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(String::len).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        let mut push_line = |cells: &[String]| {
            let mut line = String::new();
            for (i, (cell, width)) in cells.iter().zip(&widths).enumerate() {
                if i > 0 {
                    line.push_str("  ");
                }
                line.push_str(cell);
                if i + 1 < cells.len() {
                    line.push_str(&" ".repeat(width - cell.len()));
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        };
        push_line(&self.headers);
        for row in &self.rows {
            push_line(row);
        }
        out
    }
}
