// SPDX-License-Identifier: Apache-2.0

//! CSV tables whose header cells carry units as `name[unit]`. Rational
//! quantities get a 12-digit decimal column and an exact `_exact` column.

use vetolab::{Extended, Rational};

use crate::numeric::{decimal, decimal_ext};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn push(&mut self, row: Row) {
        if self.rows.is_empty() && self.columns.is_empty() {
            self.columns = row.columns;
        } else {
            assert_eq!(
                self.columns, row.columns,
                "rows of one table must share columns"
            );
        }
        self.rows.push(row.cells);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Index of the column whose header starts with `name[`.
    pub fn column(&self, name: &str) -> Option<usize> {
        let prefix = format!("{name}[");
        self.columns.iter().position(|c| c.starts_with(&prefix))
    }
}

/// One row under construction; columns are named as cells are added.
#[derive(Clone, Debug, Default)]
pub struct Row {
    columns: Vec<String>,
    cells: Vec<String>,
}

impl Row {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn text(mut self, name: &str, unit: &str, value: impl ToString) -> Self {
        self.columns.push(format!("{name}[{unit}]"));
        self.cells.push(value.to_string());
        self
    }

    pub fn rational(self, name: &str, unit: &str, value: &Rational) -> Self {
        self.text(name, unit, decimal(value))
            .text(&format!("{name}_exact"), unit, value)
    }

    pub fn extended(self, name: &str, unit: &str, value: &Extended) -> Self {
        self.text(name, unit, decimal_ext(value))
            .text(&format!("{name}_exact"), unit, value)
    }
}
