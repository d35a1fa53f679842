//! Row-oriented results rendered as an aligned table, CSV or JSON.
//!
//! Floats are written with Rust's shortest round-trip formatting, so parsing
//! a CSV field gives back the exact `f64`.

use std::io::{self, Write};

use serde_json::{Map, Value};

use crate::args::Format;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => x.to_string(),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(n) => Value::from(*n),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Int(n)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

/// Named columns, rows of cells, and free-text summary lines.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub comments: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), ..Self::default() }
    }

    /// Single-row table from `(column, value)` pairs.
    pub fn record(fields: Vec<(&str, Cell)>) -> Self {
        let (columns, row): (Vec<_>, Vec<_>) = fields.into_iter().map(|(k, v)| (k.to_string(), v)).unzip();
        Self { columns, rows: vec![row], comments: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn comment(mut self, line: impl Into<String>) -> Self {
        self.comments.push(line.into());
        self
    }

    pub fn write<W: Write + ?Sized>(&self, format: Format, w: &mut W) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Table => self.write_table(w),
            Format::Json => self.write_json(w),
        }
    }

    fn write_csv<W: Write + ?Sized>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Cell::render).collect();
            writeln!(w, "{}", fields.join(","))?;
        }
        for c in &self.comments {
            writeln!(w, "# {c}")?;
        }
        Ok(())
    }

    fn write_table<W: Write + ?Sized>(&self, w: &mut W) -> io::Result<()> {
        if self.rows.len() == 1 {
            let width = self.columns.iter().map(String::len).max().unwrap_or(0);
            for (k, v) in self.columns.iter().zip(&self.rows[0]) {
                writeln!(w, "{k:<width$}  {}", v.render())?;
            }
        } else {
            let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::render).collect()).collect();
            let widths: Vec<usize> = self
                .columns
                .iter()
                .enumerate()
                .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
                .collect();
            let line = |fields: Vec<&str>| {
                fields
                    .iter()
                    .zip(&widths)
                    .map(|(f, &wd)| format!("{f:>wd$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(w, "{}", line(self.columns.iter().map(String::as_str).collect()))?;
            for r in &cells {
                writeln!(w, "{}", line(r.iter().map(String::as_str).collect()))?;
            }
        }
        for c in &self.comments {
            writeln!(w, "# {c}")?;
        }
        Ok(())
    }

    fn write_json<W: Write + ?Sized>(&self, w: &mut W) -> io::Result<()> {
        let objects: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let m: Map<String, Value> = self.columns.iter().cloned().zip(r.iter().map(Cell::to_json)).collect();
                Value::Object(m)
            })
            .collect();
        let value = if objects.len() == 1 { objects.into_iter().next().unwrap() } else { Value::Array(objects) };
        serde_json::to_writer_pretty(&mut *w, &value)?;
        writeln!(w)
    }
}
