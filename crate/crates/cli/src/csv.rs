use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(&'static str),
}

/// Scientific notation with 12 significant digits.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else if v == 0.0 {
        // no negative zero in the output
        format!("{:.11e}", 0.0)
    } else {
        format!("{v:.11e}")
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format_number(*v),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => (*s).to_string(),
        }
    }
}

/// A header plus homogeneous rows.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Writes `table` to `dir/name` and returns the path.
pub fn emit_csv(table: &Table, dir: &Path, name: &str) -> CliResult<PathBuf> {
    if let Some(bad) = table.rows.iter().position(|r| r.len() != table.header.len()) {
        return Err(CliError::Invalid(format!("{name}: row {bad} does not match the header")));
    }
    let path = dir.join(name);
    fs::write(&path, table.render()).map_err(|source| CliError::Io { path: path.clone(), source })?;
    Ok(path)
}
