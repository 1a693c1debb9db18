use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::args::{Format, OutputArgs};
use crate::error::CliError;

/// A rendered document, either structured or tabular.
pub struct Document {
    pub json: serde_json::Value,
    pub table: Table,
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            // 17 significant digits round-trip every double
            Cell::Num(x) if x.is_finite() => format!("{x:.16e}"),
            Cell::Num(_) => "NaN".into(),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

pub fn to_json(value: &impl Serialize) -> serde_json::Value {
    serde_json::to_value(value).expect("output records serialize")
}

/// Writes the document in the requested format to `--out` (via a rename) or stdout.
pub fn emit(doc: &Document, args: &OutputArgs) -> Result<(), CliError> {
    let text = match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&doc.json).expect("json values serialize");
            s.push('\n');
            s
        }
        Format::Csv => doc.table.render(),
    };
    match &args.out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(CliError::Io)
        }
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(CliError::Io)?;
    tmp.write_all(bytes).map_err(CliError::Io)?;
    tmp.as_file().sync_all().map_err(CliError::Io)?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, -6.0 / (std::f64::consts::PI.powi(2)), 1e-300, 123456789.12345679] {
            let s = Cell::Num(x).render();
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(Cell::Num(f64::NAN).render(), "NaN");
    }

    #[test]
    fn csv_quotes_text() {
        assert_eq!(Cell::Text("a,b".into()).render(), "\"a,b\"");
        let mut t = Table::new(&["x", "y"]);
        t.rows.push(vec![Cell::Int(1), Cell::Bool(true)]);
        assert_eq!(t.render(), "x,y\n1,true\n");
    }

    #[test]
    fn atomic_write_replaces_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        std::fs::write(&path, "old").unwrap();
        write_atomic(&path, b"new").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "new");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
