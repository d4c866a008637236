//! Tabular command output: CSV with a `#`-prefixed provenance header.

use std::fmt;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(x) => write!(f, "{x}"),
            Cell::Int(x) => write!(f, "{x}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Empty => Ok(()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

/// What is needed to re-run the command that produced a table.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Provenance {
    pub command: String,
    pub seed: Option<u64>,
    pub scenario_hash: Option<String>,
    /// Free-form lines such as warnings or failed fits.
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
    pub provenance: Provenance,
}

impl ResultTable {
    pub fn new<S: Into<String>>(
        columns: impl IntoIterator<Item = S>,
        provenance: Provenance,
    ) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            provenance,
        }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::InvalidParameter(format!(
                "row has {} cells, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric cells of the named column; non-numeric cells give `None`.
    pub fn numeric_column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.column_index(name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[i] {
                    Cell::Num(x) => Some(x),
                    Cell::Int(x) => Some(x as f64),
                    _ => None,
                })
                .collect(),
        )
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        let p = &self.provenance;
        writeln!(out, "# tool: {TOOL_VERSION}")?;
        writeln!(out, "# command: {}", p.command)?;
        if let Some(seed) = p.seed {
            writeln!(out, "# seed: {seed}")?;
        }
        if let Some(hash) = &p.scenario_hash {
            writeln!(out, "# scenario_sha256: {hash}")?;
        }
        for note in &p.notes {
            writeln!(out, "# {note}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string()))
                .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 output")
    }

    /// Writes the CSV to a temporary file next to `path` and renames it into
    /// place, so readers never see a partial table.
    pub fn write_atomic(&self, path: &Path) -> Result<()> {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        self.write_to(tmp.as_file_mut())?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidParameter(format!("csv: {other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultTable {
        let mut t = ResultTable::new(
            ["x", "label", "maybe"],
            Provenance {
                command: "demo --flag".into(),
                seed: Some(7),
                scenario_hash: Some("ab".into()),
                notes: vec!["note".into()],
            },
        );
        t.push(vec![0.5.into(), "a,b".into(), None::<f64>.into()])
            .unwrap();
        t.push(vec![3u64.into(), "plain".into(), Some(1.25).into()])
            .unwrap();
        t
    }

    #[test]
    fn renders_header_and_quotes() {
        let s = sample().to_csv_string();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], format!("# tool: {TOOL_VERSION}"));
        assert_eq!(lines[1], "# command: demo --flag");
        assert_eq!(lines[2], "# seed: 7");
        assert_eq!(lines[3], "# scenario_sha256: ab");
        assert_eq!(lines[4], "# note");
        assert_eq!(lines[5], "x,label,maybe");
        assert_eq!(lines[6], "0.5,\"a,b\",");
        assert_eq!(lines[7], "3,plain,1.25");
    }

    #[test]
    fn rejects_ragged_rows() {
        let mut t = sample();
        assert!(t.push(vec![1.0.into()]).is_err());
        assert_eq!(t.rows().len(), 2);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        std::fs::write(&path, "old").unwrap();
        sample().write_atomic(&path).unwrap();
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            sample().to_csv_string()
        );
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn numeric_column_access() {
        let t = sample();
        assert_eq!(t.numeric_column("x").unwrap(), vec![Some(0.5), Some(3.0)]);
        assert_eq!(t.numeric_column("maybe").unwrap(), vec![None, Some(1.25)]);
        assert!(t.numeric_column("nope").is_none());
    }
}
