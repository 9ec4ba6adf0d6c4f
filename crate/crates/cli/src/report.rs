//! Tabular results and their CSV form.

use std::io::Write;

use oiglab::Rational;

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Correctly determined infeasible, with a certificate in the output.
    Infeasible,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Infeasible => 2,
        }
    }
}

/// A CSV table plus a human-readable summary.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: String,
    pub status: Status,
    /// A document written instead of the table (for example an encoded FDS).
    pub document: Option<String>,
}

impl Report {
    pub fn new(header: &[&str]) -> Self {
        Report { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new(), summary: String::new(), status: Status::Ok, document: None }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Appends a column holding the same value in every row.
    pub fn with_column(mut self, name: &str, value: &str) -> Self {
        self.header.push(name.into());
        for r in &mut self.rows {
            r.push(value.into());
        }
        self
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io { path: "csv".into(), message: e.to_string() };
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        w.flush().map_err(|e| CliError::Io { path: "csv".into(), message: e.to_string() })?;
        let bytes = w.into_inner().map_err(|e| CliError::Io { path: "csv".into(), message: e.to_string() })?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
    }

    /// The document if there is one, the CSV table otherwise.
    pub fn write_to(&self, out: &mut dyn Write) -> CliResult<()> {
        let text = match &self.document {
            Some(d) => d.clone(),
            None => self.to_csv()?,
        };
        out.write_all(text.as_bytes()).map_err(|e| CliError::Io { path: "output".into(), message: e.to_string() })
    }
}

/// `[numerator, denominator, decimal]` columns for an exact value.
pub fn exact(r: Rational) -> Vec<String> {
    vec![r.numer().to_string(), r.denom().to_string(), decimal(r)]
}

/// Six decimal places, for readers; the exact columns are authoritative.
pub fn decimal(r: Rational) -> String {
    format!("{:.6}", *r.numer() as f64 / *r.denom() as f64)
}

/// Three empty cells in place of an exact value.
pub fn blank() -> Vec<String> {
    vec![String::new(); 3]
}

pub fn joined<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}
