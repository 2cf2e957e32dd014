//! CSV / JSON emission.
//!
//! CSV is comma-separated with a header row, `\n` line endings and `.` as the
//! decimal point. JSON is a single array of objects with the same fields.
//! Output is rendered in memory first so a failed write never leaves half a
//! table behind on stdout.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Destination {
    #[default]
    Stdout,
    File(PathBuf),
}

/// Where and how a command writes its table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputEnvelope {
    pub format: Format,
    pub destination: Destination,
    /// Significant digits for decimal renderings of exact values.
    pub digits: usize,
}

pub const DEFAULT_DIGITS: usize = 10;

impl Default for OutputEnvelope {
    fn default() -> Self {
        Self {
            format: Format::Csv,
            destination: Destination::Stdout,
            digits: DEFAULT_DIGITS,
        }
    }
}

impl OutputEnvelope {
    pub fn emit<T: Serialize>(&self, rows: &[T]) -> Result<(), CliError> {
        let bytes = render(self.format, rows)?;
        match &self.destination {
            Destination::Stdout => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(&bytes)?;
                stdout.flush()?;
            }
            Destination::File(path) => std::fs::write(path, &bytes).map_err(|e| {
                CliError::Io(std::io::Error::new(
                    e.kind(),
                    format!("{}: {e}", path.display()),
                ))
            })?,
        }
        Ok(())
    }
}

pub fn render<T: Serialize>(format: Format, rows: &[T]) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => {
            let mut writer = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            for row in rows {
                writer.serialize(row)?;
            }
            writer
                .into_inner()
                .map_err(|e| CliError::Io(e.into_error()))
        }
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(rows)?;
            out.push(b'\n');
            Ok(out)
        }
    }
}
