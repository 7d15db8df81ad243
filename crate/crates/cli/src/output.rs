use std::fs;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use gagliardo::report::{to_json, Diagnostics, Report};
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

/// Writes the JSON envelope, or the CSV rows, to `path` or stdout.
pub fn emit<C: Serialize, R: Serialize, Row: Serialize>(
    config: &C,
    results: &R,
    rows: &[Row],
    format: Format,
    path: Option<&Path>,
) -> Result<(), CliError> {
    let text = match format {
        Format::Json => {
            let report = Report::new(config, results, Diagnostics::from_cache(vec![]));
            let mut s = to_json(&report).map_err(|e| CliError::Output(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row).map_err(|e| CliError::Output(e.to_string()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Output(e.to_string()))?)
                .expect("csv of UTF-8 fields")
        }
    };
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Output(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Output(e.to_string())),
    }
}
