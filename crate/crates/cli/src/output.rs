use std::io::Write;

use anyhow::Context;
use serde::Serialize;

use crate::config::{Format, RunConfig};

pub const SCHEMA: &str = "moment-forge/1";

/// Rows for the CSV form of a result.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// A command's result in both output forms.
pub struct Output {
    pub command: &'static str,
    pub json: serde_json::Value,
    pub table: Table,
    /// whether every check in the result passed
    pub pass: bool,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: &'static str,
    command: &'static str,
    config: &'a RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    seconds: Option<f64>,
    result: &'a serde_json::Value,
}

pub fn render(out: &Output, config: &RunConfig, seconds: Option<f64>) -> anyhow::Result<Vec<u8>> {
    match config.format {
        Format::Json => {
            let env = Envelope {
                schema: SCHEMA,
                command: out.command,
                config,
                seconds,
                result: &out.json,
            };
            let mut bytes = serde_json::to_vec_pretty(&env)?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&out.table.header)?;
            for r in &out.table.rows {
                w.write_record(r)?;
            }
            Ok(w.into_inner().context("flushing csv")?)
        }
    }
}

pub fn emit(bytes: &[u8], config: &RunConfig) -> anyhow::Result<()> {
    match &config.output {
        Some(path) => std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

pub fn num(x: f64) -> String {
    format!("{x:e}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}
