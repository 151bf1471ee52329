//! Rendering of command results as JSON, CSV or text.

use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A command result with its available renderings.
pub struct Output {
    json: String,
    csv: Option<String>,
    text: Option<String>,
    default: Format,
    /// The command ran but its verification did not pass.
    pub failed: bool,
}

impl Output {
    pub fn json<T: Serialize>(value: &T) -> Self {
        let json = serde_json::to_string(value).expect("results serialize to JSON");
        Self { json, csv: None, text: None, default: Format::Json, failed: false }
    }

    /// Adds a CSV rendering and makes it the default.
    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self.default = Format::Csv;
        self
    }

    pub fn with_text(mut self, text: String) -> Self {
        self.text = Some(text);
        self
    }

    pub fn prefer_text(mut self) -> Self {
        self.default = Format::Text;
        self
    }

    pub fn failing(mut self) -> Self {
        self.failed = true;
        self
    }

    pub fn emit(self, format: Option<Format>, seed: u64, out: Option<&Path>) -> Result<(), String> {
        let body = match format.unwrap_or(self.default) {
            Format::Json => format!("{}\n", self.json),
            Format::Csv => self.csv.ok_or("this command has no CSV output")?,
            Format::Text => format!("# seed {seed}\n{}", self.text.unwrap_or_else(|| format!("{}\n", self.json))),
        };
        match out {
            Some(path) => std::fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display())),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(body.as_bytes()).and_then(|()| stdout.flush()).map_err(|e| e.to_string())
            }
        }
    }
}
