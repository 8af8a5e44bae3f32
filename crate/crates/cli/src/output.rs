use serde::Serialize;
use std::io::Write;
use std::path::Path;

use crate::CliError;

/// A rendered result with an optional JSON sidecar written next to it.
pub struct Artifact {
    pub body: String,
    pub sidecar: Option<serde_json::Value>,
}

impl Artifact {
    pub fn csv(body: String) -> Self {
        Self { body, sidecar: None }
    }

    pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<Self, CliError> {
        let mut body = serde_json::to_string_pretty(value).map_err(|e| CliError::Numeric(e.to_string()))?;
        body.push('\n');
        Ok(Self { body, sidecar: None })
    }

    pub fn with_sidecar(mut self, v: serde_json::Value) -> Self {
        self.sidecar = Some(v);
        self
    }

    /// Writes to `out` (sidecar at `out.json`), or the body to stdout.
    pub fn write(&self, out: Option<&Path>) -> Result<(), CliError> {
        let io = |e: std::io::Error| CliError::Config(format!("cannot write output: {e}"));
        match out {
            Some(path) => {
                std::fs::write(path, &self.body).map_err(io)?;
                if let Some(s) = &self.sidecar {
                    let mut side = path.as_os_str().to_owned();
                    side.push(".json");
                    let mut text = serde_json::to_string_pretty(s).map_err(|e| CliError::Numeric(e.to_string()))?;
                    text.push('\n');
                    std::fs::write(side, text).map_err(io)?;
                }
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(self.body.as_bytes()).map_err(io)?;
                if let Some(s) = &self.sidecar {
                    eprintln!("{s}");
                }
            }
        }
        Ok(())
    }
}

/// Comma-separated table with a header row and LF line endings.
pub fn csv_table(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}
