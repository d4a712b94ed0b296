//! CSV emission with `#`-prefixed metadata headers. The first header line is
//! a JSON one-liner with the full parameter echo (byte-stable under a fixed
//! seed); the second carries the wall-clock timestamp and is excluded from
//! determinism comparisons.

use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};

pub struct Report {
    meta: serde_json::Value,
    header: String,
    rows: Vec<String>,
}

impl Report {
    pub fn new(subcommand: &str, params: serde_json::Value, header: &str) -> Self {
        Report {
            meta: serde_json::json!({
                "subcommand": subcommand,
                "params": params,
                "rng": fixmag::rng::ALGORITHM,
                "version": env!("CARGO_PKG_VERSION"),
            }),
            header: header.to_string(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: String) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, rows: impl IntoIterator<Item = String>) {
        self.rows.extend(rows);
    }

    fn render(&self) -> String {
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let mut out = String::new();
        out.push_str(&format!("# {}\n", self.meta));
        out.push_str(&format!("# {{\"timestamp_unix\":{stamp}}}\n"));
        out.push_str(&self.header);
        out.push('\n');
        for row in &self.rows {
            out.push_str(row);
            out.push('\n');
        }
        out
    }

    /// Write to the path, or stdout when no path is given.
    pub fn write(&self, out: Option<&Path>) -> Result<()> {
        let text = self.render();
        match out {
            Some(path) => std::fs::write(path, text)
                .with_context(|| format!("writing {}", path.display()))?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

/// Raw text output (non-CSV artifacts like pairing serializations).
pub fn write_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}
