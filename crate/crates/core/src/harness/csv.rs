use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::{SweepResult, SweepRow};

const HEADER: &str = "p,recovery_rate,trials,stderr";

fn render(result: &SweepResult) -> String {
    let mut out = String::new();
    for (k, v) in &result.metadata {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out.push_str(HEADER);
    out.push('\n');
    for r in &result.rows {
        out.push_str(&format!(
            "{:.6},{:.6},{},{:.6}\n",
            r.p,
            r.recovery_rate(),
            r.trials,
            r.stderr()
        ));
    }
    out
}

/// Writes `#`-prefixed metadata, the header and one row per grid point.
pub fn write_csv(result: &SweepResult, path: &Path) -> Result<()> {
    fs::write(path, render(result)).map_err(|e| Error::io(path, e))
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        render(self)
    }
}

pub fn parse_csv(text: &str) -> std::result::Result<SweepResult, String> {
    let mut metadata = Vec::new();
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (no, line) in text.lines().enumerate() {
        if let Some(meta) = line.strip_prefix("# ") {
            let (k, v) = meta
                .split_once('=')
                .ok_or_else(|| format!("line {}: metadata without `=`", no + 1))?;
            metadata.push((k.to_string(), v.to_string()));
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !seen_header {
            if line != HEADER {
                return Err(format!("line {}: expected header {HEADER:?}", no + 1));
            }
            seen_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(format!("line {}: expected 4 fields", no + 1));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| format!("line {}: bad number {s:?}", no + 1))
        };
        let p = num(fields[0])?;
        let rate = num(fields[1])?;
        let trials: u64 = fields[2]
            .parse()
            .map_err(|_| format!("line {}: bad trial count", no + 1))?;
        rows.push(SweepRow {
            p,
            successes: (rate * trials as f64).round() as u64,
            trials,
        });
    }
    if !seen_header {
        return Err("missing header".into());
    }
    Ok(SweepResult { metadata, rows })
}

pub fn read_csv(path: &Path) -> Result<SweepResult> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text).map_err(|message| Error::Format {
        path: path.to_path_buf(),
        message,
    })
}
