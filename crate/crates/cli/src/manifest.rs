//! Run manifests: every file-producing run records its command, argument
//! vector, and seed next to the outputs, so any result can be regenerated
//! byte-for-byte with `randcorr replay`.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Original argument vector with any `--out` pair stripped; `replay`
    /// re-parses this with a fresh `--out`.
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub version: String,
    pub created_unix: u64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, raw_args: &[String], seed: Option<u64>, outputs: &[PathBuf]) -> Self {
        RunManifest {
            command: command.to_string(),
            args: strip_out_flag(raw_args),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            created_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            outputs: outputs
                .iter()
                .map(|p| p.to_string_lossy().into_owned())
                .collect(),
        }
    }

    /// Written as `<out>.manifest.json` next to the primary output.
    pub fn write_next_to(&self, primary: &Path) -> Result<PathBuf> {
        let mut name = primary.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        let path = primary.with_file_name(name);
        std::fs::write(&path, serde_json::to_string_pretty(self)?)
            .with_context(|| format!("writing manifest {}", path.display()))?;
        Ok(path)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading manifest {}", path.display()))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Drop `--out <path>` / `--out=<path>` from an argument vector.
fn strip_out_flag(args: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut skip_next = false;
    for a in args {
        if skip_next {
            skip_next = false;
            continue;
        }
        if a == "--out" {
            skip_next = true;
            continue;
        }
        if a.starts_with("--out=") {
            continue;
        }
        out.push(a.clone());
    }
    out
}

/// Resolve an output path against `RANDCORR_OUT_DIR` when relative.
pub fn resolve_out(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("RANDCORR_OUT_DIR") {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn out_flag_is_stripped() {
        let args: Vec<String> = ["length", "--state", "ghz:3", "--out", "x.json", "--seed", "4"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(
            strip_out_flag(&args),
            vec!["length", "--state", "ghz:3", "--seed", "4"]
        );
        let args: Vec<String> = ["table1", "--out=y.csv"].iter().map(|s| s.to_string()).collect();
        assert_eq!(strip_out_flag(&args), vec!["table1"]);
    }
}
