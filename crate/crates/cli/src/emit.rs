//! Artifact plumbing: every output starts with a header block carrying the
//! tool version, the fully resolved config, and the wall time. Data rows
//! never carry timestamps, so reruns with identical config and cache state
//! produce byte-identical rows.

use linnik_core::Result;
use serde::Serialize;
use std::path::PathBuf;
use std::time::Instant;

pub const TOOL: &str = "linnik";

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: String,
    pub wall_ms: u64,
}

impl Meta {
    pub fn new(config: String, t0: Instant) -> Self {
        Meta {
            tool: TOOL,
            version: linnik_core::TOOL_VERSION,
            config,
            wall_ms: t0.elapsed().as_millis() as u64,
        }
    }

    /// `#`-prefixed header lines for CSV and text artifacts.
    pub fn comment_block(&self) -> String {
        format!(
            "# {} {}\n# config: {}\n# wall_ms: {}\n",
            self.tool, self.version, self.config, self.wall_ms
        )
    }
}

/// Canonical config echo: subcommand followed by every resolved flag.
pub fn config_line(cmd: &str, args: &[(&str, String)]) -> String {
    let mut s = String::from(cmd);
    for (k, v) in args {
        s.push_str(" --");
        s.push_str(k);
        s.push(' ');
        s.push_str(v);
    }
    s
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Write the artifact to `--out` or stdout.
pub fn write_artifact(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent() {
                if !dir.as_os_str().is_empty() {
                    std::fs::create_dir_all(dir)?;
                }
            }
            std::fs::write(path, text)?;
        }
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}
