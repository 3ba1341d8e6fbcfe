//! Append-only JSONL cache for zero lists.
//!
//! One file per scan target, named by the target plus a content hash of the
//! generating config (target label, grid step, refinement width, tool
//! version). The first line records that config; zero rows follow in
//! ordinate order; each completed scan appends an audit stamp with the
//! height it certified. Extending a list past its audited height re-scans,
//! cross-checks the overlap against the cached rows, and appends only the
//! new rows — cached ordinates are never rewritten.

use linnik_core::error::{assertion, Result};
use linnik_core::lfunc::zeros::{Zero, GRID_STEP, REFINE_WIDTH};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CacheHeader {
    pub target: String,
    pub grid: f64,
    pub refine: f64,
    pub tool_version: String,
}

impl CacheHeader {
    pub fn for_target(target: &str) -> Self {
        CacheHeader {
            target: target.to_string(),
            grid: GRID_STEP,
            refine: REFINE_WIDTH,
            tool_version: linnik_core::TOOL_VERSION.to_string(),
        }
    }
}

/// One zero row; `chi` is absent for ζ and the Kronecker L-function.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CacheRow {
    pub disc: u64,
    pub chi: Option<usize>,
    pub ordinate: f64,
    pub refined_to: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CacheAudit {
    pub t_max: f64,
    pub count_found: usize,
    pub count_main: f64,
    pub count_ok: bool,
}

#[derive(Debug)]
pub struct CachedList {
    pub rows: Vec<CacheRow>,
    /// Highest height any audit stamp certifies; rows are complete below it.
    pub audited: f64,
}

fn slug(label: &str) -> String {
    let mut s = String::new();
    for c in label.chars() {
        if c.is_ascii_alphanumeric() {
            s.push(c);
        } else if !s.ends_with('-') {
            s.push('-');
        }
    }
    s.trim_matches('-').to_string()
}

pub fn cache_path(dir: &Path, header: &CacheHeader) -> PathBuf {
    let key = format!(
        "target={};grid={};refine={};tool={}",
        header.target, header.grid, header.refine, header.tool_version
    );
    let digest = Sha256::digest(key.as_bytes());
    let hex: String = digest[..6].iter().map(|b| format!("{b:02x}")).collect();
    dir.join("zeros")
        .join(format!("{}-{hex}.jsonl", slug(&header.target)))
}

#[derive(Serialize, Deserialize)]
struct HeaderLine {
    cache: CacheHeader,
}

#[derive(Serialize, Deserialize)]
struct AuditLine {
    audit: CacheAudit,
}

/// Parse the cache file; `None` on absence, corruption, or a stale config
/// (the caller recomputes and rewrites).
pub fn read_cache(path: &Path, expect: &CacheHeader) -> Option<CachedList> {
    let text = std::fs::read_to_string(path).ok()?;
    let mut lines = text.lines();
    let head: HeaderLine = serde_json::from_str(lines.next()?).ok()?;
    if head.cache != *expect {
        return None;
    }
    let mut rows = Vec::new();
    let mut audited = f64::NEG_INFINITY;
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        if let Ok(a) = serde_json::from_str::<AuditLine>(line) {
            audited = audited.max(a.audit.t_max);
        } else if let Ok(r) = serde_json::from_str::<CacheRow>(line) {
            rows.push(r);
        } else {
            return None;
        }
    }
    if !audited.is_finite() {
        return None;
    }
    Some(CachedList { rows, audited })
}

pub fn row_line(row: &CacheRow) -> String {
    serde_json::to_string(row).expect("row serializes")
}

pub fn audit_line(audit: &CacheAudit) -> String {
    serde_json::to_string(&AuditLine { audit: *audit }).expect("audit serializes")
}

/// Create the file fresh: header, rows, one audit stamp.
pub fn write_fresh(
    path: &Path,
    header: &CacheHeader,
    rows: &[CacheRow],
    audit: &CacheAudit,
) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut text = serde_json::to_string(&HeaderLine {
        cache: header.clone(),
    })?;
    text.push('\n');
    for r in rows {
        text.push_str(&row_line(r));
        text.push('\n');
    }
    text.push_str(&audit_line(audit));
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Append new rows and a fresh audit stamp to an existing file.
pub fn append_rows(path: &Path, rows: &[CacheRow], audit: &CacheAudit) -> Result<()> {
    let mut f = std::fs::OpenOptions::new().append(true).open(path)?;
    let mut text = String::new();
    for r in rows {
        text.push_str(&row_line(r));
        text.push('\n');
    }
    text.push_str(&audit_line(audit));
    text.push('\n');
    f.write_all(text.as_bytes())?;
    Ok(())
}

/// Split a full re-scan against the cached rows: every cached ordinate must
/// reappear (within a pairing tolerance), and the unmatched remainder — the
/// rows to append — must all sit above the audited height.
pub fn split_extension(
    cached: &[CacheRow],
    fresh: &[Zero],
    audited: f64,
    target: &str,
) -> Result<Vec<Zero>> {
    const TOL: f64 = 1e-6;
    let mut matched = vec![false; fresh.len()];
    for c in cached {
        let hit = fresh.iter().enumerate().find(|(i, z)| {
            !matched[*i] && (z.ordinate - c.ordinate).abs() <= TOL
        });
        match hit {
            Some((i, _)) => matched[i] = true,
            None => {
                return Err(assertion(format!(
                    "cached zero {:.9} of {target} missing from re-scan; \
                     cache is inconsistent with recomputation",
                    c.ordinate
                )))
            }
        }
    }
    let mut extra = Vec::new();
    for (i, z) in fresh.iter().enumerate() {
        if matched[i] {
            continue;
        }
        if z.ordinate <= audited - TOL {
            return Err(assertion(format!(
                "re-scan found an unrecorded zero {:.9} of {target} below the \
                 audited height {audited}; cache is inconsistent",
                z.ordinate
            )));
        }
        extra.push(*z);
    }
    Ok(extra)
}
