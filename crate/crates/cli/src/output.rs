//! Output writing: CSV and JSON with reproducible formatting.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use qw_core::{Distribution, Labels};

/// 17 significant digits, enough to round-trip an f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Resolve an output target: `-` (or nothing) is stdout; relative paths are
/// joined onto $QW_OUTPUT_DIR when that is set.
pub fn resolve_path(output: &Option<String>) -> Option<PathBuf> {
    let raw = output.as_deref()?;
    if raw == "-" {
        return None;
    }
    let p = Path::new(raw);
    if p.is_relative() {
        if let Ok(dir) = std::env::var("QW_OUTPUT_DIR") {
            if !dir.is_empty() {
                return Some(Path::new(&dir).join(p));
            }
        }
    }
    Some(p.to_path_buf())
}

pub fn write_text(path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            let mut f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            f.write_all(text.as_bytes())
                .with_context(|| format!("writing {}", p.display()))?;
        }
        None => {
            io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

/// CSV rendering of a distribution, schema fixed by its labels:
/// `x,probability` (1-D), `x,y,probability` (lattice),
/// `column,probability` (glued trees), `vertex,probability` otherwise.
pub fn distribution_csv(dist: &Distribution) -> String {
    let mut s = String::new();
    match dist.labels() {
        Labels::OneD(xs) => {
            s.push_str("x,probability\n");
            for (x, p) in xs.iter().zip(dist.probs()) {
                s.push_str(&format!("{x},{}\n", fmt_f64(*p)));
            }
        }
        Labels::TwoD(xy) => {
            s.push_str("x,y,probability\n");
            for ((x, y), p) in xy.iter().zip(dist.probs()) {
                s.push_str(&format!("{x},{y},{}\n", fmt_f64(*p)));
            }
        }
        Labels::Columns(cols) => {
            s.push_str("column,probability\n");
            for (c, p) in cols.iter().zip(dist.probs()) {
                s.push_str(&format!("{c},{}\n", fmt_f64(*p)));
            }
        }
        Labels::Vertices => {
            s.push_str("vertex,probability\n");
            for (v, p) in dist.probs().iter().enumerate() {
                s.push_str(&format!("{v},{}\n", fmt_f64(*p)));
            }
        }
    }
    s
}

pub fn json_pretty<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
