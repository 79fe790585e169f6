//! Line-oriented identity files: one `key = value` binding per line,
//! `#` starts a comment, blank lines are ignored.
//!
//! ```text
//! # the adjugate identity
//! n = 2
//! m = 1
//! q0 = adj(x)
//! q1 = 0
//! ```
//!
//! The keys are `n`, `m`, and `q0` through `qm`. Every map must elaborate
//! to one common degree; zero maps adopt it (an all-zero family defaults to
//! degree 1).

use std::collections::HashMap;

use fident_core::tracemaps::TraceMap;

use crate::elaborate::elaborate;
use crate::expr::{parse, Expr};

#[derive(Debug, Clone)]
pub struct IdentityFile {
    pub n: usize,
    pub m: usize,
    /// q0..qm in order.
    pub expressions: Vec<Expr>,
}

/// File-level failure with the offending 1-based line.
#[derive(Debug, Clone)]
pub struct FileError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for FileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for FileError {}

pub fn parse_identity_file(text: &str) -> Result<IdentityFile, FileError> {
    let mut bindings: HashMap<String, (usize, String)> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| FileError {
            line: line_no,
            message: "expected a `key = value` binding".into(),
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if value.is_empty() {
            return Err(FileError {
                line: line_no,
                message: format!("binding '{key}' has no value"),
            });
        }
        if bindings.insert(key.clone(), (line_no, value)).is_some() {
            return Err(FileError {
                line: line_no,
                message: format!("duplicate binding '{key}'"),
            });
        }
    }

    let take_usize = |bindings: &mut HashMap<String, (usize, String)>, key: &str| {
        let (line, value) = bindings.remove(key).ok_or_else(|| FileError {
            line: 0,
            message: format!("missing binding '{key}'"),
        })?;
        value.parse::<usize>().map_err(|_| FileError {
            line,
            message: format!("'{key}' must be a non-negative integer, got '{value}'"),
        })
    };

    let n = take_usize(&mut bindings, "n")?;
    if n < 1 {
        return Err(FileError {
            line: 0,
            message: "n must be at least 1".into(),
        });
    }
    let m = take_usize(&mut bindings, "m")?;

    let mut expressions = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let key = format!("q{i}");
        let (line, value) = bindings.remove(&key).ok_or_else(|| FileError {
            line: 0,
            message: format!("missing binding '{key}'"),
        })?;
        let expr = parse(&value).map_err(|e| FileError {
            line,
            message: format!("in '{key}': {e}"),
        })?;
        expressions.push(expr);
    }

    if let Some((key, (line, _))) = bindings.into_iter().next() {
        return Err(FileError {
            line,
            message: format!("unexpected binding '{key}'"),
        });
    }

    Ok(IdentityFile { n, m, expressions })
}

/// Elaborates q0..qm at the file's n and aligns them on one common degree.
pub fn elaborate_family(file: &IdentityFile) -> Result<Vec<TraceMap>, String> {
    let mut elaborated = Vec::with_capacity(file.expressions.len());
    for (i, expr) in file.expressions.iter().enumerate() {
        let value = elaborate(expr, file.n).map_err(|e| format!("in q{i}: {e}"))?;
        elaborated.push(value);
    }
    let mut degree: Option<u32> = None;
    for (i, value) in elaborated.iter().enumerate() {
        if value.is_zero() {
            continue;
        }
        match degree {
            Some(d) if d != value.degree() => {
                return Err(format!(
                    "maps must share one degree: q{i} has degree {}, earlier maps degree {d}",
                    value.degree()
                ));
            }
            _ => degree = Some(value.degree()),
        }
    }
    let degree = degree.unwrap_or(1);
    Ok(elaborated
        .into_iter()
        .map(|value| {
            if value.is_zero() {
                TraceMap::zero(file.n, degree)
            } else {
                value.into_trace_map()
            }
        })
        .collect())
}
