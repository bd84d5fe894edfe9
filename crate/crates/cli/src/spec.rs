//! Triangulation specs on the command line: `fan`, `fan:K` or `a-b,c-d,...`.

use dimerlab::{fan_triangulation, Diagonal, PolygonError, Triangulation};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("at column {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error(transparent)]
    Polygon(#[from] PolygonError),
}

fn syntax(position: usize, message: impl Into<String>) -> SpecError {
    SpecError::Syntax {
        position: position + 1,
        message: message.into(),
    }
}

fn number(s: &str, at: usize) -> Result<u32, SpecError> {
    if s.is_empty() {
        return Err(syntax(at, "expected a vertex number"));
    }
    if let Some(i) = s.find(|c: char| !c.is_ascii_digit()) {
        return Err(syntax(at + i, format!("unexpected character {:?}", s[i..].chars().next().unwrap())));
    }
    s.parse().map_err(|_| syntax(at, format!("vertex number {} is too large", s)))
}

/// Parses a spec for an `n`-gon. Columns in errors are 1-based.
pub fn parse_triangulation(n: u32, spec: &str) -> Result<Triangulation, SpecError> {
    let trimmed = spec.trim();
    let lead = spec.len() - spec.trim_start().len();
    if trimmed == "fan" {
        return Ok(fan_triangulation(n, 1)?);
    }
    if let Some(apex) = trimmed.strip_prefix("fan:") {
        let apex = number(apex.trim(), lead + 4)?;
        return Ok(fan_triangulation(n, apex)?);
    }
    let mut diagonals = Vec::new();
    if !trimmed.is_empty() {
        let mut at = lead;
        for item in trimmed.split(',') {
            let pad = item.len() - item.trim_start().len();
            let body = item.trim();
            let Some(dash) = body.find('-') else {
                return Err(syntax(at + pad, format!("expected a-b, got {:?}", body)));
            };
            let a = number(&body[..dash], at + pad)?;
            let b = number(&body[dash + 1..], at + pad + dash + 1)?;
            let d = Diagonal::new(a, b).ok_or_else(|| syntax(at + pad, format!("{}-{} joins a vertex to itself", a, b)))?;
            diagonals.push(d);
            at += item.len() + 1;
        }
    }
    Ok(Triangulation::new(n, diagonals)?)
}
