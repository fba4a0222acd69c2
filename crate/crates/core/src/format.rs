//! Plain-text arrangement files.
//!
//! ```text
//! # comment
//! q=3^1 ell=3
//! 1 0 0
//! 0 1 2
//! ```
//!
//! Over a non-prime field each coefficient is written as its comma-joined
//! coefficient vector over `F_p`, low degree first (`1,1` is `1 + x` in
//! `F_4`). Blank lines and lines starting with `#` are skipped. Repeated or
//! proportional covectors are accepted and collapse to one hyperplane.

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::arrangement::{Arrangement, ArrangementError};
use crate::field::{make_field, Elem, FieldCtx, FieldError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Header { line: usize, msg: String },
    #[error("missing `q=<p>^<e> ell=<n>` header")]
    MissingHeader,
    #[error("line {line}: bad coefficient `{token}`: {msg}")]
    Coefficient {
        line: usize,
        token: String,
        msg: String,
    },
    #[error("line {line}: expected {expected} coefficients, found {found}")]
    Width {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: zero covector")]
    ZeroCovector { line: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

/// Header fields `q=<p>^<e> ell=<n>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Header {
    pub p: u64,
    pub e: u32,
    pub ell: usize,
}

fn parse_header(text: &str, line: usize) -> Result<Header, FormatError> {
    let bad = |msg: &str| FormatError::Header {
        line,
        msg: msg.to_string(),
    };
    let mut q = None;
    let mut ell = None;
    for tok in text.split_whitespace() {
        if let Some(v) = tok.strip_prefix("q=") {
            let (p, e) = match v.split_once('^') {
                Some((p, e)) => (p, e),
                None => (v, "1"),
            };
            let p: u64 = p.parse().map_err(|_| bad("q must look like <p>^<e>"))?;
            let e: u32 = e.parse().map_err(|_| bad("q must look like <p>^<e>"))?;
            q = Some((p, e));
        } else if let Some(v) = tok.strip_prefix("ell=") {
            ell = Some(
                v.parse()
                    .map_err(|_| bad("ell must be a positive integer"))?,
            );
        } else {
            return Err(bad(&format!("unexpected header field `{tok}`")));
        }
    }
    let (p, e) = q.ok_or_else(|| bad("header has no q="))?;
    let ell = ell.ok_or_else(|| bad("header has no ell="))?;
    if ell == 0 {
        return Err(bad("ell must be positive"));
    }
    Ok(Header { p, e, ell })
}

fn parse_coefficient(ctx: &FieldCtx, tok: &str, line: usize) -> Result<Elem, FormatError> {
    let err = |msg: &str| FormatError::Coefficient {
        line,
        token: tok.to_string(),
        msg: msg.to_string(),
    };
    let digits: Vec<u32> = tok
        .split(',')
        .map(|d| d.parse::<u32>().map_err(|_| err("not an integer")))
        .collect::<Result<_, _>>()?;
    if digits.len() != ctx.prime_degree() as usize {
        return Err(err(&format!(
            "expected {} comma-joined digits",
            ctx.prime_degree()
        )));
    }
    ctx.from_prime_coefficients(&digits)
        .ok_or_else(|| err(&format!("digits must lie in [0, {})", ctx.characteristic())))
}

/// Parses an arrangement file.
pub fn parse_arrangement(text: &str) -> Result<Arrangement, FormatError> {
    let mut header = None;
    let mut ctx: Option<Arc<FieldCtx>> = None;
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let Some(h) = header else {
            let h = parse_header(body, line)?;
            ctx = Some(make_field(h.p, h.e)?);
            header = Some(h);
            continue;
        };
        let ctx = ctx.as_ref().unwrap();
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.len() != h.ell {
            return Err(FormatError::Width {
                line,
                expected: h.ell,
                found: toks.len(),
            });
        }
        let row: Vec<Elem> = toks
            .iter()
            .map(|t| parse_coefficient(ctx, t, line))
            .collect::<Result<_, _>>()?;
        if row.iter().all(|c| c.is_zero()) {
            return Err(FormatError::ZeroCovector { line });
        }
        rows.push(row);
    }
    let h = header.ok_or(FormatError::MissingHeader)?;
    Ok(Arrangement::new(ctx.unwrap(), h.ell, &rows)?)
}

fn format_coefficient(ctx: &FieldCtx, c: Elem) -> String {
    ctx.prime_coefficients(c)
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Writes an arrangement in the format read by [`parse_arrangement`].
pub fn write_arrangement(arr: &Arrangement) -> String {
    let ctx = arr.ctx();
    let mut out = format!(
        "q={}^{} ell={}\n",
        ctx.characteristic(),
        ctx.prime_degree(),
        arr.ell()
    );
    for h in arr.hyperplanes() {
        let line: Vec<String> = h
            .covector()
            .iter()
            .map(|&c| format_coefficient(ctx, c))
            .collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}
