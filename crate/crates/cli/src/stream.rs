//! Text format for update streams.
//!
//! ```text
//! n 5
//! + 0 1
//! + 1 2
//! - 0 1
//! ```
//!
//! The first non-blank line gives the vertex count, every further non-blank
//! line is one update. The writer always emits the smaller endpoint first,
//! one space between fields and a trailing newline, so writing a parsed
//! stream reproduces a written one byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use dynmatch::{Update, UpdateKind};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateStream {
    pub n: usize,
    pub updates: Vec<Update>,
}

fn parse_err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse { line, message: message.into() }
}

fn parse_vertex(token: Option<&str>, line: usize, n: usize) -> Result<usize, CliError> {
    let token = token.ok_or_else(|| parse_err(line, "expected two vertices"))?;
    let v: usize = token.parse().map_err(|_| parse_err(line, format!("`{token}` is not a vertex id")))?;
    if v >= n {
        return Err(parse_err(line, format!("vertex {v} out of range for n = {n}")));
    }
    Ok(v)
}

impl UpdateStream {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing `n <count>` header"))?;
        let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["n", count] => count.parse::<usize>().map_err(|_| parse_err(hline, format!("bad vertex count `{count}`")))?,
            _ => return Err(parse_err(hline, format!("expected `n <count>`, found `{header}`"))),
        };
        if n == 0 {
            return Err(parse_err(hline, "vertex count must be positive"));
        }
        let mut updates = Vec::new();
        for (line, text) in lines {
            let mut tokens = text.split_whitespace();
            let kind = match tokens.next() {
                Some("+") => UpdateKind::Insert,
                Some("-") => UpdateKind::Delete,
                Some(other) => return Err(parse_err(line, format!("expected `+` or `-`, found `{other}`"))),
                None => unreachable!("blank lines are skipped"),
            };
            let u = parse_vertex(tokens.next(), line, n)?;
            let v = parse_vertex(tokens.next(), line, n)?;
            if let Some(extra) = tokens.next() {
                return Err(parse_err(line, format!("unexpected `{extra}`")));
            }
            if u == v {
                return Err(parse_err(line, format!("self-loop at {u}")));
            }
            updates.push(match kind {
                UpdateKind::Insert => Update::insert(u, v),
                UpdateKind::Delete => Update::delete(u, v),
            });
        }
        Ok(UpdateStream { n, updates })
    }

    pub fn render(&self) -> String {
        let mut out = String::with_capacity(8 + 12 * self.updates.len());
        writeln!(out, "n {}", self.n).unwrap();
        for u in &self.updates {
            let sign = match u.kind {
                UpdateKind::Insert => '+',
                UpdateKind::Delete => '-',
            };
            writeln!(out, "{sign} {} {}", u.edge.lo(), u.edge.hi()).unwrap();
        }
        out
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.render()).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
    }

    pub fn inserts(&self) -> usize {
        self.updates.iter().filter(|u| u.kind == UpdateKind::Insert).count()
    }
}
