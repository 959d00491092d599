//! Plain-text election files.
//!
//! ```text
//! # comment
//! 2 4
//! 1 2 3 4
//! 4 3 2 1
//! ```
//!
//! A header line `n m` is followed by `n` lines of `m` distinct candidates in
//! `1..=m`, most preferred first. A file may hold several such blocks. Blank
//! lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::vote::{Candidate, Election, Vote};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn numbers(line: usize, text: &str) -> Result<Vec<u64>> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<u64>().map_err(|_| {
                parse_err(
                    line,
                    format!("expected a non-negative integer, found {t:?}"),
                )
            })
        })
        .collect()
}

/// Parses every election block in `text`.
pub fn parse_elections(text: &str) -> Result<Vec<Election>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut out = Vec::new();
    while let Some((hl, header)) = lines.next() {
        let nm = numbers(hl, header)?;
        let [n, m] = nm[..] else {
            return Err(parse_err(
                hl,
                format!("expected a header `n m`, found {header:?}"),
            ));
        };
        if n == 0 {
            return Err(parse_err(hl, "an election needs at least one vote"));
        }
        if m == 0 || m > Candidate::MAX as u64 {
            return Err(parse_err(hl, format!("candidate count {m} out of range")));
        }
        let mut votes = Vec::with_capacity(n as usize);
        for k in 0..n {
            let (vl, text) = lines
                .next()
                .ok_or_else(|| parse_err(hl, format!("expected {n} votes, found {k}")))?;
            let ranks = numbers(vl, text)?;
            if ranks.len() as u64 != m {
                return Err(parse_err(
                    vl,
                    format!("expected {m} candidates, found {}", ranks.len()),
                ));
            }
            let ranking = ranks.into_iter().map(|c| c as Candidate).collect();
            votes.push(Vote::new(ranking).map_err(|e| parse_err(vl, e.to_string()))?);
        }
        out.push(Election::new(votes).map_err(|e| parse_err(hl, e.to_string()))?);
    }
    if out.is_empty() {
        return Err(parse_err(0, "no election found"));
    }
    Ok(out)
}

/// Serializes one election block.
pub fn write_election(e: &Election) -> String {
    let mut s = String::new();
    writeln!(s, "{} {}", e.n(), e.m()).expect("write to string");
    for v in e.votes() {
        writeln!(s, "{v}").expect("write to string");
    }
    s
}
