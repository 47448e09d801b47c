//! Streaming lead-like filter and order-preserving deduplication.

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::chem::Molecule;

use super::config::FilterConfig;
use super::DatasetError;

/// Lines handed to the worker pool at a time.
pub const CHUNK_LINES: usize = 8192;

/// The SMILES field of a `SMILES[TAB]id` record, or `None` for blank lines.
pub fn record_smiles(line: &str) -> Option<&str> {
    let s = line.split('\t').next().unwrap_or("").trim();
    (!s.is_empty()).then_some(s)
}

/// Canonical string of an accepted record, or the first failed rule
/// (`parse` when the SMILES is invalid).
pub fn filter_record(smiles: &str, config: &FilterConfig) -> Result<String, String> {
    let mol = Molecule::from_smiles(smiles).map_err(|_| "parse".to_string())?;
    match config.first_failure(&mol) {
        Some(rule) => Err(rule),
        None => Ok(mol.canonical_smiles().to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub line_no: usize,
    pub input: String,
    pub rule: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FilterStats {
    pub records: usize,
    pub accepted: usize,
    pub rejected: BTreeMap<String, usize>,
}

impl FilterStats {
    pub fn rejected_total(&self) -> usize {
        self.rejected.values().sum()
    }
}

/// Filters records from `input`, passing each accepted canonical string and
/// each rejection to the callbacks in input order. Memory is bounded by
/// [`CHUNK_LINES`].
pub fn clean_leads_filter<R: BufRead>(
    input: R,
    config: &FilterConfig,
    mut accept: impl FnMut(String) -> std::io::Result<()>,
    mut reject: impl FnMut(Rejection) -> std::io::Result<()>,
) -> Result<FilterStats, DatasetError> {
    let mut stats = FilterStats::default();
    let mut lines = input.lines();
    let mut line_no = 0usize;
    let mut chunk: Vec<(usize, String)> = Vec::with_capacity(CHUNK_LINES);
    loop {
        chunk.clear();
        for line in lines.by_ref() {
            let line = line?;
            line_no += 1;
            if record_smiles(&line).is_some() {
                chunk.push((line_no, line));
                if chunk.len() == CHUNK_LINES {
                    break;
                }
            }
        }
        if chunk.is_empty() {
            break;
        }
        let results: Vec<Result<String, String>> = chunk
            .par_iter()
            .map(|(_, line)| filter_record(record_smiles(line).unwrap_or(""), config))
            .collect();
        for ((no, line), result) in chunk.drain(..).zip(results) {
            stats.records += 1;
            match result {
                Ok(canon) => {
                    stats.accepted += 1;
                    accept(canon)?;
                }
                Err(rule) => {
                    *stats.rejected.entry(rule.clone()).or_default() += 1;
                    reject(Rejection {
                        line_no: no,
                        input: record_smiles(&line).unwrap_or("").to_string(),
                        rule,
                    })?;
                }
            }
        }
    }
    Ok(stats)
}

/// Writes the rejection log header.
pub fn write_rejection_header<W: Write>(w: &mut W) -> std::io::Result<()> {
    writeln!(w, "line_no\tinput\trule")
}

pub fn write_rejection<W: Write>(w: &mut W, r: &Rejection) -> std::io::Result<()> {
    writeln!(w, "{}\t{}\t{}", r.line_no, r.input, r.rule)
}

/// First-occurrence filter over a stream of strings.
#[derive(Debug, Default)]
pub struct Deduplicator {
    seen: HashSet<String>,
}

impl Deduplicator {
    pub fn new() -> Self {
        Self::default()
    }

    /// True the first time `s` is seen.
    pub fn insert(&mut self, s: &str) -> bool {
        if self.seen.contains(s) {
            false
        } else {
            self.seen.insert(s.to_string());
            true
        }
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }
}

pub fn deduplicate<S: AsRef<str>>(items: impl IntoIterator<Item = S>) -> Vec<String> {
    let mut d = Deduplicator::new();
    items
        .into_iter()
        .filter(|s| d.insert(s.as_ref()))
        .map(|s| s.as_ref().to_string())
        .collect()
}
