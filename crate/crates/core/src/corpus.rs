//! Serialization: sequence lines, corpus files, trace/expectation CSV, and
//! JSON-lines pair records.
//!
//! A sequence serializes as one line of comma-separated non-negative
//! integers; a file with one sequence per line is a corpus.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::engines::ExpectedMisses;
use crate::error::Error;
use crate::page::{PageId, RequestSequence};
use crate::policies::{Eviction, TraceResult};
use crate::rational::{to_decimal_string, to_fraction_string, Ratio};
use crate::Result;

/// Render a sequence as a comma-separated line.
pub fn sequence_to_line(s: &[PageId]) -> String {
    s.iter()
        .map(|p| p.0.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Parse a comma-separated line into a sequence. Blank lines are empty
/// sequences; surrounding whitespace is ignored.
pub fn sequence_from_line(line: &str) -> Result<RequestSequence> {
    let trimmed = line.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u64>()
                .map(PageId)
                .map_err(|e| Error::Parse(format!("bad page id {tok:?}: {e}")))
        })
        .collect()
}

/// Parse a corpus: one sequence per line.
pub fn corpus_from_str(text: &str) -> Result<Vec<RequestSequence>> {
    text.lines().map(sequence_from_line).collect()
}

/// Render a corpus, one sequence per line.
pub fn corpus_to_string(seqs: &[RequestSequence]) -> String {
    let mut out = String::new();
    for s in seqs {
        out.push_str(&sequence_to_line(s));
        out.push('\n');
    }
    out
}

/// Trace export: CSV with columns index, page, miss (0/1), evicted
/// (empty, page id, or FLUSH).
pub fn trace_to_csv(s: &[PageId], trace: &TraceResult) -> String {
    let mut out = String::from("index,page,miss,evicted\n");
    for (idx, &p) in s.iter().enumerate() {
        let miss = u8::from(trace.miss_flags[idx]);
        let evicted = match &trace.evictions[idx] {
            Eviction::None => String::new(),
            Eviction::Page(q) => q.0.to_string(),
            Eviction::Flush(_) => "FLUSH".to_string(),
        };
        let _ = writeln!(out, "{idx},{},{miss},{evicted}", p.0);
    }
    out
}

/// Expectation export: CSV with the miss probability as an exact fraction
/// string and as a decimal.
pub fn expected_to_csv(s: &[PageId], e: &ExpectedMisses) -> String {
    let mut out = String::from("index,page,miss_probability,miss_probability_decimal\n");
    for (idx, &p) in s.iter().enumerate() {
        let prob = &e.per_request[idx];
        let _ = writeln!(
            out,
            "{idx},{},{},{}",
            p.0,
            to_fraction_string(prob),
            to_decimal_string(prob, 12)
        );
    }
    out
}

/// Exact rational rendered both ways for reports.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RatioRepr {
    pub fraction: String,
    pub decimal: String,
}

impl RatioRepr {
    pub fn of(r: &Ratio) -> Self {
        RatioRepr {
            fraction: to_fraction_string(r),
            decimal: to_decimal_string(r, 12),
        }
    }
}

/// Predicted statistics attached to a generated pair, exact where the
/// construction admits a closed form.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct PredictedRepr {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub good_misses: Option<RatioRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bad_misses: Option<RatioRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bad_misses_lower_bound: Option<RatioRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub difference: Option<RatioRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub difference_limit: Option<RatioRepr>,
}

/// One corpus record for a generated sequence pair (JSON-lines).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairRecord {
    pub name: String,
    pub k: usize,
    pub params: serde_json::Value,
    pub good: String,
    pub bad: String,
    pub declared_distance: usize,
    pub predicted: PredictedRepr,
}
