//! Report writers. Rationals are always written as `p/q` strings.

use std::io::Write;
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::IoError;
use crate::decomp::Dstar;
use crate::hosts::Host;
use crate::lp::LpStatus;
use crate::patterns::WeightVector;
use crate::ratio::fmt_rational;
use crate::search::{LevelStats, SearchReport};

/// Hex SHA-256 of the canonical text form of a weight vector.
pub fn vector_hash(v: &WeightVector) -> String {
    let spec = format!("{}|{}|{}", v.catalog().order(), v.catalog().kind(), v.to_spec_string());
    hex::encode(Sha256::digest(spec.as_bytes()))
}

/// Hex SHA-256 over the primal and dual vectors of a solution.
pub fn certificate_hash(d: &Dstar) -> String {
    let mut h = Sha256::new();
    for q in d.solution.x.iter().chain(&d.solution.y) {
        h.update(fmt_rational(q).as_bytes());
        h.update(b",");
    }
    hex::encode(h.finalize())
}

/// One evaluation result, for line-delimited output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalRecord {
    pub record: &'static str,
    pub host: String,
    pub order: usize,
    pub k: usize,
    pub vector_hash: String,
    pub status: LpStatus,
    pub value: Option<String>,
    pub certificate_hash: Option<String>,
    pub wall_time_ms: f64,
}

impl EvalRecord {
    pub fn new(
        host: &Host,
        k: usize,
        v: &WeightVector,
        result: Option<&Dstar>,
        value: Option<String>,
        wall: Duration,
    ) -> Self {
        EvalRecord {
            record: "eval",
            host: host.provenance().to_string(),
            order: host.order(),
            k,
            vector_hash: vector_hash(v),
            status: if result.is_some() { LpStatus::Optimal } else { LpStatus::Infeasible },
            value,
            certificate_hash: result.map(certificate_hash),
            wall_time_ms: wall.as_secs_f64() * 1e3,
        }
    }
}

pub fn write_jsonl<W: Write, T: Serialize>(mut w: W, record: &T) -> Result<(), IoError> {
    serde_json::to_writer(&mut w, record)?;
    w.write_all(b"\n")?;
    Ok(())
}

/// The per-level table: order, frontier size, threshold, below-threshold
/// count, lowest value, plus the isomorphism-class count of survivors.
pub fn write_table_csv<W: Write>(w: W, levels: &[LevelStats]) -> Result<(), IoError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["order", "frontier_size", "threshold", "below_threshold", "lowest_value", "distinct_below"])?;
    for l in levels {
        out.write_record([
            l.order.to_string(),
            l.frontier_size.to_string(),
            fmt_rational(&l.threshold),
            l.below.to_string(),
            l.lowest.as_ref().map(fmt_rational).unwrap_or_default(),
            l.distinct_below.map(|d| d.to_string()).unwrap_or_default(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct LevelLine<'a> {
    record: &'static str,
    #[serde(flatten)]
    stats: &'a LevelStats,
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    record: &'static str,
    #[serde(flatten)]
    report: &'a SearchReport,
}

/// One `level` record per level, then a `report` record with everything.
pub fn write_report_jsonl<W: Write>(mut w: W, report: &SearchReport) -> Result<(), IoError> {
    for stats in &report.levels {
        write_jsonl(&mut w, &LevelLine { record: "level", stats })?;
    }
    write_jsonl(&mut w, &SummaryLine { record: "report", report })
}
