//! File formats: digraph6 and graph6 codecs, base catalogs, weight-vector
//! files, search reports and checkpoints.

pub mod checkpoint;
mod digraph6;
mod graph6;
pub mod report;

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use crate::hosts::Host;
use crate::patterns::{PatternCatalog, PatternError, WeightVector};
use crate::search::BaseFrontier;

pub use digraph6::{decode_digraph6, encode_digraph6, encode_record, Digraph6Record, DIGRAPH6_HEADER, MAX_SHORT_ORDER};
pub use graph6::{decode_graph6, encode_graph6, Graph6, GRAPH6_HEADER};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("empty record")]
    Empty,
    #[error("missing or unexpected format prefix")]
    BadPrefix,
    #[error("byte {byte} at position {position} is outside 63..=126")]
    ByteOutOfRange { position: usize, byte: u8 },
    #[error("multi-byte size fields (order above 62) are not supported")]
    LongSize,
    #[error("expected {expected} data bytes, found {found}")]
    Length { expected: usize, found: usize },
    #[error("nonzero padding bits")]
    NonzeroPadding,
    #[error("loop at vertex {0}")]
    DiagonalBit(usize),
    #[error("pair {{{i}, {j}}} does not carry exactly one arc")]
    NotTournament { i: usize, j: usize },
    #[error("order {0} exceeds 62")]
    TooLarge(usize),
    #[error("host is not an oriented host")]
    NotOriented,
    #[error("host is not a graph or two-colored host")]
    NotGraph,
    #[error("invalid edge ({0}, {1})")]
    BadEdge(usize, usize),
    #[error("{0}")]
    Host(String),
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error("{source_name}:{line}: {error}")]
    Codec { source_name: String, line: usize, error: CodecError },
    #[error("{source_name}:{line}: order {found}, expected {expected}")]
    MixedOrders { source_name: String, line: usize, expected: usize, found: usize },
    #[error("{path}: {source}")]
    Vector { path: PathBuf, source: PatternError },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Write(#[from] std::io::Error),
}

fn open(path: &Path) -> Result<File, IoError> {
    File::open(path).map_err(|source| IoError::File { path: path.to_path_buf(), source })
}

/// Number of isomorphism classes of tournaments on `n` vertices, for the
/// orders where complete catalogs are commonly distributed.
pub fn known_tournament_count(n: usize) -> Option<u64> {
    const COUNTS: [u64; 11] = [1, 1, 1, 2, 4, 12, 56, 456, 6880, 191536, 9733056];
    COUNTS.get(n).copied()
}

/// Decodes every non-blank line as a tournament of `expected_order`.
pub fn read_digraph6_tournaments<R: BufRead>(
    reader: R,
    source_name: &str,
    expected_order: Option<usize>,
) -> Result<Vec<Host>, IoError> {
    let mut hosts = Vec::new();
    let mut order = expected_order;
    for (idx, line) in reader.split(b'\n').enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim_ascii();
        if trimmed.is_empty() || trimmed == DIGRAPH6_HEADER.as_bytes() {
            continue;
        }
        let codec = |error| IoError::Codec { source_name: source_name.to_string(), line: line_no, error };
        let mut record = decode_digraph6(trimmed).map_err(codec)?;
        record.line = line_no;
        match order {
            Some(o) if o != record.n => {
                return Err(IoError::MixedOrders {
                    source_name: source_name.to_string(),
                    line: line_no,
                    expected: o,
                    found: record.n,
                })
            }
            _ => order = Some(record.n),
        }
        hosts.push(record.to_tournament(&format!("{source_name}:{line_no}")).map_err(codec)?);
    }
    Ok(hosts)
}

/// Reads a digraph6 catalog of `expected_order`-tournaments. It is flagged
/// complete only when its size equals `asserted_size`.
pub fn read_base_catalog(
    path: &Path,
    expected_order: usize,
    asserted_size: Option<u64>,
) -> Result<BaseFrontier, IoError> {
    let reader = BufReader::new(open(path)?);
    let hosts = read_digraph6_tournaments(reader, &path.display().to_string(), Some(expected_order))?;
    let complete = asserted_size == Some(hosts.len() as u64);
    Ok(BaseFrontier { hosts, complete })
}

pub fn write_digraph6<W: Write>(mut w: W, hosts: &[Host]) -> Result<(), IoError> {
    for h in hosts {
        let line = encode_digraph6(h).map_err(|error| IoError::Codec {
            source_name: h.provenance().to_string(),
            line: 0,
            error,
        })?;
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Reads a weight vector (`literal=value` entries; see [`WeightVector::parse`]).
pub fn read_vector_file(path: &Path, catalog: Arc<PatternCatalog>) -> Result<WeightVector, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::File { path: path.to_path_buf(), source })?;
    WeightVector::parse(catalog, &text).map_err(|source| IoError::Vector { path: path.to_path_buf(), source })
}
