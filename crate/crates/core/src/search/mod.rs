//! Threshold-driven extension search over tournaments.
//!
//! If every vertex-deleted subtournament of an `r`-tournament `G` has
//! `D* >= t (r-2)/r`, then `D*(G) >= t`. So to show that no `r_hi`-tournament
//! has `D* < t`, it suffices to start from a complete list at a low order,
//! keep the hosts below the propagated threshold, extend each survivor by one
//! vertex in all `2^r` ways, and repeat until the frontier dies out.

mod level;
mod pipeline;
mod schedule;

use std::path::PathBuf;

use thiserror::Error;

use crate::decomp::DecompError;
use crate::hosts::HostError;
use crate::io::checkpoint::CheckpointError;

pub use level::{
    extend_frontier, run_level, Frontier, HostOutcome, LevelEvaluator, LevelOptions, LevelOutcome, LevelProgress,
    LevelStats,
};
pub use pipeline::{
    checkpoint_resume, checkpoint_save, resume_pipeline, run_pipeline, BaseFrontier, SearchConfig, SearchOutcome,
    SearchReport, SearchState, Verdict,
};
pub use schedule::{threshold_schedule, ScheduleLevel, ScheduleMode, ThresholdSchedule};

/// Hosts per work chunk.
pub const DEFAULT_CHUNK_SIZE: u64 = 4096;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("schedule: {0}")]
    Schedule(String),
    #[error("threshold {value} at order {order} is below the exact chain value {exact}")]
    UnsoundThreshold { order: usize, value: String, exact: String },
    #[error("frontier mixes orders {expected} and {found}")]
    MixedOrders { expected: usize, found: usize },
    #[error("base frontier has order {base}, schedule starts at {r_lo}")]
    BaseOrder { base: usize, r_lo: usize },
    #[error("empty frontier")]
    EmptyFrontier,
    #[error("host {0} is not a tournament of the level order")]
    NotTournament(String),
    #[error("LP failure on host {provenance}: {source}")]
    Lp { provenance: String, source: DecompError },
    #[error("float presolve contradicted the exact solver on host {0}")]
    PresolveDisagreement(String),
    #[error("interrupted{}", .checkpoint.as_ref().map(|p| format!("; state saved to {}", p.display())).unwrap_or_default())]
    Interrupted { checkpoint: Option<PathBuf> },
    #[error("checkpoint belongs to a different run (expected digest {expected}, found {found})")]
    ResumeMismatch { expected: String, found: String },
    #[error("worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
    #[error(transparent)]
    Host(#[from] HostError),
}
