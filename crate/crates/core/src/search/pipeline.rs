use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::level::{ChunkResult, Frontier, LevelEvaluator, LevelOptions, LevelProgress, LevelStats};
use super::schedule::ThresholdSchedule;
use super::SearchError;
use crate::hosts::Host;
use crate::io::checkpoint;
use crate::patterns::WeightVector;
use crate::ratio::fmt_rational;
use crate::Rational;

/// The starting frontier of a search and whether it is known to contain
/// every isomorphism class of its order.
#[derive(Clone, Debug)]
pub struct BaseFrontier {
    pub hosts: Vec<Host>,
    pub complete: bool,
}

impl BaseFrontier {
    /// SHA-256 over the order and pair table of every host, in order.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for host in &self.hosts {
            h.update((host.order() as u32).to_le_bytes());
            h.update(host.pair_table());
        }
        hex::encode(h.finalize())
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub k: usize,
    pub vector: WeightVector,
    pub schedule: ThresholdSchedule,
    /// Highest order to evaluate; defaults to the schedule's top order.
    pub stop_order: Option<usize>,
    pub level: LevelOptions,
    /// Worker threads; 0 means available parallelism.
    pub workers: usize,
    pub checkpoint: Option<PathBuf>,
    /// Minimum wall time between mid-level checkpoint writes.
    pub checkpoint_interval: Duration,
    /// When set, the run checkpoints and stops at the next batch boundary.
    pub cancel: Option<Arc<AtomicBool>>,
    /// Stop (as if cancelled) once this many chunks have been merged in total.
    pub stop_after_chunks: Option<u64>,
}

impl SearchConfig {
    pub fn new(k: usize, vector: WeightVector, schedule: ThresholdSchedule) -> Self {
        SearchConfig {
            k,
            vector,
            schedule,
            stop_order: None,
            level: LevelOptions::default(),
            workers: 0,
            checkpoint: None,
            checkpoint_interval: Duration::from_secs(60),
            cancel: None,
            stop_after_chunks: None,
        }
    }

    fn top(&self) -> usize {
        self.stop_order.unwrap_or(self.schedule.r_hi).min(self.schedule.r_hi)
    }

    /// Identifies everything that determines the report, so checkpoints
    /// cannot be resumed against different inputs.
    pub fn run_digest(&self, base: &BaseFrontier) -> String {
        let mut h = Sha256::new();
        let guard = self.level.guard.as_ref().map(fmt_rational).unwrap_or_else(|| "none".into());
        let text = format!(
            "k={}\nvector={}\nschedule={}\nstop={}\nchunk={}\nguard={}\ndedup={}\nbase={}\n",
            self.k,
            self.vector.to_spec_string(),
            self.schedule,
            self.top(),
            self.level.chunk_size,
            guard,
            self.level.dedup,
            base.digest()
        );
        h.update(text.as_bytes());
        hex::encode(h.finalize())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    /// No host of the top order lies below its threshold.
    Certified,
    /// A host of the top order lies below the top threshold.
    Refuted {
        witness: Host,
        #[serde(with = "crate::ratio::serde_rational")]
        value: Rational,
    },
    Incomplete {
        reason: String,
    },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::Refuted { .. } => "refuted",
            Verdict::Incomplete { .. } => "incomplete",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub k: usize,
    pub vector: String,
    pub schedule: ThresholdSchedule,
    pub base_size: u64,
    pub base_complete: bool,
    pub levels: Vec<LevelStats>,
    pub verdict: Verdict,
}

/// A report plus the survivors of the last evaluated level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub report: SearchReport,
    pub survivors: Vec<Host>,
}

/// Resumable search state, written at chunk-batch and level boundaries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchState {
    pub run_digest: String,
    pub completed: Vec<LevelStats>,
    /// order of the level in progress
    pub order: usize,
    /// survivors of the previous level; `None` while the base is evaluated
    pub parents: Option<Vec<Host>>,
    pub progress: LevelProgress,
    pub finished: Option<SearchOutcome>,
}

fn check_base(base: &BaseFrontier, config: &SearchConfig) -> Result<(), SearchError> {
    let r_lo = config.schedule.r_lo;
    for h in &base.hosts {
        if h.order() != r_lo {
            return Err(SearchError::BaseOrder { base: h.order(), r_lo });
        }
        if !h.is_tournament() {
            return Err(SearchError::NotTournament(h.provenance().to_string()));
        }
    }
    if config.level.chunk_size == 0 {
        return Err(SearchError::Schedule("chunk size must be positive".into()));
    }
    Ok(())
}

/// Runs the threshold search from the base order up to the stop order.
pub fn run_pipeline(base: &BaseFrontier, config: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    check_base(base, config)?;
    let state = SearchState {
        run_digest: config.run_digest(base),
        completed: Vec::new(),
        order: config.schedule.r_lo,
        parents: None,
        progress: LevelProgress::default(),
        finished: None,
    };
    drive(base, config, state)
}

/// Continues from a checkpointed state; the inputs must match the original run.
pub fn resume_pipeline(
    base: &BaseFrontier,
    config: &SearchConfig,
    state: SearchState,
) -> Result<SearchOutcome, SearchError> {
    check_base(base, config)?;
    let digest = config.run_digest(base);
    if state.run_digest != digest {
        return Err(SearchError::ResumeMismatch { expected: digest, found: state.run_digest });
    }
    if let Some(done) = state.finished {
        return Ok(done);
    }
    drive(base, config, state)
}

pub fn checkpoint_save(path: &std::path::Path, state: &SearchState) -> Result<(), SearchError> {
    checkpoint::save(path, state).map_err(SearchError::from)
}

pub fn checkpoint_resume(path: &std::path::Path) -> Result<SearchState, SearchError> {
    checkpoint::load(path).map_err(SearchError::from)
}

fn drive(base: &BaseFrontier, config: &SearchConfig, state: SearchState) -> Result<SearchOutcome, SearchError> {
    let workers = if config.workers == 0 { rayon::current_num_threads() } else { config.workers };
    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(|e| SearchError::Pool(e.to_string()))?;
    pool.install(|| drive_in_pool(base, config, state, workers))
}

fn drive_in_pool(
    base: &BaseFrontier,
    config: &SearchConfig,
    mut state: SearchState,
    workers: usize,
) -> Result<SearchOutcome, SearchError> {
    let top = config.top();
    let chunk = config.level.chunk_size;
    let batch = (workers as u64 * 4).max(1);
    let mut merged_total: u64 =
        state.completed.iter().map(|l| l.frontier_size.div_ceil(chunk)).sum::<u64>() + state.progress.next_chunk;
    let mut last_save = Instant::now();
    loop {
        let frontier = match &state.parents {
            None => Frontier::Explicit(base.hosts.clone()),
            Some(parents) => Frontier::Extensions { parents: parents.clone() },
        };
        if frontier.is_empty() {
            let outcome = conclude(base, config, &state, Vec::new(), Vec::new(), true);
            return finalize(config, state, outcome);
        }
        let threshold = config
            .schedule
            .threshold(state.order)
            .ok_or_else(|| SearchError::Schedule(format!("no threshold for order {}", state.order)))?
            .clone();
        let eval = LevelEvaluator::new(
            state.order,
            config.k,
            &config.vector,
            &threshold,
            config.level.guard.as_ref(),
            config.level.verify_presolve,
        )?;
        let total = frontier.len().div_ceil(chunk);
        while state.progress.next_chunk < total {
            let interrupted = config.cancel.as_ref().is_some_and(|c| c.load(Ordering::SeqCst))
                || config.stop_after_chunks.is_some_and(|s| merged_total >= s);
            if interrupted {
                if let Some(path) = &config.checkpoint {
                    checkpoint_save(path, &state)?;
                }
                return Err(SearchError::Interrupted { checkpoint: config.checkpoint.clone() });
            }
            let first = state.progress.next_chunk;
            let mut last = (first + batch).min(total);
            if let Some(stop) = config.stop_after_chunks {
                last = last.min(first + stop.saturating_sub(merged_total).max(1));
            }
            let results: Result<Vec<ChunkResult>, SearchError> = (first..last)
                .into_par_iter()
                .map(|c| eval.evaluate_range(&frontier, c * chunk, ((c + 1) * chunk).min(frontier.len())))
                .collect();
            let results = match results {
                Ok(r) => r,
                Err(e) => {
                    if let Some(path) = &config.checkpoint {
                        checkpoint_save(path, &state)?;
                    }
                    return Err(e);
                }
            };
            for r in results {
                eval.merge(&mut state.progress, r);
                merged_total += 1;
            }
            if let Some(path) = &config.checkpoint {
                if last_save.elapsed() >= config.checkpoint_interval {
                    checkpoint_save(path, &state)?;
                    last_save = Instant::now();
                }
            }
        }
        let (stats, survivors, values) = eval.finish(&frontier, &state.progress, config.level.dedup)?;
        state.completed.push(stats);
        if state.order >= top || survivors.is_empty() {
            let outcome = conclude(base, config, &state, survivors, values, false);
            return finalize(config, state, outcome);
        }
        state.order += 1;
        state.parents = Some(survivors);
        state.progress = LevelProgress::default();
        if let Some(path) = &config.checkpoint {
            checkpoint_save(path, &state)?;
            last_save = Instant::now();
        }
    }
}

fn conclude(
    base: &BaseFrontier,
    config: &SearchConfig,
    state: &SearchState,
    survivors: Vec<Host>,
    values: Vec<Rational>,
    empty_frontier: bool,
) -> SearchOutcome {
    let last_order = state.completed.last().map(|l| l.order).unwrap_or(config.schedule.r_lo);
    let verdict = if empty_frontier || survivors.is_empty() {
        if base.complete {
            Verdict::Certified
        } else {
            Verdict::Incomplete { reason: "base frontier is not a complete catalog".into() }
        }
    } else if last_order == config.schedule.r_hi {
        Verdict::Refuted { witness: survivors[0].clone(), value: values[0].clone() }
    } else {
        Verdict::Incomplete {
            reason: format!("stopped at order {last_order} below the top order {}", config.schedule.r_hi),
        }
    };
    let report = SearchReport {
        k: config.k,
        vector: config.vector.to_spec_string(),
        schedule: config.schedule.clone(),
        base_size: base.hosts.len() as u64,
        base_complete: base.complete,
        levels: state.completed.clone(),
        verdict,
    };
    SearchOutcome { report, survivors }
}

fn finalize(
    config: &SearchConfig,
    mut state: SearchState,
    outcome: SearchOutcome,
) -> Result<SearchOutcome, SearchError> {
    if let Some(path) = &config.checkpoint {
        state.finished = Some(outcome.clone());
        checkpoint_save(path, &state)?;
    }
    Ok(outcome)
}
