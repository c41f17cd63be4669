use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SearchError;
use crate::decomp::{dstar, CompleteTemplate};
use crate::hosts::Host;
use crate::patterns::WeightVector;
use crate::ratio::to_f64;
use crate::Rational;

/// The hosts of one search level. Extension frontiers are generated on the
/// fly: index `i` is the extension of parent `i >> r` by mask `i mod 2^r`.
#[derive(Clone, Debug)]
pub enum Frontier {
    Explicit(Vec<Host>),
    Extensions { parents: Vec<Host> },
}

impl Frontier {
    /// Order of the hosts, or `None` for an empty frontier.
    pub fn order(&self) -> Option<usize> {
        match self {
            Frontier::Explicit(h) => h.first().map(Host::order),
            Frontier::Extensions { parents } => parents.first().map(|p| p.order() + 1),
        }
    }

    pub fn len(&self) -> u64 {
        match self {
            Frontier::Explicit(h) => h.len() as u64,
            Frontier::Extensions { parents } => match parents.first() {
                Some(p) => (parents.len() as u64) << p.order(),
                None => 0,
            },
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn host(&self, index: u64) -> Host {
        match self {
            Frontier::Explicit(h) => h[index as usize].clone(),
            Frontier::Extensions { parents } => {
                let r = parents[0].order();
                let parent = &parents[(index >> r) as usize];
                parent.extend(index & ((1u64 << r) - 1)).expect("mask below 2^r")
            }
        }
    }

    pub fn materialize(&self) -> Vec<Host> {
        (0..self.len()).map(|i| self.host(i)).collect()
    }
}

/// All `2^r` one-vertex extensions of every survivor, survivor-major and
/// mask-ascending.
pub fn extend_frontier(survivors: &[Host]) -> Result<Frontier, SearchError> {
    if let Some(first) = survivors.first() {
        if first.order() >= 63 {
            return Err(SearchError::Schedule("extension masks need order below 63".into()));
        }
        if let Some(bad) = survivors.iter().find(|h| h.order() != first.order()) {
            return Err(SearchError::MixedOrders { expected: first.order(), found: bad.order() });
        }
    }
    Ok(Frontier::Extensions { parents: survivors.to_vec() })
}

/// Per-level summary; the columns of the search table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStats {
    pub order: usize,
    pub frontier_size: u64,
    #[serde(with = "crate::ratio::serde_rational")]
    pub threshold: Rational,
    /// multiset count of hosts with `D* < threshold`
    pub below: u64,
    /// isomorphism classes among them, when deduplication was requested
    pub distinct_below: Option<u64>,
    /// exact minimum of `D*` over the frontier
    #[serde(with = "crate::ratio::serde_rational_opt")]
    pub lowest: Option<Rational>,
    pub exact_solves: u64,
    pub presolve_decided: u64,
}

/// Everything that stays fixed while a level is evaluated.
pub struct LevelEvaluator {
    template: CompleteTemplate,
    vector: WeightVector,
    weights: Vec<f64>,
    threshold: Rational,
    threshold_f64: f64,
    guard: Option<f64>,
    verify_presolve: bool,
}

impl LevelEvaluator {
    pub fn new(
        order: usize,
        k: usize,
        vector: &WeightVector,
        threshold: &Rational,
        guard: Option<&Rational>,
        verify_presolve: bool,
    ) -> Result<Self, SearchError> {
        let template = CompleteTemplate::new(order, k)
            .map_err(|e| SearchError::Lp { provenance: format!("order {order} template"), source: e })?;
        Ok(LevelEvaluator {
            template,
            weights: vector.weights().iter().map(to_f64).collect(),
            vector: vector.clone(),
            threshold: threshold.clone(),
            threshold_f64: to_f64(threshold),
            guard: guard.map(to_f64),
            verify_presolve,
        })
    }

    fn exact(&self, host: &Host) -> Result<Rational, SearchError> {
        dstar(host, self.template.k(), &self.vector)
            .map(|d| d.value)
            .map_err(|e| SearchError::Lp { provenance: host.provenance().to_string(), source: e })
    }

    /// Evaluates one host against the level threshold.
    pub fn evaluate(&self, host: &Host) -> Result<HostOutcome, SearchError> {
        if !host.is_tournament() || host.order() != self.template.order() {
            return Err(SearchError::NotTournament(host.provenance().to_string()));
        }
        let Some(guard) = self.guard else {
            let value = self.exact(host)?;
            return Ok(HostOutcome::Exact(value));
        };
        let estimate = self.template.float_value(host, self.vector.catalog(), &self.weights);
        match estimate {
            Some(e) if e > self.threshold_f64 + guard => {
                if self.verify_presolve {
                    let value = self.exact(host)?;
                    if value < self.threshold {
                        return Err(SearchError::PresolveDisagreement(host.provenance().to_string()));
                    }
                }
                Ok(HostOutcome::Above { estimate: e })
            }
            _ => Ok(HostOutcome::Exact(self.exact(host)?)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum HostOutcome {
    /// Solved exactly.
    Exact(Rational),
    /// Float estimate clear of the guard band above the threshold.
    Above { estimate: f64 },
}

/// Running aggregate of one level, merged chunk by chunk in index order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LevelProgress {
    pub next_chunk: u64,
    /// frontier index and exact value of every host below the threshold
    pub below: Vec<(u64, String)>,
    pub exact_solves: u64,
    pub presolve_decided: u64,
    #[serde(with = "crate::ratio::serde_rational_opt")]
    pub min_exact: Option<Rational>,
    /// hosts decided by the presolve whose estimate is near the smallest one
    pub near_min: Vec<(u64, f64)>,
}

#[derive(Debug, Default)]
pub(crate) struct ChunkResult {
    below: Vec<(u64, Rational)>,
    exact_solves: u64,
    presolve_decided: u64,
    min_exact: Option<Rational>,
    near_min: Vec<(u64, f64)>,
}

fn keep_near_min(list: &mut Vec<(u64, f64)>, band: f64) {
    if let Some(min) = list.iter().map(|&(_, e)| e).min_by(f64::total_cmp) {
        list.retain(|&(_, e)| e <= min + band);
    }
}

impl LevelEvaluator {
    fn band(&self) -> f64 {
        2.0 * self.guard.unwrap_or(0.0)
    }

    pub(crate) fn evaluate_range(&self, frontier: &Frontier, start: u64, end: u64) -> Result<ChunkResult, SearchError> {
        let mut out = ChunkResult::default();
        for index in start..end {
            let host = frontier.host(index);
            match self.evaluate(&host)? {
                HostOutcome::Exact(value) => {
                    out.exact_solves += 1;
                    if out.min_exact.as_ref().is_none_or(|m| value < *m) {
                        out.min_exact = Some(value.clone());
                    }
                    if value < self.threshold {
                        out.below.push((index, value));
                    }
                }
                HostOutcome::Above { estimate } => {
                    out.presolve_decided += 1;
                    out.near_min.push((index, estimate));
                }
            }
        }
        keep_near_min(&mut out.near_min, self.band());
        Ok(out)
    }

    pub(crate) fn merge(&self, progress: &mut LevelProgress, chunk: ChunkResult) {
        progress.next_chunk += 1;
        progress.below.extend(chunk.below.into_iter().map(|(i, v)| (i, crate::ratio::fmt_rational(&v))));
        progress.exact_solves += chunk.exact_solves;
        progress.presolve_decided += chunk.presolve_decided;
        if let Some(m) = chunk.min_exact {
            if progress.min_exact.as_ref().is_none_or(|p| m < *p) {
                progress.min_exact = Some(m);
            }
        }
        progress.near_min.extend(chunk.near_min);
        keep_near_min(&mut progress.near_min, self.band());
    }

    /// Turns a fully merged level into stats and the survivor list.
    pub(crate) fn finish(
        &self,
        frontier: &Frontier,
        progress: &LevelProgress,
        dedup: bool,
    ) -> Result<(LevelStats, Vec<Host>, Vec<Rational>), SearchError> {
        let mut exact_solves = progress.exact_solves;
        let values: Vec<Rational> =
            progress.below.iter().map(|(_, v)| crate::ratio::parse_rational(v).expect("stored by merge")).collect();
        let survivors: Vec<Host> = progress.below.iter().map(|&(i, _)| frontier.host(i)).collect();
        let mut lowest = progress.min_exact.clone();
        if values.is_empty() && !progress.near_min.is_empty() {
            // the minimum lies among presolve-decided hosts; settle it exactly
            let solved: Result<Vec<Rational>, SearchError> =
                progress.near_min.par_iter().map(|&(i, _)| self.exact(&frontier.host(i))).collect();
            for value in solved? {
                exact_solves += 1;
                if lowest.as_ref().is_none_or(|l| value < *l) {
                    lowest = Some(value);
                }
            }
        }
        let distinct_below = if dedup {
            let forms: Result<BTreeSet<Vec<u8>>, _> = survivors.par_iter().map(Host::canonical_form).collect();
            Some(forms?.len() as u64)
        } else {
            None
        };
        let stats = LevelStats {
            order: self.template.order(),
            frontier_size: frontier.len(),
            threshold: self.threshold.clone(),
            below: survivors.len() as u64,
            distinct_below,
            lowest,
            exact_solves,
            presolve_decided: progress.presolve_decided,
        };
        Ok((stats, survivors, values))
    }
}

/// Evaluation options shared by [`run_level`] and the pipeline.
#[derive(Clone, Debug)]
pub struct LevelOptions {
    pub chunk_size: u64,
    /// float presolve guard band; `None` solves every host exactly
    pub guard: Option<Rational>,
    /// also solve presolve-decided hosts exactly and fail on disagreement
    pub verify_presolve: bool,
    pub dedup: bool,
}

impl Default for LevelOptions {
    fn default() -> Self {
        LevelOptions {
            chunk_size: super::DEFAULT_CHUNK_SIZE,
            guard: Some(crate::ratio::rat(1, 100)),
            verify_presolve: false,
            dedup: true,
        }
    }
}

/// Result of one level: survivors in frontier order with their exact `D*`.
#[derive(Clone, Debug)]
pub struct LevelOutcome {
    pub stats: LevelStats,
    pub survivors: Vec<Host>,
    pub values: Vec<Rational>,
}

/// Evaluates every host of `frontier` and keeps those with `D* < threshold`.
pub fn run_level(
    frontier: &Frontier,
    k: usize,
    v: &WeightVector,
    threshold: &Rational,
    options: &LevelOptions,
) -> Result<LevelOutcome, SearchError> {
    let order = frontier.order().ok_or(SearchError::EmptyFrontier)?;
    if let Frontier::Explicit(hosts) = frontier {
        if let Some(bad) = hosts.iter().find(|h| h.order() != order) {
            return Err(SearchError::MixedOrders { expected: order, found: bad.order() });
        }
    }
    let eval = LevelEvaluator::new(order, k, v, threshold, options.guard.as_ref(), options.verify_presolve)?;
    let chunk = options.chunk_size.max(1);
    let chunks = frontier.len().div_ceil(chunk);
    let results: Result<Vec<ChunkResult>, SearchError> = (0..chunks)
        .into_par_iter()
        .map(|c| eval.evaluate_range(frontier, c * chunk, ((c + 1) * chunk).min(frontier.len())))
        .collect();
    let mut progress = LevelProgress::default();
    for r in results? {
        eval.merge(&mut progress, r);
    }
    let (stats, survivors, values) = eval.finish(frontier, &progress, options.dedup)?;
    Ok(LevelOutcome { stats, survivors, values })
}
