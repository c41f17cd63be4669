//! Fractional `K_k`-decomposition LPs and the quantities built on them:
//! `D*`, `nu*`, pattern masses, the integer optimum over exact
//! decompositions, bound calculators and the random-graph program.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::hosts::{Host, HostError};
use crate::lp::{self, FloatLp, LpProblem, LpSolution, LpStatus};
use crate::patterns::{pair_count, pair_index, LabelKind, Pattern, PatternCatalog, WeightVector};
use crate::ratio::{binomial, int};
use crate::Rational;

/// Largest host order accepted by [`integer_optimum`].
pub const INTEGER_OPTIMUM_CAP: usize = 9;

#[derive(Debug, Error, PartialEq)]
pub enum DecompError {
    #[error("weight vector is for order {vector} {vector_kind}, host is {host_kind} with k = {k}")]
    VectorMismatch { vector: usize, vector_kind: String, host_kind: String, k: usize },
    #[error("k = {k} exceeds host order {n}")]
    OrderTooSmall { k: usize, n: usize },
    #[error("pair {{{0}, {1}}} lies in no complete k-subset; no fractional decomposition exists")]
    UncoveredPair(usize, usize),
    #[error("host {0} has no fractional decomposition")]
    Infeasible(String),
    #[error("host has no present pair")]
    NoPairs,
    #[error("LP unexpectedly reported {0}")]
    Lp(LpStatus),
    #[error("certificate check failed for host {0}")]
    Certificate(String),
    #[error("operation needs a complete host")]
    NotComplete,
    #[error("K_{n} is not {k}-divisible")]
    NotDivisible { n: usize, k: usize },
    #[error("order {n} exceeds the cap {cap}")]
    Cap { n: usize, cap: usize },
    #[error("value must lie in [0, 1] and r >= 3")]
    BadBoundInput,
    #[error("probability must lie in [0, 1]")]
    BadProbability,
    #[error("vector must be indexed by a graph catalog (binary or two-color)")]
    NotGraphCatalog,
    #[error(transparent)]
    Host(#[from] HostError),
}

/// Whether pair rows are equalities (`= 1`) or packings (`<= 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CoverMode {
    #[default]
    Decomposition,
    Packing,
}

/// All `k`-subsets of the host whose pairs are all present, lexicographic.
pub fn k_subsets(host: &Host, k: usize) -> Vec<Vec<usize>> {
    let n = host.order();
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut current = Vec::with_capacity(k);
    fn rec(host: &Host, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let n = host.order();
        for v in start..=n - (k - current.len()) {
            if current.iter().all(|&u| host.label(u, v).is_some()) {
                current.push(v);
                rec(host, k, v + 1, current, out);
                current.pop();
            }
        }
    }
    rec(host, k, 0, &mut current, &mut out);
    out
}

fn check_vector(host: &Host, k: usize, v: &WeightVector) -> Result<(), DecompError> {
    let cat = v.catalog();
    if cat.order() != k || cat.kind() != host.kind() {
        return Err(DecompError::VectorMismatch {
            vector: cat.order(),
            vector_kind: cat.kind().to_string(),
            host_kind: host.kind().to_string(),
            k,
        });
    }
    Ok(())
}

/// Labels of the sub-pattern induced on `subset`, in row-major order.
fn sub_labels(host: &Host, subset: &[usize], out: &mut Vec<u8>) {
    out.clear();
    for (a, &u) in subset.iter().enumerate() {
        for &w in &subset[a + 1..] {
            out.push(host.label(u, w).expect("present pair"));
        }
    }
}

/// The decomposition LP of a host together with the bookkeeping needed to
/// read its solution back.
#[derive(Clone, Debug)]
pub struct DecompositionLp {
    pub problem: LpProblem,
    pub subsets: Vec<Vec<usize>>,
    /// catalog index of the pattern induced on each subset
    pub patterns: Vec<usize>,
    /// present pairs, one constraint row each
    pub pairs: Vec<(usize, usize)>,
    pub mode: CoverMode,
}

pub fn build_decomposition_lp(host: &Host, k: usize, v: &WeightVector) -> Result<DecompositionLp, DecompError> {
    build_decomposition_lp_with(host, k, v, CoverMode::Decomposition)
}

/// One variable per complete `k`-subset, one row per present pair (with a
/// slack column per row in packing mode), objective `v` of the induced pattern.
pub fn build_decomposition_lp_with(
    host: &Host,
    k: usize,
    v: &WeightVector,
    mode: CoverMode,
) -> Result<DecompositionLp, DecompError> {
    check_vector(host, k, v)?;
    let n = host.order();
    let subsets = k_subsets(host, k);
    let cat = v.catalog();
    let mut labels = Vec::with_capacity(pair_count(k));
    let patterns: Vec<usize> = subsets
        .iter()
        .map(|s| {
            sub_labels(host, s, &mut labels);
            cat.classify(&labels)
        })
        .collect();

    let mut row_of = vec![usize::MAX; pair_count(n)];
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if host.label(i, j).is_some() {
                row_of[pair_index(n, i, j)] = pairs.len();
                pairs.push((i, j));
            }
        }
    }
    let slack = if mode == CoverMode::Packing { pairs.len() } else { 0 };
    let cols = subsets.len() + slack;
    let mut a = vec![vec![Rational::zero(); cols]; pairs.len()];
    let mut covered = vec![false; pairs.len()];
    for (x, s) in subsets.iter().enumerate() {
        for (p, &u) in s.iter().enumerate() {
            for &w in &s[p + 1..] {
                let r = row_of[pair_index(n, u, w)];
                a[r][x] = Rational::one();
                covered[r] = true;
            }
        }
    }
    if mode == CoverMode::Decomposition {
        if let Some(r) = covered.iter().position(|c| !c) {
            return Err(DecompError::UncoveredPair(pairs[r].0, pairs[r].1));
        }
    }
    for (r, row) in a.iter_mut().enumerate().take(slack) {
        row[subsets.len() + r] = Rational::one();
    }
    let mut c: Vec<Rational> = patterns.iter().map(|&p| v.weight(p).clone()).collect();
    c.extend(std::iter::repeat_n(Rational::zero(), slack));
    let mut names: Vec<String> =
        subsets.iter().map(|s| format!("f{}", s.iter().map(usize::to_string).collect::<Vec<_>>().join("_"))).collect();
    names.extend(pairs.iter().take(slack).map(|(i, j)| format!("slack{i}_{j}")));
    let b = vec![Rational::one(); pairs.len()];
    let problem = LpProblem::new(a, b, c, names).expect("consistent dimensions");
    Ok(DecompositionLp { problem, subsets, patterns, pairs, mode })
}

/// A fractional `K_k`-decomposition (or packing) of a host.
#[derive(Clone, Debug)]
pub struct FractionalDecomposition {
    pub host: Host,
    pub k: usize,
    pub catalog: Arc<PatternCatalog>,
    pub subsets: Vec<Vec<usize>>,
    pub patterns: Vec<usize>,
    pub weights: Vec<Rational>,
    pub mode: CoverMode,
}

impl FractionalDecomposition {
    /// Total weight `sum_X f(X)`.
    pub fn total_mass(&self) -> Rational {
        self.weights.iter().sum()
    }

    /// `D_v(f) = sum_X v(pattern(X)) f(X)`.
    pub fn value(&self, v: &WeightVector) -> Rational {
        self.patterns.iter().zip(&self.weights).map(|(&p, w)| v.weight(p) * w).sum()
    }

    /// `nu*_v(f) = D_v(f) C(k,2) / |E(G)|`.
    pub fn normalized_value(&self, v: &WeightVector) -> Rational {
        self.value(v) * int(pair_count(self.k) as i64) / int(self.host.present_pairs() as i64)
    }

    /// Exact check of the per-pair constraints and weight bounds.
    pub fn is_valid(&self) -> bool {
        let n = self.host.order();
        let mut load = vec![Rational::zero(); pair_count(n)];
        for (s, w) in self.subsets.iter().zip(&self.weights) {
            if w.is_negative() || *w > Rational::one() {
                return false;
            }
            for (p, &u) in s.iter().enumerate() {
                for &x in &s[p + 1..] {
                    load[pair_index(n, u, x)] += w;
                }
            }
        }
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let l = &load[pair_index(n, i, j)];
                match (self.host.label(i, j), self.mode) {
                    (None, _) => l.is_zero(),
                    (Some(_), CoverMode::Decomposition) => l.is_one(),
                    (Some(_), CoverMode::Packing) => *l <= Rational::one(),
                }
            })
        })
    }
}

/// `f(G, H)` for every catalog pattern `H`.
#[derive(Clone, Debug)]
pub struct PatternMass {
    pub catalog: Arc<PatternCatalog>,
    pub masses: Vec<Rational>,
}

impl PatternMass {
    pub fn mass_of(&self, pattern: &Pattern) -> Option<&Rational> {
        self.catalog.index_of(pattern).map(|i| &self.masses[i])
    }

    pub fn total(&self) -> Rational {
        self.masses.iter().sum()
    }

    /// `sum_H v_H f(G, H)`.
    pub fn value(&self, v: &WeightVector) -> Rational {
        self.masses.iter().zip(v.weights()).map(|(m, w)| m * w).sum()
    }
}

pub fn pattern_mass(f: &FractionalDecomposition) -> PatternMass {
    let mut masses = vec![Rational::zero(); f.catalog.len()];
    for (&p, w) in f.patterns.iter().zip(&f.weights) {
        masses[p] += w;
    }
    PatternMass { catalog: f.catalog.clone(), masses }
}

/// Exact `D*_v(G)` with its certified LP solution.
#[derive(Clone, Debug)]
pub struct Dstar {
    pub value: Rational,
    pub decomposition: FractionalDecomposition,
    pub solution: LpSolution,
}

pub fn dstar(host: &Host, k: usize, v: &WeightVector) -> Result<Dstar, DecompError> {
    dstar_with(host, k, v, CoverMode::Decomposition)
}

pub fn dstar_with(host: &Host, k: usize, v: &WeightVector, mode: CoverMode) -> Result<Dstar, DecompError> {
    let lp = match build_decomposition_lp_with(host, k, v, mode) {
        Err(DecompError::UncoveredPair(..)) => return Err(DecompError::Infeasible(host.provenance().to_string())),
        other => other?,
    };
    let solution = lp::solve(&lp.problem);
    match solution.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(DecompError::Infeasible(host.provenance().to_string())),
        status => return Err(DecompError::Lp(status)),
    }
    if !lp::verify_certificate(&lp.problem, &solution).unwrap_or(false) {
        return Err(DecompError::Certificate(host.provenance().to_string()));
    }
    let value = solution.value.clone().expect("optimal");
    let weights = solution.x[..lp.subsets.len()].to_vec();
    let decomposition = FractionalDecomposition {
        host: host.clone(),
        k,
        catalog: v.catalog().clone(),
        subsets: lp.subsets,
        patterns: lp.patterns,
        weights,
        mode,
    };
    Ok(Dstar { value, decomposition, solution })
}

/// How [`nustar_with`] reports a host without a fractional decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum InfeasiblePolicy {
    #[default]
    Error,
    /// Report 0, as in aggregate computations over all hosts.
    Zero,
}

/// `nu*_v(G) = D*_v(G) C(k,2) / |E(G)|`.
pub fn nustar(host: &Host, k: usize, v: &WeightVector) -> Result<Rational, DecompError> {
    nustar_with(host, k, v, InfeasiblePolicy::Error)
}

pub fn nustar_with(host: &Host, k: usize, v: &WeightVector, policy: InfeasiblePolicy) -> Result<Rational, DecompError> {
    let edges = host.present_pairs();
    if edges == 0 {
        return Err(DecompError::NoPairs);
    }
    match dstar(host, k, v) {
        Ok(d) => Ok(d.value * int(pair_count(k) as i64) / int(edges as i64)),
        Err(DecompError::Infeasible(_)) if policy == InfeasiblePolicy::Zero => Ok(Rational::zero()),
        Err(e) => Err(e),
    }
}

/// `f(X) = 1/(n-2)` on every triple of a complete host.
pub fn uniform_decomposition(
    host: &Host,
    catalog: Arc<PatternCatalog>,
) -> Result<FractionalDecomposition, DecompError> {
    let n = host.order();
    if !host.is_complete() {
        return Err(DecompError::NotComplete);
    }
    if n < 3 {
        return Err(DecompError::OrderTooSmall { k: 3, n });
    }
    if catalog.order() != 3 || catalog.kind() != host.kind() {
        return Err(DecompError::VectorMismatch {
            vector: catalog.order(),
            vector_kind: catalog.kind().to_string(),
            host_kind: host.kind().to_string(),
            k: 3,
        });
    }
    let subsets = k_subsets(host, 3);
    let mut labels = Vec::with_capacity(3);
    let patterns = subsets
        .iter()
        .map(|s| {
            sub_labels(host, s, &mut labels);
            catalog.classify(&labels)
        })
        .collect();
    let w = Rational::new(1.into(), ((n - 2) as i64).into());
    let weights = vec![w; subsets.len()];
    Ok(FractionalDecomposition {
        host: host.clone(),
        k: 3,
        catalog,
        subsets,
        patterns,
        weights,
        mode: CoverMode::Decomposition,
    })
}

/// `k - 1 | n - 1` and `C(k,2) | C(n,2)`.
pub fn divisible(n: usize, k: usize) -> bool {
    n >= 1 && k >= 2 && (n - 1).is_multiple_of(k - 1) && binomial(n, 2).is_multiple_of(binomial(k, 2))
}

/// An optimal exact decomposition and its value `nu_v(L)`.
#[derive(Clone, Debug)]
pub struct IntegerOptimum {
    /// Average of `v` over the blocks.
    pub value: Rational,
    /// Blocks with the catalog index of their pattern.
    pub blocks: Vec<(Vec<usize>, usize)>,
}

/// Maximum of `nu_v(L)` over all partitions of the pairs of a complete host
/// into `k`-sets, by backtracking with a max-weight bound.
pub fn integer_optimum(host: &Host, k: usize, v: &WeightVector) -> Result<IntegerOptimum, DecompError> {
    check_vector(host, k, v)?;
    let n = host.order();
    if !host.is_complete() {
        return Err(DecompError::NotComplete);
    }
    if n > INTEGER_OPTIMUM_CAP {
        return Err(DecompError::Cap { n, cap: INTEGER_OPTIMUM_CAP });
    }
    if !divisible(n, k) {
        return Err(DecompError::NotDivisible { n, k });
    }
    let blocks_needed = binomial(n, 2) / binomial(k, 2);
    let subsets = k_subsets(host, k);
    let cat = v.catalog();
    let mut labels = Vec::new();
    let patterns: Vec<usize> = subsets
        .iter()
        .map(|s| {
            sub_labels(host, s, &mut labels);
            cat.classify(&labels)
        })
        .collect();
    let masks: Vec<u64> = subsets
        .iter()
        .map(|s| {
            let mut m = 0u64;
            for (p, &u) in s.iter().enumerate() {
                for &w in &s[p + 1..] {
                    m |= 1 << pair_index(n, u, w);
                }
            }
            m
        })
        .collect();
    // candidates per pair: subsets containing it, heaviest first
    let mut by_pair: Vec<Vec<usize>> = vec![Vec::new(); pair_count(n)];
    for (x, &m) in masks.iter().enumerate() {
        for (p, list) in by_pair.iter_mut().enumerate() {
            if m >> p & 1 == 1 {
                list.push(x);
            }
        }
    }
    for list in &mut by_pair {
        list.sort_by(|&a, &b| v.weight(patterns[b]).cmp(v.weight(patterns[a])).then(a.cmp(&b)));
    }
    let full: u64 = if pair_count(n) == 64 { u64::MAX } else { (1u64 << pair_count(n)) - 1 };
    let max_w = v.max_weight();

    struct Search<'a> {
        masks: &'a [u64],
        patterns: &'a [usize],
        by_pair: &'a [Vec<usize>],
        v: &'a WeightVector,
        max_w: Rational,
        full: u64,
        blocks_needed: u64,
        chosen: Vec<usize>,
        best: Option<(Rational, Vec<usize>)>,
    }
    impl Search<'_> {
        fn go(&mut self, covered: u64, sum: Rational) {
            if covered == self.full {
                if self.best.as_ref().is_none_or(|(b, _)| sum > *b) {
                    self.best = Some((sum, self.chosen.clone()));
                }
                return;
            }
            if let Some((best, _)) = &self.best {
                let left = self.blocks_needed - self.chosen.len() as u64;
                if &sum + &self.max_w * int(left as i64) <= *best {
                    return;
                }
            }
            let pair = (!covered).trailing_zeros() as usize;
            for &x in &self.by_pair[pair] {
                if self.masks[x] & covered != 0 {
                    continue;
                }
                self.chosen.push(x);
                let next = &sum + self.v.weight(self.patterns[x]);
                self.go(covered | self.masks[x], next);
                self.chosen.pop();
            }
        }
    }
    let mut search = Search {
        masks: &masks,
        patterns: &patterns,
        by_pair: &by_pair,
        v,
        max_w,
        full,
        blocks_needed,
        chosen: Vec::new(),
        best: None,
    };
    search.go(0, Rational::zero());
    let (sum, chosen) = search.best.ok_or(DecompError::NotDivisible { n, k })?;
    let value = if blocks_needed == 0 { Rational::zero() } else { sum / int(blocks_needed as i64) };
    let blocks = chosen.into_iter().map(|x| (subsets[x].clone(), patterns[x])).collect();
    Ok(IntegerOptimum { value, blocks })
}

/// `(value (r - 1) + 1) / r`.
pub fn asymptotic_bound(r: usize, value: &Rational) -> Result<Rational, DecompError> {
    if r < 3 || value.is_negative() || *value > Rational::one() {
        return Err(DecompError::BadBoundInput);
    }
    let r = int(r as i64);
    Ok((value * (&r - int(1)) + int(1)) / r)
}

/// `(n / (n - 2)) * avg_v D*(G - v)`, a lower bound on `D*(G)` obtained by
/// averaging optimal decompositions of the vertex-deleted subhosts.
pub fn deletion_average_bound(host: &Host, k: usize, v: &WeightVector) -> Result<Rational, DecompError> {
    let n = host.order();
    if n < k + 1 {
        return Err(DecompError::OrderTooSmall { k: k + 1, n });
    }
    let mut total = Rational::zero();
    for u in 0..n {
        total += dstar(&host.delete_vertex(u)?, k, v)?.value;
    }
    Ok(total / int(n as i64 - 2))
}

/// The two-row program over pattern frequencies of a random graph `G(n, p)`.
#[derive(Clone, Debug)]
pub struct RandomGraphProgram {
    pub problem: LpProblem,
    pub value: Rational,
    pub x: Vec<Rational>,
    pub solution: LpSolution,
}

pub fn random_graph_lp(k: usize, v: &WeightVector, p: &Rational) -> Result<RandomGraphProgram, DecompError> {
    let problem = random_graph_problem(k, v, p)?;
    let solution = lp::solve(&problem);
    if !solution.is_optimal() {
        return Err(DecompError::Lp(solution.status));
    }
    if !lp::verify_certificate(&problem, &solution).unwrap_or(false) {
        return Err(DecompError::Certificate("random-graph program".to_string()));
    }
    Ok(RandomGraphProgram { value: solution.value.clone().expect("optimal"), x: solution.x.clone(), problem, solution })
}

pub fn random_graph_problem(k: usize, v: &WeightVector, p: &Rational) -> Result<LpProblem, DecompError> {
    let cat = v.catalog();
    let edge_ok = matches!(cat.kind(), LabelKind::Binary) || cat.kind().edge_label().is_some();
    if cat.order() != k || !edge_ok {
        return Err(DecompError::NotGraphCatalog);
    }
    if p.is_negative() || *p > Rational::one() {
        return Err(DecompError::BadProbability);
    }
    let pairs = int(pair_count(k) as i64);
    let density_row =
        cat.patterns().iter().map(|h| int(h.edge_count().expect("graph catalog") as i64) - p * &pairs).collect();
    let a = vec![density_row, vec![Rational::one(); cat.len()]];
    let names = cat.patterns().iter().map(|h| format!("x_{}", h.name())).collect();
    Ok(LpProblem::new(a, vec![Rational::zero(), Rational::one()], v.weights().to_vec(), names).expect("dimensions"))
}

/// `x_{K_k} = p`, `x_{I_k} = 1 - p`, all else 0.
pub fn random_graph_witness(catalog: &PatternCatalog, p: &Rational) -> Vec<Rational> {
    let k = catalog.order();
    catalog
        .patterns()
        .iter()
        .map(|h| match h.edge_count() {
            Some(e) if e == pair_count(k) => p.clone(),
            Some(0) => Rational::one() - p,
            _ => Rational::zero(),
        })
        .collect()
}

/// Exact feasibility of `x` for an equality-form problem.
pub fn is_feasible(problem: &LpProblem, x: &[Rational]) -> bool {
    x.len() == problem.cols()
        && x.iter().all(|q| !q.is_negative())
        && problem
            .matrix()
            .iter()
            .zip(problem.rhs())
            .all(|(row, b)| row.iter().zip(x).map(|(a, x)| a * x).sum::<Rational>() == *b)
}

/// The decomposition LP skeleton shared by all complete hosts of one order:
/// only the objective depends on the host.
#[derive(Clone, Debug)]
pub struct CompleteTemplate {
    n: usize,
    k: usize,
    subsets: Vec<Vec<usize>>,
    float: FloatLp,
}

impl CompleteTemplate {
    pub fn new(n: usize, k: usize) -> Result<Self, DecompError> {
        if k < 2 || k > n {
            return Err(DecompError::OrderTooSmall { k, n });
        }
        let mut subsets = Vec::with_capacity(binomial(n, k) as usize);
        let mut current: Vec<usize> = (0..k).collect();
        loop {
            subsets.push(current.clone());
            let Some(i) = (0..k).rev().find(|&i| current[i] < n - k + i) else { break };
            current[i] += 1;
            for j in i + 1..k {
                current[j] = current[j - 1] + 1;
            }
        }
        let m = pair_count(n);
        let cols = subsets.len();
        let mut a = vec![0.0; m * cols];
        for (x, s) in subsets.iter().enumerate() {
            for (p, &u) in s.iter().enumerate() {
                for &w in &s[p + 1..] {
                    a[pair_index(n, u, w) * cols + x] = 1.0;
                }
            }
        }
        let float = FloatLp { m, n: cols, a, b: vec![1.0; m], c: vec![0.0; cols] };
        Ok(CompleteTemplate { n, k, subsets, float })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Catalog index of the pattern on every subset, in subset order.
    pub fn patterns(&self, host: &Host, catalog: &PatternCatalog) -> Vec<usize> {
        let mut labels = Vec::with_capacity(pair_count(self.k));
        self.subsets
            .iter()
            .map(|s| {
                sub_labels(host, s, &mut labels);
                catalog.classify(&labels)
            })
            .collect()
    }

    /// Floating-point estimate of `D*` for a complete host of this order.
    pub fn float_value(&self, host: &Host, catalog: &PatternCatalog, weights: &[f64]) -> Option<f64> {
        debug_assert!(host.order() == self.n && host.is_complete());
        let c: Vec<f64> = self.patterns(host, catalog).into_iter().map(|p| weights[p]).collect();
        self.float.solve_with(&c)
    }
}
