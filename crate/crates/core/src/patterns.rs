//! Canonical `k`-vertex pair-labelled complete graphs ("patterns"), the
//! catalog of all patterns of a given order and kind, and weight vectors
//! indexed by a catalog.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ratio::{parse_rational, ParseRationalError};
use crate::Rational;

/// Smallest pattern order handled anywhere in the crate.
pub const MIN_ORDER: usize = 3;
/// Largest pattern order accepted by [`canonical_pattern`] (k! permutations).
pub const MAX_ORDER: usize = 7;
/// Default cap on the number of labelled pair-labellings enumerated by
/// [`build_catalog`]; admits binary kinds up to `k = 5`.
pub const DEFAULT_CATALOG_CAP: u64 = 4096;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern order {0} is outside the supported range {MIN_ORDER}..={MAX_ORDER}")]
    BadOrder(usize),
    #[error("expected {expected} pair labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("label {label} is not valid for kind {kind}")]
    InvalidLabel { label: u8, kind: String },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("colored kind needs a non-empty palette")]
    EmptyPalette,
    #[error("palette of {0} colors is too large (at most 10)")]
    PaletteTooLarge(usize),
    #[error("catalog of order {order} needs {needed} labellings, cap is {cap}")]
    CatalogTooLarge { order: usize, needed: u64, cap: u64 },
    #[error("pattern does not belong to this catalog")]
    ForeignPattern,
    #[error("weight vector is missing an entry for pattern {0}")]
    MissingWeight(String),
    #[error("duplicate weight for pattern {0}")]
    DuplicateWeight(String),
    #[error("bad pattern literal `{0}`")]
    BadLiteral(String),
    #[error("bad weight-vector line `{line}`: {reason}")]
    BadLine { line: String, reason: String },
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
}

/// What a pair label means.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LabelKind {
    /// Undirected graphs: `0` = non-edge, `1` = edge.
    Binary,
    /// Tournaments: for a pair `i < j`, `0` means `i -> j`, `1` means `j -> i`.
    Antisymmetric,
    /// Edge colorings of `K_k`; a label is an index into the ordered palette.
    Colored(Vec<String>),
}

impl LabelKind {
    pub fn bicolored() -> Self {
        LabelKind::Colored(vec!["blue".to_string(), "red".to_string()])
    }

    pub fn colored<S: AsRef<str>>(palette: &[S]) -> Result<Self, PatternError> {
        let kind = LabelKind::Colored(palette.iter().map(|s| s.as_ref().to_string()).collect());
        kind.validate()?;
        Ok(kind)
    }

    pub fn validate(&self) -> Result<(), PatternError> {
        match self {
            LabelKind::Colored(p) if p.is_empty() => Err(PatternError::EmptyPalette),
            LabelKind::Colored(p) if p.len() > 10 => Err(PatternError::PaletteTooLarge(p.len())),
            _ => Ok(()),
        }
    }

    /// Number of distinct labels a pair can carry.
    pub fn arity(&self) -> usize {
        match self {
            LabelKind::Binary | LabelKind::Antisymmetric => 2,
            LabelKind::Colored(p) => p.len(),
        }
    }

    pub fn is_valid(&self, label: u8) -> bool {
        (label as usize) < self.arity()
    }

    /// The label of pair `{i, j}` as seen when the endpoints swap order.
    #[inline]
    pub fn reversed(&self, label: u8) -> u8 {
        match self {
            LabelKind::Antisymmetric => label ^ 1,
            _ => label,
        }
    }

    /// The label counted by `e(H)`: edges for graphs, the first palette
    /// color (blue) for two-colorings. Tournaments have none.
    pub fn edge_label(&self) -> Option<u8> {
        match self {
            LabelKind::Binary => Some(1),
            LabelKind::Colored(p) if p.len() == 2 => Some(0),
            _ => None,
        }
    }

    pub fn label_name(&self, label: u8) -> String {
        match self {
            LabelKind::Binary => if label == 1 { "edge" } else { "non-edge" }.to_string(),
            LabelKind::Antisymmetric => if label == 0 { "forward" } else { "backward" }.to_string(),
            LabelKind::Colored(p) => p.get(label as usize).cloned().unwrap_or_default(),
        }
    }

    pub fn parse_label(&self, name: &str) -> Result<u8, PatternError> {
        let found = match (self, name) {
            (LabelKind::Binary, "edge" | "1") => Some(1),
            (LabelKind::Binary, "non-edge" | "0") => Some(0),
            (LabelKind::Antisymmetric, "forward" | "0") => Some(0),
            (LabelKind::Antisymmetric, "backward" | "1") => Some(1),
            (LabelKind::Colored(p), _) => p
                .iter()
                .position(|c| c == name)
                .or_else(|| name.parse::<usize>().ok().filter(|&i| i < p.len()))
                .map(|i| i as u8),
            _ => None,
        };
        found.ok_or_else(|| PatternError::UnknownLabel(name.to_string()))
    }
}

impl fmt::Display for LabelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelKind::Binary => write!(f, "binary"),
            LabelKind::Antisymmetric => write!(f, "antisymmetric"),
            LabelKind::Colored(p) => write!(f, "colored({})", p.join(",")),
        }
    }
}

/// Number of unordered pairs among `k` vertices.
#[inline]
pub fn pair_count(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// Row-major position of pair `{i, j}`, `i < j`, in an upper triangle of order `k`.
#[inline]
pub fn pair_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < k);
    i * (2 * k - i - 1) / 2 + (j - i - 1)
}

/// Label of pair `(a, b)` (any order) read from a row-major upper triangle,
/// oriented from `a` to `b`.
#[inline]
pub fn oriented_label(kind: &LabelKind, k: usize, labels: &[u8], a: usize, b: usize) -> u8 {
    if a < b {
        labels[pair_index(k, a, b)]
    } else {
        kind.reversed(labels[pair_index(k, b, a)])
    }
}

/// Relabels so that new vertex `x` is old vertex `perm[x]`.
pub fn permute_labels(kind: &LabelKind, k: usize, labels: &[u8], perm: &[usize]) -> Vec<u8> {
    let mut out = Vec::with_capacity(labels.len());
    for a in 0..k {
        for b in a + 1..k {
            out.push(oriented_label(kind, k, labels, perm[a], perm[b]));
        }
    }
    out
}

/// Advances `perm` to the next permutation in lexicographic order.
pub(crate) fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// An isomorphism class of `k`-vertex pair-labelled complete graphs, stored
/// in its canonical (lexicographically minimal) labelling.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pattern {
    order: usize,
    kind: LabelKind,
    labels: Vec<u8>,
}

impl Pattern {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> &LabelKind {
        &self.kind
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Canonical id: one byte per pair in row-major upper-triangle order.
    pub fn id(&self) -> &[u8] {
        &self.labels
    }

    /// Id rendered as a digit string, e.g. `010` for the cyclic triangle.
    pub fn literal(&self) -> String {
        self.labels.iter().map(|&l| char::from(b'0' + l)).collect()
    }

    /// Conventional name when one exists (`T3`, `C3`, `K4`, `P3`, ...).
    pub fn alias(&self) -> Option<String> {
        let k = self.order;
        let count = |l: u8| self.labels.iter().filter(|&&x| x == l).count();
        match &self.kind {
            LabelKind::Antisymmetric => {
                if count(1) == 0 {
                    Some(format!("T{k}"))
                } else if k == 3 {
                    Some("C3".to_string())
                } else {
                    None
                }
            }
            kind => {
                let edge = kind.edge_label()?;
                let edges = count(edge);
                let all = self.labels.len();
                match (k, edges) {
                    (_, e) if e == all => Some(format!("K{k}")),
                    (_, 0) => Some(format!("I{k}")),
                    (3, 2) => Some("P3".to_string()),
                    (3, 1) => Some("Q3".to_string()),
                    _ => None,
                }
            }
        }
    }

    pub fn name(&self) -> String {
        self.alias().unwrap_or_else(|| self.literal())
    }

    /// Number of pairs carrying `label`.
    pub fn label_count(&self, label: u8) -> Result<usize, PatternError> {
        if !self.kind.is_valid(label) {
            return Err(PatternError::InvalidLabel { label, kind: self.kind.to_string() });
        }
        Ok(self.labels.iter().filter(|&&l| l == label).count())
    }

    /// `e(H)`: number of edge-labelled (blue) pairs.
    pub fn edge_count(&self) -> Option<usize> {
        let edge = self.kind.edge_label()?;
        Some(self.labels.iter().filter(|&&l| l == edge).count())
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn check_labels(order: usize, kind: &LabelKind, labels: &[u8]) -> Result<(), PatternError> {
    if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
        return Err(PatternError::BadOrder(order));
    }
    kind.validate()?;
    if labels.len() != pair_count(order) {
        return Err(PatternError::LabelCount { expected: pair_count(order), got: labels.len() });
    }
    if let Some(&bad) = labels.iter().find(|&&l| !kind.is_valid(l)) {
        return Err(PatternError::InvalidLabel { label: bad, kind: kind.to_string() });
    }
    Ok(())
}

/// Lexicographic minimum of the serialized labels over all `k!` relabellings.
fn canonical_labels(kind: &LabelKind, k: usize, labels: &[u8]) -> Vec<u8> {
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = labels.to_vec();
    let mut scratch = Vec::with_capacity(labels.len());
    while next_permutation(&mut perm) {
        scratch.clear();
        // early exit on the first position that is already worse
        let mut worse = false;
        let mut better = false;
        'outer: for a in 0..k {
            for b in a + 1..k {
                let l = oriented_label(kind, k, labels, perm[a], perm[b]);
                if !better {
                    let pos = scratch.len();
                    if l > best[pos] {
                        worse = true;
                        break 'outer;
                    }
                    if l < best[pos] {
                        better = true;
                    }
                }
                scratch.push(l);
            }
        }
        if !worse && better {
            best.clone_from(&scratch);
        }
    }
    best
}

/// Canonicalizes a raw upper-triangle labelling of `K_order`.
pub fn canonical_pattern(order: usize, kind: &LabelKind, labels: &[u8]) -> Result<Pattern, PatternError> {
    check_labels(order, kind, labels)?;
    Ok(Pattern { order, kind: kind.clone(), labels: canonical_labels(kind, order, labels) })
}

/// All patterns of one order and kind, sorted by id, with a lookup table
/// from every labelled pair-labelling to its class.
#[derive(Clone, Debug)]
pub struct PatternCatalog {
    order: usize,
    kind: LabelKind,
    patterns: Vec<Pattern>,
    by_id: HashMap<Vec<u8>, usize>,
    // raw labelling (base-arity digits, first pair least significant) -> pattern index
    lookup: Vec<u16>,
    automorphisms: Vec<u64>,
}

/// Builds the catalog with the default labelling cap.
pub fn build_catalog(order: usize, kind: &LabelKind) -> Result<PatternCatalog, PatternError> {
    build_catalog_capped(order, kind, DEFAULT_CATALOG_CAP)
}

pub fn build_catalog_capped(order: usize, kind: &LabelKind, cap: u64) -> Result<PatternCatalog, PatternError> {
    if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
        return Err(PatternError::BadOrder(order));
    }
    kind.validate()?;
    let pairs = pair_count(order);
    let arity = kind.arity() as u64;
    let needed =
        arity.checked_pow(pairs as u32).ok_or(PatternError::CatalogTooLarge { order, needed: u64::MAX, cap })?;
    if needed > cap {
        return Err(PatternError::CatalogTooLarge { order, needed, cap });
    }

    let mut canon_of = Vec::with_capacity(needed as usize);
    let mut seen: HashMap<Vec<u8>, u64> = HashMap::new();
    let mut labels = vec![0u8; pairs];
    for code in 0..needed {
        decode_raw(code, arity, &mut labels);
        let canon = canonical_labels(kind, order, &labels);
        *seen.entry(canon.clone()).or_default() += 1;
        canon_of.push(canon);
    }
    let mut ids: Vec<Vec<u8>> = seen.keys().cloned().collect();
    ids.sort();
    let by_id: HashMap<Vec<u8>, usize> = ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
    let lookup = canon_of.iter().map(|c| by_id[c] as u16).collect();
    let factorial: u64 = (1..=order as u64).product();
    let automorphisms = ids.iter().map(|id| factorial / seen[id]).collect();
    let patterns = ids.into_iter().map(|labels| Pattern { order, kind: kind.clone(), labels }).collect();
    Ok(PatternCatalog { order, kind: kind.clone(), patterns, by_id, lookup, automorphisms })
}

fn decode_raw(mut code: u64, arity: u64, labels: &mut [u8]) {
    for l in labels.iter_mut() {
        *l = (code % arity) as u8;
        code /= arity;
    }
}

impl PatternCatalog {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> &LabelKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn get(&self, index: usize) -> &Pattern {
        &self.patterns[index]
    }

    /// Size of the automorphism group of pattern `index`.
    pub fn automorphism_count(&self, index: usize) -> u64 {
        self.automorphisms[index]
    }

    pub fn index_of(&self, pattern: &Pattern) -> Option<usize> {
        if pattern.order != self.order || pattern.kind != self.kind {
            return None;
        }
        self.by_id.get(&pattern.labels).copied()
    }

    /// Class index of a raw labelled upper triangle (assumed valid).
    #[inline]
    pub fn classify(&self, labels: &[u8]) -> usize {
        let arity = self.kind.arity() as u64;
        let code = labels.iter().rev().fold(0u64, |acc, &l| acc * arity + l as u64);
        self.lookup[code as usize] as usize
    }

    /// Resolves an alias (`T3`, `K4`, ...) or explicit digit literal.
    pub fn resolve(&self, literal: &str) -> Result<usize, PatternError> {
        let literal = literal.trim();
        if let Some(i) = self.patterns.iter().position(|p| p.alias().as_deref() == Some(literal)) {
            return Ok(i);
        }
        let bad = || PatternError::BadLiteral(literal.to_string());
        if literal.is_empty() || !literal.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let labels: Vec<u8> = literal.bytes().map(|b| b - b'0').collect();
        if labels.len() != pair_count(self.order) {
            return Err(bad());
        }
        let pattern = canonical_pattern(self.order, &self.kind, &labels)?;
        self.index_of(&pattern).ok_or_else(bad)
    }
}

/// Rational weight per catalog pattern.
#[derive(Clone, Debug)]
pub struct WeightVector {
    catalog: Arc<PatternCatalog>,
    weights: Vec<Rational>,
}

impl PartialEq for WeightVector {
    fn eq(&self, other: &Self) -> bool {
        self.catalog.order == other.catalog.order
            && self.catalog.kind == other.catalog.kind
            && self.weights == other.weights
    }
}

impl WeightVector {
    /// Weights listed in catalog order.
    pub fn from_weights(catalog: Arc<PatternCatalog>, weights: Vec<Rational>) -> Result<Self, PatternError> {
        if weights.len() != catalog.len() {
            let missing = catalog.get(weights.len().min(catalog.len().saturating_sub(1))).name();
            return Err(PatternError::MissingWeight(missing));
        }
        Ok(WeightVector { catalog, weights })
    }

    /// Every catalog pattern must appear exactly once.
    pub fn from_entries<I>(catalog: Arc<PatternCatalog>, entries: I) -> Result<Self, PatternError>
    where
        I: IntoIterator<Item = (Pattern, Rational)>,
    {
        let mut weights: Vec<Option<Rational>> = vec![None; catalog.len()];
        for (pattern, w) in entries {
            let i = catalog.index_of(&pattern).ok_or(PatternError::ForeignPattern)?;
            if weights[i].replace(w).is_some() {
                return Err(PatternError::DuplicateWeight(pattern.name()));
            }
        }
        let weights = weights
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or_else(|| PatternError::MissingWeight(catalog.get(i).name())))
            .collect::<Result<_, _>>()?;
        Ok(WeightVector { catalog, weights })
    }

    /// Parses `<pattern-literal>=<rational>` entries separated by newlines or
    /// commas; `#` starts a comment.
    pub fn parse(catalog: Arc<PatternCatalog>, text: &str) -> Result<Self, PatternError> {
        let mut weights: Vec<Option<Rational>> = vec![None; catalog.len()];
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("");
            for entry in line.split(',').map(str::trim).filter(|e| !e.is_empty()) {
                let (lit, value) = entry.split_once('=').ok_or_else(|| PatternError::BadLine {
                    line: entry.to_string(),
                    reason: "expected <pattern>=<rational>".to_string(),
                })?;
                let i = catalog.resolve(lit)?;
                let value = parse_rational(value)?;
                if weights[i].replace(value).is_some() {
                    return Err(PatternError::DuplicateWeight(catalog.get(i).name()));
                }
            }
        }
        let weights = weights
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or_else(|| PatternError::MissingWeight(catalog.get(i).name())))
            .collect::<Result<_, _>>()?;
        Ok(WeightVector { catalog, weights })
    }

    /// Indicator vector of one pattern.
    pub fn indicator(catalog: Arc<PatternCatalog>, index: usize) -> Self {
        let weights = (0..catalog.len()).map(|i| if i == index { Rational::one() } else { Rational::zero() }).collect();
        WeightVector { catalog, weights }
    }

    pub fn constant(catalog: Arc<PatternCatalog>, value: Rational) -> Self {
        let weights = vec![value; catalog.len()];
        WeightVector { catalog, weights }
    }

    pub fn catalog(&self) -> &Arc<PatternCatalog> {
        &self.catalog
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, index: usize) -> &Rational {
        &self.weights[index]
    }

    pub fn weight_of(&self, pattern: &Pattern) -> Option<&Rational> {
        self.catalog.index_of(pattern).map(|i| &self.weights[i])
    }

    pub fn max_weight(&self) -> Rational {
        self.weights.iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    /// Serializes as a vector file (one `<literal>=<p/q>` line per pattern).
    pub fn to_spec_string(&self) -> String {
        self.catalog
            .patterns()
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| format!("{}={}\n", p.name(), crate::ratio::fmt_rational(w)))
            .collect()
    }
}

/// Outcome of [`normalize_vector`].
#[derive(Clone, Debug, PartialEq)]
pub enum Normalized {
    /// `v = scale * vector + shift * 1` with `scale > 0`, `min(vector) = 0`, `max(vector) = 1`.
    Affine { vector: WeightVector, scale: Rational, shift: Rational },
    /// All coordinates equal `value`.
    Constant { value: Rational },
}

/// Dilates and translates `v` so its smallest coordinate is 0 and its largest is 1.
pub fn normalize_vector(v: &WeightVector) -> Normalized {
    let min = v.weights.iter().min().cloned().unwrap_or_else(Rational::zero);
    let max = v.weights.iter().max().cloned().unwrap_or_else(Rational::zero);
    if min == max {
        return Normalized::Constant { value: min };
    }
    let scale = &max - &min;
    let weights = v.weights.iter().map(|w| (w - &min) / &scale).collect();
    Normalized::Affine { vector: WeightVector { catalog: v.catalog.clone(), weights }, scale, shift: min }
}
