//! Host objects: tournaments, bicolored graphs and colored complete graphs
//! (pairs may be absent), plus the constructions used by the search:
//! one-vertex extensions, vertex deletion, cyclic blow-ups, enumeration of
//! non-isomorphic tournaments and a canonical form for deduplication.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::patterns::{pair_count, pair_index, LabelKind, PatternError};
use crate::Rational;

/// Marker for a pair that carries no label.
pub const ABSENT: u8 = u8::MAX;
/// Default cap for [`Host::canonical_form`].
pub const DEFAULT_CANONICAL_CAP: usize = 16;
/// Largest order accepted by [`enumerate_nonisomorphic_tournaments`].
pub const MAX_ENUMERATION_ORDER: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HostError {
    #[error("pair {{{0}, {1}}} has no orientation")]
    MissingPair(usize, usize),
    #[error("pair {{{0}, {1}}} is oriented twice")]
    DoubleOrientation(usize, usize),
    #[error("vertex {vertex} out of range for order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    Loop(usize),
    #[error("repeated edge {{{0}, {1}}}")]
    MultiEdge(usize, usize),
    #[error("extension mask {mask:#b} out of range for order {order}")]
    MaskOutOfRange { mask: u64, order: usize },
    #[error("operation needs a tournament")]
    NotTournament,
    #[error("pair table has {got} entries, expected {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("label {label} invalid for {kind}")]
    BadLabel { label: u8, kind: String },
    #[error("blow-up needs at least one part and no empty part")]
    EmptyPart,
    #[error("order {order} exceeds the cap {cap}")]
    OrderCap { order: usize, cap: usize },
    #[error("cannot delete from a host of order {0}")]
    TooSmall(usize),
    #[error("probability must lie in [0, 1]")]
    BadProbability,
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

/// An `n`-vertex pair-labelled graph.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Host {
    n: usize,
    kind: LabelKind,
    // row-major upper triangle; `ABSENT` marks a missing pair
    pairs: Vec<u8>,
    provenance: String,
}

impl PartialEq for Host {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.kind == other.kind && self.pairs == other.pairs
    }
}

impl Eq for Host {}

impl Host {
    /// Builds a host from a row-major upper-triangle table.
    pub fn new(n: usize, kind: LabelKind, pairs: Vec<u8>, provenance: impl Into<String>) -> Result<Self, HostError> {
        kind.validate()?;
        if pairs.len() != pair_count(n) {
            return Err(HostError::TableSize { expected: pair_count(n), got: pairs.len() });
        }
        if let Some(&bad) = pairs.iter().find(|&&l| l != ABSENT && !kind.is_valid(l)) {
            return Err(HostError::BadLabel { label: bad, kind: kind.to_string() });
        }
        Ok(Host { n, kind, pairs, provenance: provenance.into() })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &LabelKind {
        &self.kind
    }

    pub fn pair_table(&self) -> &[u8] {
        &self.pairs
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    /// Label of the pair `{a, b}` oriented from `a` to `b`; `None` if absent.
    #[inline]
    pub fn label(&self, a: usize, b: usize) -> Option<u8> {
        debug_assert!(a != b);
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        let l = self.pairs[pair_index(self.n, i, j)];
        if l == ABSENT {
            None
        } else if a < b {
            Some(l)
        } else {
            Some(self.kind.reversed(l))
        }
    }

    /// `a -> b` in a tournament.
    #[inline]
    pub fn beats(&self, a: usize, b: usize) -> bool {
        self.label(a, b) == Some(0)
    }

    pub fn is_complete(&self) -> bool {
        !self.pairs.contains(&ABSENT)
    }

    pub fn is_tournament(&self) -> bool {
        self.kind == LabelKind::Antisymmetric && self.is_complete()
    }

    /// Number of present pairs, `|E(G)|`.
    pub fn present_pairs(&self) -> usize {
        self.pairs.iter().filter(|&&l| l != ABSENT).count()
    }

    pub fn label_count(&self, label: u8) -> usize {
        self.pairs.iter().filter(|&&l| l == label).count()
    }

    /// Out-neighbourhood bitmasks of a tournament (n <= 64).
    pub fn out_masks(&self) -> Vec<u64> {
        let mut masks = vec![0u64; self.n];
        for a in 0..self.n {
            for b in a + 1..self.n {
                match self.pairs[pair_index(self.n, a, b)] {
                    0 => masks[a] |= 1 << b,
                    1 => masks[b] |= 1 << a,
                    _ => {}
                }
            }
        }
        masks
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        self.out_masks().iter().map(|m| m.count_ones() as usize).collect()
    }

    /// Adds vertex `r = n`; bit `i` of `mask` set means the new vertex beats `i`.
    pub fn extend(&self, mask: u64) -> Result<Host, HostError> {
        if !self.is_tournament() {
            return Err(HostError::NotTournament);
        }
        let r = self.n;
        if r < 64 && mask >> r != 0 {
            return Err(HostError::MaskOutOfRange { mask, order: r });
        }
        let m = r + 1;
        let mut pairs = Vec::with_capacity(pair_count(m));
        for i in 0..r {
            for j in i + 1..r {
                pairs.push(self.pairs[pair_index(r, i, j)]);
            }
            // pair (i, r): label 0 means i -> r
            pairs.push(if mask >> i & 1 == 1 { 1 } else { 0 });
        }
        Ok(Host { n: m, kind: LabelKind::Antisymmetric, pairs, provenance: format!("{}+ext({mask})", self.provenance) })
    }

    /// Induced host on all vertices but `v`; remaining vertices keep their relative order.
    pub fn delete_vertex(&self, v: usize) -> Result<Host, HostError> {
        if v >= self.n {
            return Err(HostError::VertexOutOfRange { vertex: v, order: self.n });
        }
        if self.n < 2 {
            return Err(HostError::TooSmall(self.n));
        }
        let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        Ok(self.induced(&keep).with_provenance(format!("{}-v{v}", self.provenance)))
    }

    /// Induced host on `vertices` (in the given order; new vertex `x` is old `vertices[x]`).
    pub fn induced(&self, vertices: &[usize]) -> Host {
        let m = vertices.len();
        let mut pairs = Vec::with_capacity(pair_count(m));
        for a in 0..m {
            for b in a + 1..m {
                pairs.push(self.label(vertices[a], vertices[b]).unwrap_or(ABSENT));
            }
        }
        Host { n: m, kind: self.kind.clone(), pairs, provenance: self.provenance.clone() }
    }

    /// Canonical form with the default order cap.
    pub fn canonical_form(&self) -> Result<Vec<u8>, HostError> {
        self.canonical_form_capped(DEFAULT_CANONICAL_CAP)
    }

    pub fn canonical_form_capped(&self, cap: usize) -> Result<Vec<u8>, HostError> {
        self.canonical_labelling(cap).map(|(form, _)| form)
    }

    /// The canonically relabelled copy of this host.
    pub fn canonical_host(&self) -> Result<Host, HostError> {
        let (_, perm) = self.canonical_labelling(DEFAULT_CANONICAL_CAP)?;
        Ok(self.induced(&perm))
    }

    /// Lexicographically smallest column-major pair table over all vertex
    /// orders compatible with an isomorphism-invariant refinement of the
    /// label-degree partition. Returns the form (prefixed by `n`) and the
    /// vertex order attaining it.
    pub fn canonical_labelling(&self, cap: usize) -> Result<(Vec<u8>, Vec<usize>), HostError> {
        if self.n > cap {
            return Err(HostError::OrderCap { order: self.n, cap });
        }
        let classes = self.refined_classes();
        let mut slots: Vec<usize> = classes.clone();
        slots.sort_unstable();
        let mut search = CanonSearch {
            host: self,
            classes: &classes,
            slots: &slots,
            used: vec![false; self.n],
            order: Vec::with_capacity(self.n),
            current: Vec::with_capacity(pair_count(self.n)),
            best: None,
            best_order: Vec::new(),
        };
        search.place();
        let mut form = Vec::with_capacity(pair_count(self.n) + 1);
        form.push(self.n as u8);
        form.extend(search.best.unwrap_or_default());
        Ok((form, search.best_order))
    }

    /// Iterated label-degree refinement; class ids are ranks of invariants,
    /// so they do not depend on the vertex numbering.
    fn refined_classes(&self) -> Vec<usize> {
        let n = self.n;
        let arity = self.kind.arity() + 1;
        let slot = |l: Option<u8>| l.map_or(arity - 1, |l| l as usize);
        let mut classes = vec![0usize; n];
        let mut count = 1;
        loop {
            let invariants: Vec<(usize, Vec<usize>)> = (0..n)
                .map(|a| {
                    let mut tally = vec![0usize; arity * count];
                    for b in (0..n).filter(|&b| b != a) {
                        tally[slot(self.label(a, b)) * count + classes[b]] += 1;
                    }
                    (classes[a], tally)
                })
                .collect();
            let distinct: BTreeSet<&(usize, Vec<usize>)> = invariants.iter().collect();
            let ranked: Vec<&(usize, Vec<usize>)> = distinct.into_iter().collect();
            let next: Vec<usize> = invariants.iter().map(|inv| ranked.binary_search(&inv).expect("present")).collect();
            let next_count = ranked.len();
            classes = next;
            if next_count == count {
                return classes;
            }
            count = next_count;
        }
    }
}

struct CanonSearch<'a> {
    host: &'a Host,
    classes: &'a [usize],
    slots: &'a [usize],
    used: Vec<bool>,
    order: Vec<usize>,
    current: Vec<u8>,
    best: Option<Vec<u8>>,
    best_order: Vec<usize>,
}

impl CanonSearch<'_> {
    // prunes every prefix that is already larger than the best complete form
    fn place(&mut self) {
        let pos = self.order.len();
        if pos == self.host.n {
            if self.best.as_ref().is_none_or(|b| self.current < *b) {
                self.best = Some(self.current.clone());
                self.best_order = self.order.clone();
            }
            return;
        }
        let want = self.slots[pos];
        for v in 0..self.host.n {
            if self.used[v] || self.classes[v] != want {
                continue;
            }
            let start = self.current.len();
            for &u in &self.order {
                self.current.push(self.host.label(u, v).unwrap_or(ABSENT));
            }
            let prune = self.best.as_ref().is_some_and(|b| self.current[..] > b[..self.current.len()]);
            if !prune {
                self.used[v] = true;
                self.order.push(v);
                self.place();
                self.order.pop();
                self.used[v] = false;
            }
            self.current.truncate(start);
        }
    }
}

impl fmt::Display for Host {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[n={}, {}]", self.provenance, self.n, self.kind)
    }
}

/// Builds a tournament from its arcs `(a, b)` meaning `a -> b`.
pub fn tournament_from_pairs(n: usize, arcs: &[(usize, usize)]) -> Result<Host, HostError> {
    let mut pairs = vec![ABSENT; pair_count(n)];
    for &(a, b) in arcs {
        if a >= n || b >= n {
            return Err(HostError::VertexOutOfRange { vertex: a.max(b), order: n });
        }
        if a == b {
            return Err(HostError::Loop(a));
        }
        let (i, j, l) = if a < b { (a, b, 0) } else { (b, a, 1) };
        let slot = &mut pairs[pair_index(n, i, j)];
        if *slot != ABSENT {
            return Err(HostError::DoubleOrientation(i, j));
        }
        *slot = l;
    }
    if let Some(idx) = pairs.iter().position(|&l| l == ABSENT) {
        let (i, j) = pair_at(n, idx);
        return Err(HostError::MissingPair(i, j));
    }
    Host::new(n, LabelKind::Antisymmetric, pairs, format!("pairs(n={n})"))
}

/// Inverse of [`pair_index`].
pub fn pair_at(n: usize, idx: usize) -> (usize, usize) {
    let mut rest = idx;
    for i in 0..n {
        let row = n - i - 1;
        if rest < row {
            return (i, i + 1 + rest);
        }
        rest -= row;
    }
    panic!("pair index {idx} out of range for order {n}");
}

/// Orientation of the pairs inside one blow-up part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InnerOrientation {
    /// Lower index beats higher index.
    Transitive,
    /// Independent fair coin per pair from the given seed.
    SeededRandom(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupSpec {
    pub parts: Vec<usize>,
    pub inner: InnerOrientation,
}

impl BlowupSpec {
    pub fn transitive(parts: &[usize]) -> Self {
        BlowupSpec { parts: parts.to_vec(), inner: InnerOrientation::Transitive }
    }

    pub fn order(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of pairs with both ends in one part.
    pub fn intra_pairs(&self) -> usize {
        self.parts.iter().map(|&a| pair_count(a)).sum()
    }
}

/// Cyclic blow-up: parts `0..m` laid out consecutively, every arc between
/// part `i` and part `i + 1 (mod m)` points forward. For `m >= 4`, part `i`
/// beats part `j` when `(j - i) mod m` is below `m / 2`, ties at exactly
/// `m / 2` going from the lower-numbered part.
pub fn blowup_cyclic(spec: &BlowupSpec) -> Result<Host, HostError> {
    if spec.parts.is_empty() || spec.parts.contains(&0) {
        return Err(HostError::EmptyPart);
    }
    let m = spec.parts.len();
    let n = spec.order();
    let part_of: Vec<usize> = spec.parts.iter().enumerate().flat_map(|(p, &a)| std::iter::repeat_n(p, a)).collect();
    let mut rng = match spec.inner {
        InnerOrientation::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        InnerOrientation::Transitive => None,
    };
    let mut pairs = Vec::with_capacity(pair_count(n));
    for a in 0..n {
        for b in a + 1..n {
            let (pa, pb) = (part_of[a], part_of[b]);
            let forward = if pa == pb {
                match rng.as_mut() {
                    Some(rng) => rng.random_bool(0.5),
                    None => true,
                }
            } else {
                let d = (pb + m - pa) % m;
                2 * d < m || (2 * d == m && pa < pb)
            };
            pairs.push(if forward { 0 } else { 1 });
        }
    }
    let parts: Vec<String> = spec.parts.iter().map(usize::to_string).collect();
    let inner = match spec.inner {
        InnerOrientation::Transitive => "transitive".to_string(),
        InnerOrientation::SeededRandom(s) => format!("seed={s}"),
    };
    Host::new(n, LabelKind::Antisymmetric, pairs, format!("blowup({};{inner})", parts.join(",")))
}

/// Transitive tournament on `n` vertices (`i -> j` for `i < j`).
pub fn transitive_tournament(n: usize) -> Host {
    Host { n, kind: LabelKind::Antisymmetric, pairs: vec![0; pair_count(n)], provenance: format!("transitive({n})") }
}

/// Graph on `n` vertices as a blue/red coloring of `K_n`: edges blue, non-edges red.
pub fn graph_to_bicolored(n: usize, edges: &[(usize, usize)]) -> Result<Host, HostError> {
    let mut pairs = vec![1u8; pair_count(n)];
    for &(a, b) in edges {
        if a >= n || b >= n {
            return Err(HostError::VertexOutOfRange { vertex: a.max(b), order: n });
        }
        if a == b {
            return Err(HostError::Loop(a));
        }
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        let slot = &mut pairs[pair_index(n, i, j)];
        if *slot == 0 {
            return Err(HostError::MultiEdge(i, j));
        }
        *slot = 0;
    }
    Host::new(n, LabelKind::bicolored(), pairs, format!("graph(n={n},e={})", edges.len()))
}

/// Complete bipartite graph `K_{a,b}` as a bicolored `K_{a+b}`.
pub fn complete_bipartite_bicolored(a: usize, b: usize) -> Host {
    let edges: Vec<(usize, usize)> = (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j))).collect();
    graph_to_bicolored(a + b, &edges).expect("valid edge list").with_provenance(format!("K({a},{b})"))
}

/// Random host from a ChaCha8 stream seeded with `seed`.
///
/// Pairs are visited in row-major order and drawn independently: a pair is
/// an edge (binary), blue (two-color palette) or oriented `i -> j`
/// (antisymmetric) with probability `p`; palettes with three or more colors
/// are drawn uniformly and ignore `p`. Bernoulli draws are exact: a uniform
/// integer below the denominator of `p` is compared with its numerator.
pub fn random_host(kind: &LabelKind, n: usize, p: &Rational, seed: u64) -> Result<Host, HostError> {
    kind.validate()?;
    if p.is_negative() || *p > Rational::one() {
        return Err(HostError::BadProbability);
    }
    let (num, den) = bernoulli_parts(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arity = kind.arity();
    let hit = kind.edge_label().unwrap_or(0);
    let miss = if arity == 2 { 1 - hit } else { 0 };
    let pairs = (0..pair_count(n))
        .map(|_| {
            if arity > 2 {
                rng.random_range(0..arity as u8)
            } else if rng.random_range(0..den) < num {
                hit
            } else {
                miss
            }
        })
        .collect();
    Host::new(n, kind.clone(), pairs, format!("random({kind},n={n},p={},seed={seed})", crate::ratio::fmt_rational(p)))
}

// (numerator, denominator) fitting in u64; huge denominators are rounded to 2^62.
fn bernoulli_parts(p: &Rational) -> (u64, u64) {
    match (p.numer().to_u64(), p.denom().to_u64()) {
        (Some(n), Some(d)) => (n, d),
        _ => {
            let scale: BigInt = BigInt::one() << 62;
            let scaled = (p * Rational::from_integer(scale.clone())).floor();
            (scaled.to_integer().to_u64().unwrap_or(0), 1u64 << 62)
        }
    }
}

/// One representative per isomorphism class of `n`-vertex tournaments,
/// sorted by canonical form. Representatives are canonically labelled.
pub fn enumerate_nonisomorphic_tournaments(n: usize) -> Result<Vec<Host>, HostError> {
    if n > MAX_ENUMERATION_ORDER {
        return Err(HostError::OrderCap { order: n, cap: MAX_ENUMERATION_ORDER });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut level = vec![transitive_tournament(1)];
    for r in 1..n {
        let forms: BTreeSet<(Vec<u8>, Vec<u8>)> = level
            .par_iter()
            .flat_map_iter(|t| {
                (0..1u64 << r).map(move |mask| {
                    let ext = t.extend(mask).expect("tournament extension");
                    let (form, perm) = ext.canonical_labelling(DEFAULT_CANONICAL_CAP).expect("under cap");
                    (form, ext.induced(&perm).pairs)
                })
            })
            .collect();
        level = forms
            .into_iter()
            .map(|(_, pairs)| Host { n: r + 1, kind: LabelKind::Antisymmetric, pairs, provenance: String::new() })
            .collect();
    }
    for (i, t) in level.iter_mut().enumerate() {
        t.provenance = format!("enum({n})#{i}");
    }
    Ok(level)
}

/// Number of isomorphism classes obtained by canonicalizing every labelled
/// tournament on `n` vertices. Independent of the extension-based generator.
pub fn count_tournaments_by_exhaustion(n: usize) -> Result<usize, HostError> {
    if n > 7 {
        return Err(HostError::OrderCap { order: n, cap: 7 });
    }
    let pairs = pair_count(n);
    let forms: BTreeSet<Vec<u8>> = (0..1u64 << pairs)
        .into_par_iter()
        .map(|code| {
            let table = (0..pairs).map(|i| (code >> i & 1) as u8).collect();
            let host = Host { n, kind: LabelKind::Antisymmetric, pairs: table, provenance: String::new() };
            host.canonical_form().expect("under cap")
        })
        .collect();
    Ok(forms.len())
}
