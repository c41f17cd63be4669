//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vdecomp::hosts::Host;
use vdecomp::lp::LpProblem;
use vdecomp::ratio::int;
use vdecomp::Rational;

/// Solves `M z = rhs` by Gauss-Jordan elimination. Returns `None` when the
/// columns of `M` are dependent or the system is inconsistent.
pub fn unique_solution(m: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rational>> =
        m.iter().zip(rhs).map(|(r, b)| r.iter().cloned().chain([b.clone()]).collect()).collect();
    let mut pivot_row = 0;
    for col in 0..cols {
        let p = (pivot_row..rows).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(pivot_row, p);
        let inv = Rational::one() / &aug[pivot_row][col];
        for x in aug[pivot_row].iter_mut() {
            *x *= &inv;
        }
        let pivot = aug[pivot_row].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != pivot_row && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivot_row += 1;
    }
    if aug[pivot_row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    Some(aug[..cols].iter().map(|r| r[cols].clone()).collect())
}

/// Every basic feasible solution of `Ax = b, x >= 0`: a feasible point whose
/// support columns are linearly independent.
pub fn basic_feasible_solutions(a: &[Vec<Rational>], b: &[Rational], n: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for support in 0u32..1 << n {
        let cols: Vec<usize> = (0..n).filter(|j| support >> j & 1 == 1).collect();
        if cols.len() > a.len() {
            continue;
        }
        let sub: Vec<Vec<Rational>> = a.iter().map(|row| cols.iter().map(|&j| row[j].clone()).collect()).collect();
        if let Some(z) = unique_solution(&sub, b) {
            if z.iter().all(|v| !v.is_negative()) {
                let mut x = vec![Rational::zero(); n];
                for (&j, v) in cols.iter().zip(z) {
                    x[j] = v;
                }
                out.push(x);
            }
        }
    }
    out
}

pub enum Oracle {
    Infeasible,
    Unbounded,
    Optimal(Rational),
}

pub fn dot(c: &[Rational], x: &[Rational]) -> Rational {
    c.iter().zip(x).map(|(c, x)| c * x).sum()
}

/// Vertex enumeration on the polyhedron, plus extreme rays
/// (`Ad = 0, sum d = 1, d >= 0`) to detect unboundedness.
pub fn oracle(p: &LpProblem) -> Oracle {
    let n = p.cols();
    let vertices = basic_feasible_solutions(p.matrix(), p.rhs(), n);
    if vertices.is_empty() {
        return Oracle::Infeasible;
    }
    let mut ray_rows: Vec<Vec<Rational>> = p.matrix().to_vec();
    ray_rows.push(vec![Rational::one(); n]);
    let mut ray_rhs = vec![Rational::zero(); p.rows()];
    ray_rhs.push(Rational::one());
    let rays = basic_feasible_solutions(&ray_rows, &ray_rhs, n);
    if rays.iter().any(|d| dot(p.objective(), d).is_positive()) {
        return Oracle::Unbounded;
    }
    Oracle::Optimal(vertices.iter().map(|x| dot(p.objective(), x)).max().expect("nonempty"))
}

/// Small-integer data. A `bounded` instance gets a last row with positive
/// coefficients and contains a known feasible point, so it is optimal.
pub fn random_lp(rng: &mut ChaCha8Rng, max_rows: usize, max_cols: usize, bounded: bool) -> LpProblem {
    let m = rng.random_range(1..=max_rows);
    let n = rng.random_range(1..=max_cols);
    let entry = |rng: &mut ChaCha8Rng| int(rng.random_range(-3i64..=3));
    let mut a: Vec<Vec<Rational>> = (0..m).map(|_| (0..n).map(|_| entry(rng)).collect()).collect();
    if bounded {
        a[m - 1] = (0..n).map(|_| int(rng.random_range(1i64..=3))).collect();
    }
    // mostly feasible by construction; sometimes an arbitrary right-hand side
    let b = if bounded || rng.random_bool(0.75) {
        let x0: Vec<Rational> = (0..n).map(|_| int(rng.random_range(0i64..=2))).collect();
        a.iter().map(|row| dot(row, &x0)).collect()
    } else {
        (0..m).map(|_| entry(rng)).collect()
    };
    let c = (0..n).map(|_| entry(rng)).collect();
    LpProblem::new(a, b, c, Vec::new()).unwrap()
}

/// Adjacency matrix of a tournament, `m[i][j]` iff `i -> j`.
pub fn adjacency(t: &Host) -> Vec<Vec<bool>> {
    let n = t.order();
    (0..n).map(|i| (0..n).map(|j| i != j && t.beats(i, j)).collect()).collect()
}

/// Smallest row-major adjacency string over all `n!` relabellings, with no
/// pruning. Equal for two tournaments iff they are isomorphic.
pub fn brute_canonical(t: &Host) -> Vec<bool> {
    let m = adjacency(t);
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<bool>> = None;
    loop {
        let word: Vec<bool> = (0..n).flat_map(|i| (0..n).map(|j| m[perm[i]][perm[j]]).collect::<Vec<_>>()).collect();
        if best.as_ref().is_none_or(|b| word < *b) {
            best = Some(word);
        }
        // next permutation in lexicographic order
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).expect("successor");
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    best.unwrap_or_default()
}

/// digraph6 written out by hand: `&`, `n + 63`, then the row-major
/// adjacency bits in groups of six, zero padded, each group plus 63.
pub fn reference_digraph6(m: &[Vec<bool>]) -> String {
    let n = m.len();
    assert!(n <= 62);
    let bits: Vec<bool> = m.iter().flatten().copied().collect();
    let mut out = String::from("&");
    out.push((n as u8 + 63) as char);
    for group in bits.chunks(6) {
        let mut v = 0u8;
        for (k, &b) in group.iter().enumerate() {
            if b {
                v |= 1 << (5 - k);
            }
        }
        out.push((v + 63) as char);
    }
    out
}

/// graph6 by hand: size byte, then the upper triangle column by column.
pub fn reference_graph6(n: usize, mut edge: impl FnMut(usize, usize) -> bool) -> String {
    assert!(n <= 62);
    let mut bits = Vec::new();
    for j in 1..n {
        for i in 0..j {
            bits.push(edge(i, j));
        }
    }
    let mut out = String::new();
    out.push((n as u8 + 63) as char);
    for group in bits.chunks(6) {
        let mut v = 0u8;
        for (k, &b) in group.iter().enumerate() {
            if b {
                v |= 1 << (5 - k);
            }
        }
        out.push((v + 63) as char);
    }
    out
}

/// Path of a file in the workspace `testdata` directory.
pub fn testdata(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../testdata").join(name)
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
