//! Floating-point two-phase simplex used only as a filter in front of the
//! exact solver.

use super::LpProblem;
use crate::ratio::to_f64;
use crate::Rational;

const EPS: f64 = 1e-9;
const DEGENERATE_SWITCH: usize = 50;
const MAX_PIVOTS: usize = 50_000;

/// Dense `f64` copy of an LP in equality form.
#[derive(Clone, Debug)]
pub struct FloatLp {
    pub m: usize,
    pub n: usize,
    /// row-major `m x n`
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl FloatLp {
    pub fn from_problem(p: &LpProblem) -> Self {
        let (m, n) = (p.rows(), p.cols());
        FloatLp {
            m,
            n,
            a: p.a.iter().flat_map(|row| row.iter().map(to_f64)).collect(),
            b: p.b.iter().map(to_f64).collect(),
            c: p.c.iter().map(to_f64).collect(),
        }
    }

    /// Optimum, or `None` when infeasible, unbounded or numerically stuck.
    pub fn solve(&self) -> Option<f64> {
        self.solve_with(&self.c)
    }

    /// Like [`FloatLp::solve`] with the objective replaced by `c`.
    pub fn solve_with(&self, c: &[f64]) -> Option<f64> {
        let (m, n) = (self.m, self.n);
        assert_eq!(c.len(), n, "objective length");
        let w = n + m + 1;
        let mut t = vec![0.0f64; (m + 2) * w];
        for i in 0..m {
            let sign = if self.b[i] < 0.0 { -1.0 } else { 1.0 };
            for j in 0..n {
                let v = sign * self.a[i * n + j];
                t[i * w + j] = v;
                t[m * w + j] -= v;
            }
            t[i * w + n + i] = 1.0;
            t[i * w + w - 1] = sign * self.b[i];
            t[m * w + w - 1] -= sign * self.b[i];
        }
        for j in 0..n {
            t[(m + 1) * w + j] = -c[j];
        }
        let mut basis: Vec<usize> = (n..n + m).collect();
        let mut pivots = 0usize;
        if !optimize(&mut t, &mut basis, m, w, m, n + m, &mut pivots)? {
            return None;
        }
        if t[m * w + w - 1] < -1e-7 {
            return None;
        }
        for r in 0..m {
            if basis[r] < n {
                continue;
            }
            if let Some(j) = (0..n).find(|&j| t[r * w + j].abs() > EPS) {
                pivot(&mut t, &mut basis, w, r, j);
            }
        }
        if !optimize(&mut t, &mut basis, m, w, m + 1, n, &mut pivots)? {
            return None;
        }
        Some(t[(m + 1) * w + w - 1])
    }
}

fn pivot(t: &mut [f64], basis: &mut [usize], w: usize, r: usize, s: usize) {
    let p = t[r * w + s];
    for v in &mut t[r * w..(r + 1) * w] {
        *v /= p;
    }
    let (before, rest) = t.split_at_mut(r * w);
    let (prow, after) = rest.split_at_mut(w);
    for row in before.chunks_exact_mut(w).chain(after.chunks_exact_mut(w)) {
        let f = row[s];
        if f != 0.0 {
            for (v, pv) in row.iter_mut().zip(prow.iter()) {
                *v -= f * pv;
            }
            row[s] = 0.0;
        }
    }
    basis[r] = s;
}

// Some(true) optimal, Some(false) unbounded, None stuck.
fn optimize(
    t: &mut [f64],
    basis: &mut [usize],
    m: usize,
    w: usize,
    obj: usize,
    allowed: usize,
    pivots: &mut usize,
) -> Option<bool> {
    let rhs = w - 1;
    let mut degenerate_run = 0;
    let mut bland = false;
    loop {
        let zrow = &t[obj * w..obj * w + allowed];
        let enter = if bland {
            zrow.iter().position(|&z| z < -EPS)
        } else {
            let mut best: Option<(usize, f64)> = None;
            for (j, &z) in zrow.iter().enumerate() {
                if z < -EPS && best.is_none_or(|(_, bz)| z < bz) {
                    best = Some((j, z));
                }
            }
            best.map(|(j, _)| j)
        };
        let Some(s) = enter else { return Some(true) };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let a = t[i * w + s];
            if a <= EPS {
                continue;
            }
            let ratio = t[i * w + rhs] / a;
            match leave {
                None => leave = Some((i, ratio)),
                Some((l, lr)) => {
                    if ratio < lr - EPS || ((ratio - lr).abs() <= EPS && basis[i] < basis[l]) {
                        leave = Some((i, ratio));
                    }
                }
            }
        }
        let Some((r, ratio)) = leave else { return Some(false) };
        if ratio.abs() <= EPS {
            degenerate_run += 1;
            if degenerate_run >= DEGENERATE_SWITCH {
                bland = true;
            }
        } else {
            degenerate_run = 0;
        }
        pivot(t, basis, w, r, s);
        *pivots += 1;
        if *pivots > MAX_PIVOTS {
            return None;
        }
    }
}

/// Which side of a threshold the optimum lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// optimum >= threshold
    Above,
    /// optimum < threshold
    Below,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Presolve {
    Decided { side: Side, estimate: f64 },
    Undecided { estimate: Option<f64> },
}

/// Float solve; decides only when the estimate is more than `guard` away from `threshold`.
pub fn presolve_float(lp: &FloatLp, threshold: f64, guard: f64) -> Presolve {
    match lp.solve() {
        Some(v) if v > threshold + guard => Presolve::Decided { side: Side::Above, estimate: v },
        Some(v) if v < threshold - guard => Presolve::Decided { side: Side::Below, estimate: v },
        estimate => Presolve::Undecided { estimate },
    }
}

/// [`presolve_float`] on a rational problem.
pub fn solve_float_presolve(p: &LpProblem, threshold: &Rational, guard: &Rational) -> Presolve {
    presolve_float(&FloatLp::from_problem(p), to_f64(threshold), to_f64(guard))
}
