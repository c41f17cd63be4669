//! Fraction-free (Bareiss-style) two-phase simplex over integers.
//!
//! The tableau is kept as an integer matrix `T` with a common positive
//! denominator `d`; the actual tableau is `T / d`. Every entry of `T` is a
//! minor of the bordered constraint matrix, so the division in each pivot is
//! exact. The solver first runs on `i128` with checked arithmetic and falls
//! back to `BigInt` on overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{LpProblem, LpSolution, LpStatus};
use crate::Rational;

/// Consecutive degenerate pivots tolerated before switching from the
/// largest-coefficient rule to Bland's rule for the rest of the solve.
const DEGENERATE_SWITCH: usize = 50;

pub(crate) trait Ring: Clone + Ord + std::fmt::Debug {
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Option<Self>;
    /// `(a * p - b * c) / d`, exact.
    fn fused(a: &Self, p: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self>;
    /// `(a * p) / d`, exact.
    fn scale(a: &Self, p: &Self, d: &Self) -> Option<Self>;
}

impl Ring for i128 {
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_pos(&self) -> bool {
        *self > 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    #[inline]
    fn fused(a: &Self, p: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self> {
        let left = a.checked_mul(*p)?;
        let right = if *b == 0 { 0 } else { b.checked_mul(*c)? };
        let num = left.checked_sub(right)?;
        if *d == 1 {
            Some(num)
        } else {
            Some(num / d)
        }
    }
    #[inline]
    fn scale(a: &Self, p: &Self, d: &Self) -> Option<Self> {
        if *a == 0 {
            return Some(0);
        }
        let num = a.checked_mul(*p)?;
        if *d == 1 {
            Some(num)
        } else {
            Some(num / d)
        }
    }
}

impl Ring for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn fused(a: &Self, p: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self> {
        let num = a * p - b * c;
        Some(if d.is_one() { num } else { num / d })
    }
    fn scale(a: &Self, p: &Self, d: &Self) -> Option<Self> {
        if Zero::is_zero(a) {
            return Some(Zero::zero());
        }
        let num = a * p;
        Some(if d.is_one() { num } else { num / d })
    }
}

/// Integer data equivalent to an [`LpProblem`]: row `i` was multiplied by
/// `row_factor[i]` (nonzero, sign chosen so that `b_i >= 0`) and the
/// objective by `obj_factor > 0`.
pub(crate) struct ScaledProblem {
    pub m: usize,
    pub n: usize,
    pub a: Vec<Vec<BigInt>>,
    pub b: Vec<BigInt>,
    pub c: Vec<BigInt>,
    pub row_factor: Vec<BigInt>,
    pub obj_factor: BigInt,
}

impl ScaledProblem {
    pub fn from_problem(p: &LpProblem) -> Self {
        let m = p.rows();
        let n = p.cols();
        let mut a = Vec::with_capacity(m);
        let mut b = Vec::with_capacity(m);
        let mut row_factor = Vec::with_capacity(m);
        for i in 0..m {
            let mut l = p.b[i].denom().clone();
            for q in &p.a[i] {
                l = l.lcm(q.denom());
            }
            if p.b[i].is_negative() {
                l = -l;
            }
            let lq = Rational::from_integer(l.clone());
            a.push(p.a[i].iter().map(|q| (q * &lq).to_integer()).collect());
            b.push((&p.b[i] * &lq).to_integer());
            row_factor.push(l);
        }
        let mut g = <BigInt as One>::one();
        for q in &p.c {
            g = g.lcm(q.denom());
        }
        let gq = Rational::from_integer(g.clone());
        let c = p.c.iter().map(|q| (q * &gq).to_integer()).collect();
        ScaledProblem { m, n, a, b, c, row_factor, obj_factor: g }
    }
}

pub(crate) struct Outcome {
    pub status: LpStatus,
    /// basic column per row (artificial columns are `n + i`)
    pub basis: Vec<usize>,
    /// numerators of basic values, dual values and objective; all over `denom`
    pub rhs: Vec<BigInt>,
    pub dual: Vec<BigInt>,
    pub objective: BigInt,
    pub denom: BigInt,
    pub pivots: usize,
}

struct Tableau<T: Ring> {
    m: usize,
    n: usize,
    width: usize,
    // m constraint rows, then phase-1 row, then phase-2 row
    cells: Vec<T>,
    denom: T,
    basis: Vec<usize>,
    pivots: usize,
}

#[derive(Debug)]
struct Overflow;

impl<T: Ring> Tableau<T> {
    fn build(sp: &ScaledProblem) -> Option<Self> {
        let (m, n) = (sp.m, sp.n);
        let width = n + m + 1;
        let mut cells = vec![T::zero(); (m + 2) * width];
        let mut phase1 = vec![T::zero(); width];
        for i in 0..m {
            let row = &mut cells[i * width..(i + 1) * width];
            for (cell, a) in row.iter_mut().zip(&sp.a[i]) {
                *cell = T::from_big(a)?;
            }
            row[n + i] = T::one();
            row[width - 1] = T::from_big(&sp.b[i])?;
        }
        // phase-1 objective: maximize -sum(artificials); z_j = -sum_i a_ij on real columns
        for j in (0..n).chain(std::iter::once(width - 1)) {
            let mut s = <BigInt as Zero>::zero();
            for i in 0..m {
                s -= if j == width - 1 { &sp.b[i] } else { &sp.a[i][j] };
            }
            phase1[j] = T::from_big(&s)?;
        }
        cells[m * width..(m + 1) * width].clone_from_slice(&phase1);
        let p2 = (m + 1) * width;
        for j in 0..n {
            cells[p2 + j] = T::from_big(&-&sp.c[j])?;
        }
        Some(Tableau { m, n, width, cells, denom: T::one(), basis: (n..n + m).collect(), pivots: 0 })
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> &T {
        &self.cells[i * self.width + j]
    }

    fn pivot(&mut self, r: usize, s: usize) -> Result<(), Overflow> {
        let w = self.width;
        let p = self.at(r, s).clone();
        let d = self.denom.clone();
        let pivot_row: Vec<T> = self.cells[r * w..(r + 1) * w].to_vec();
        for i in 0..self.m + 2 {
            if i == r {
                continue;
            }
            let row = &mut self.cells[i * w..(i + 1) * w];
            let f = row[s].clone();
            if f.is_zero() {
                for v in row.iter_mut() {
                    *v = T::scale(v, &p, &d).ok_or(Overflow)?;
                }
            } else {
                for (v, pr) in row.iter_mut().zip(&pivot_row) {
                    *v = T::fused(v, &p, &f, pr, &d).ok_or(Overflow)?;
                }
            }
        }
        if p.is_neg() {
            for v in self.cells.iter_mut() {
                *v = v.neg();
            }
            self.denom = p.neg();
        } else {
            self.denom = p;
        }
        self.basis[r] = s;
        self.pivots += 1;
        Ok(())
    }

    /// Runs simplex iterations on objective row `obj` over the allowed columns.
    /// Returns `Ok(false)` if unbounded.
    fn optimize(&mut self, obj: usize, allowed: usize) -> Result<bool, Overflow> {
        let rhs = self.width - 1;
        let mut degenerate_run = 0usize;
        let mut bland = false;
        loop {
            // entering column
            let mut enter: Option<usize> = None;
            for j in 0..allowed {
                let z = self.at(obj, j);
                if !z.is_neg() {
                    continue;
                }
                match enter {
                    None => {
                        enter = Some(j);
                        if bland {
                            break;
                        }
                    }
                    Some(e) if z < self.at(obj, e) => enter = Some(j),
                    _ => {}
                }
            }
            let Some(s) = enter else { return Ok(true) };
            // ratio test; ties broken by the smallest basic index
            let mut leave: Option<usize> = None;
            for i in 0..self.m {
                let a = self.at(i, s);
                if !a.is_pos() {
                    continue;
                }
                match leave {
                    None => leave = Some(i),
                    Some(l) => {
                        let lhs = self.at(i, rhs).mul(self.at(l, s)).ok_or(Overflow)?;
                        let rhs_v = self.at(l, rhs).mul(a).ok_or(Overflow)?;
                        if lhs < rhs_v || (lhs == rhs_v && self.basis[i] < self.basis[l]) {
                            leave = Some(i);
                        }
                    }
                }
            }
            let Some(r) = leave else { return Ok(false) };
            if self.at(r, rhs).is_zero() {
                degenerate_run += 1;
                if degenerate_run >= DEGENERATE_SWITCH {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, s)?;
        }
    }

    fn run(mut self) -> Result<Outcome, Overflow> {
        let (m, n, w) = (self.m, self.n, self.width);
        let rhs = w - 1;
        // phase 1 over real and artificial columns
        self.optimize(m, n + m)?;
        if self.at(m, rhs).is_neg() {
            return Ok(self.finish(LpStatus::Infeasible));
        }
        // drive artificials out of the basis where possible
        for r in 0..m {
            if self.basis[r] < n {
                continue;
            }
            if let Some(j) = (0..n).find(|&j| !self.at(r, j).is_zero()) {
                self.pivot(r, j)?;
            }
        }
        if !self.optimize(m + 1, n)? {
            return Ok(self.finish(LpStatus::Unbounded));
        }
        Ok(self.finish(LpStatus::Optimal))
    }

    fn finish(self, status: LpStatus) -> Outcome {
        let (m, n, w) = (self.m, self.n, self.width);
        let obj = (m + 1) * w;
        Outcome {
            status,
            basis: self.basis.clone(),
            rhs: (0..m).map(|i| self.at(i, w - 1).to_big()).collect(),
            dual: (0..m).map(|i| self.cells[obj + n + i].to_big()).collect(),
            objective: self.cells[obj + w - 1].to_big(),
            denom: self.denom.to_big(),
            pivots: self.pivots,
        }
    }
}

pub(crate) fn run_scaled(sp: &ScaledProblem) -> Outcome {
    if let Some(t) = Tableau::<i128>::build(sp) {
        if let Ok(out) = t.run() {
            return out;
        }
    }
    Tableau::<BigInt>::build(sp).expect("BigInt conversion is total").run().expect("BigInt arithmetic cannot overflow")
}

/// Solves `max c.x, Ax = b, x >= 0` exactly.
pub fn solve(p: &LpProblem) -> LpSolution {
    let sp = ScaledProblem::from_problem(p);
    let out = run_scaled(&sp);
    let denom = Rational::from_integer(out.denom.clone());
    if out.status != LpStatus::Optimal {
        return LpSolution { status: out.status, value: None, x: Vec::new(), y: Vec::new(), pivots: out.pivots };
    }
    let mut x = vec![Rational::zero(); sp.n];
    for (i, &col) in out.basis.iter().enumerate() {
        if col < sp.n {
            x[col] = Rational::from_integer(out.rhs[i].clone()) / &denom;
        }
    }
    let obj_factor = Rational::from_integer(sp.obj_factor.clone());
    let y = out
        .dual
        .iter()
        .zip(&sp.row_factor)
        .map(|(yi, f)| Rational::from_integer(yi * f) / (&denom * &obj_factor))
        .collect();
    let value = Rational::from_integer(out.objective.clone()) / (&denom * &obj_factor);
    LpSolution { status: LpStatus::Optimal, value: Some(value), x, y, pivots: out.pivots }
}
