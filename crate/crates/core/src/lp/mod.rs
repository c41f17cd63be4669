//! Exact rational linear programming: `max c.x` subject to `Ax = b`, `x >= 0`.
//!
//! [`solve`] returns an exact primal solution together with a dual vector
//! `y` such that `y^T A >= c^T` and `y^T b = c^T x`, which
//! [`verify_certificate`] re-checks from scratch. [`solve_float_presolve`]
//! is a floating-point filter that only ever answers which side of a
//! threshold the optimum lies on, and only when it is clear of a guard band.

mod exact;
mod float;
mod text;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Rational;

pub use exact::solve;
pub use float::{presolve_float, solve_float_presolve, FloatLp, Presolve, Side};
pub use text::{dump_problem, parse_problem};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// `max c.x` subject to `Ax = b`, `x >= 0`, with dense rational data.
#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    pub(crate) a: Vec<Vec<Rational>>,
    pub(crate) b: Vec<Rational>,
    pub(crate) c: Vec<Rational>,
    pub(crate) names: Vec<String>,
}

impl LpProblem {
    pub fn new(a: Vec<Vec<Rational>>, b: Vec<Rational>, c: Vec<Rational>, names: Vec<String>) -> Result<Self, LpError> {
        if a.len() != b.len() {
            return Err(LpError::Dimension(format!("{} rows but {} right-hand sides", a.len(), b.len())));
        }
        if let Some((i, row)) = a.iter().enumerate().find(|(_, row)| row.len() != c.len()) {
            return Err(LpError::Dimension(format!("row {i} has {} entries, objective has {}", row.len(), c.len())));
        }
        let names = if names.is_empty() { (0..c.len()).map(|j| format!("x{j}")).collect() } else { names };
        if names.len() != c.len() {
            return Err(LpError::Dimension(format!("{} names for {} variables", names.len(), c.len())));
        }
        Ok(LpProblem { a, b, c, names })
    }

    pub fn rows(&self) -> usize {
        self.b.len()
    }

    pub fn cols(&self) -> usize {
        self.c.len()
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.a
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.b
    }

    pub fn objective(&self) -> &[Rational] {
        &self.c
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl std::fmt::Display for LpStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal value when `status` is optimal.
    pub value: Option<Rational>,
    /// Primal solution (empty unless optimal).
    pub x: Vec<Rational>,
    /// Dual solution, one entry per constraint row (empty unless optimal).
    pub y: Vec<Rational>,
    pub pivots: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Exact check of primal feasibility, dual feasibility and equal objectives.
pub fn verify_certificate(p: &LpProblem, s: &LpSolution) -> Result<bool, LpError> {
    if s.status != LpStatus::Optimal {
        return Ok(false);
    }
    if s.x.len() != p.cols() || s.y.len() != p.rows() {
        return Err(LpError::Dimension(format!(
            "solution has {} primal and {} dual entries for a {}x{} problem",
            s.x.len(),
            s.y.len(),
            p.rows(),
            p.cols()
        )));
    }
    let Some(value) = &s.value else { return Ok(false) };
    if s.x.iter().any(Signed::is_negative) {
        return Ok(false);
    }
    for (row, bi) in p.a.iter().zip(&p.b) {
        let lhs: Rational = row.iter().zip(&s.x).filter(|(_, x)| !x.is_zero()).map(|(a, x)| a * x).sum();
        if &lhs != bi {
            return Ok(false);
        }
    }
    for j in 0..p.cols() {
        let col: Rational = p.a.iter().zip(&s.y).map(|(row, y)| &row[j] * y).sum();
        if col < p.c[j] {
            return Ok(false);
        }
    }
    let primal: Rational = p.c.iter().zip(&s.x).map(|(c, x)| c * x).sum();
    let dual: Rational = p.b.iter().zip(&s.y).map(|(b, y)| b * y).sum();
    Ok(&primal == value && &dual == value)
}
