//! Line-oriented text dump of an [`LpProblem`] for cross-checking with
//! external solvers.
//!
//! ```text
//! # optional comments
//! lp <rows> <cols>
//! names <name_1> ... <name_n>      (optional)
//! max <c_1> ... <c_n>
//! row <a_i1> ... <a_in> = <b_i>    (one line per row)
//! ```
//!
//! Rationals are written as `p/q`; the parser also accepts integers and decimals.

use super::{LpError, LpProblem};
use crate::ratio::{fmt_rational, parse_rational};
use crate::Rational;

pub fn dump_problem(p: &LpProblem) -> String {
    let mut out = format!("lp {} {}\nnames {}\nmax", p.rows(), p.cols(), p.names.join(" "));
    for c in &p.c {
        out.push(' ');
        out.push_str(&fmt_rational(c));
    }
    out.push('\n');
    for (row, b) in p.a.iter().zip(&p.b) {
        out.push_str("row");
        for a in row {
            out.push(' ');
            out.push_str(&fmt_rational(a));
        }
        out.push_str(" = ");
        out.push_str(&fmt_rational(b));
        out.push('\n');
    }
    out
}

/// Upper bound on `rows * cols` accepted from text input.
const MAX_CELLS: usize = 1 << 24;

pub fn parse_problem(text: &str) -> Result<LpProblem, LpError> {
    let mut dims: Option<(usize, usize)> = None;
    let mut names = Vec::new();
    let mut objective: Option<Vec<Rational>> = None;
    let mut a = Vec::new();
    let mut b = Vec::new();
    let err = |line: usize, reason: &str| LpError::Parse { line, reason: reason.to_string() };
    let values = |line: usize, words: &[&str]| -> Result<Vec<Rational>, LpError> {
        words.iter().map(|w| parse_rational(w).map_err(|e| err(line, &e.to_string()))).collect()
    };
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "lp" => {
                if dims.is_some() || words.len() != 3 {
                    return Err(err(line_no, "expected a single `lp <rows> <cols>` header"));
                }
                let m: usize = words[1].parse().map_err(|_| err(line_no, "bad row count"))?;
                let n: usize = words[2].parse().map_err(|_| err(line_no, "bad column count"))?;
                if m.saturating_mul(n) > MAX_CELLS || m > MAX_CELLS || n > MAX_CELLS {
                    return Err(err(line_no, "problem too large"));
                }
                dims = Some((m, n));
            }
            "names" => names = words[1..].iter().map(|s| s.to_string()).collect(),
            "max" => {
                if objective.is_some() {
                    return Err(err(line_no, "duplicate objective"));
                }
                objective = Some(values(line_no, &words[1..])?);
            }
            "row" => {
                let eq = words.iter().position(|&w| w == "=").ok_or_else(|| err(line_no, "missing `=`"))?;
                if eq + 2 != words.len() {
                    return Err(err(line_no, "expected exactly one value after `=`"));
                }
                a.push(values(line_no, &words[1..eq])?);
                b.push(values(line_no, &words[eq + 1..])?.remove(0));
            }
            other => return Err(err(line_no, &format!("unknown directive `{other}`"))),
        }
    }
    let (m, n) = dims.ok_or_else(|| err(0, "missing `lp` header"))?;
    let c = objective.ok_or_else(|| err(0, "missing objective"))?;
    if c.len() != n || a.len() != m {
        return Err(LpError::Dimension(format!(
            "header says {m}x{n}, found {} rows and {} objective entries",
            a.len(),
            c.len()
        )));
    }
    LpProblem::new(a, b, c, names)
}
