//! Exact fractional and integer vector-valued clique decompositions.
//!
//! The crate computes optimal fractional `K_k`-decompositions of tournaments,
//! graphs and edge-colored complete graphs where every `k`-vertex piece is
//! scored by a weight vector indexed by isomorphism classes of `k`-vertex
//! patterns. All values are exact rationals; every LP optimum carries a
//! primal/dual certificate that is re-checked independently.
//!
//! Module map:
//!
//! * [`patterns`]: canonical `k`-vertex patterns, catalogs, weight vectors.
//! * [`hosts`]: tournaments, bicolored graphs, blow-ups, extensions, enumeration.
//! * [`lp`]: exact two-phase simplex with certificates plus a floating-point presolve.
//! * [`decomp`]: decomposition LPs, pattern masses, integer optimum, bounds.
//! * [`search`]: the threshold-driven tournament extension search.
//! * [`io`]: digraph6/graph6 codecs, vector files, reports, checkpoints.

pub mod decomp;
pub mod hosts;
pub mod io;
pub mod lp;
pub mod patterns;
pub mod ratio;
pub mod search;

pub use num_rational::BigRational as Rational;
