//! Deformed binomial and Poisson-like distributions built from generating
//! functions, with every structural claim checkable in exact rational
//! arithmetic.
//!
//! The pipeline: a generating function `N(t) = Σ t^n/x_n!` (a truncated
//! series over exact rationals) determines a positive sequence `x_n`, the
//! win-parameter polynomials `p_n(η)` via `N(t)/N(ηt)`, and a finite
//! distribution over `k = 0..=n` wins at each trial count `n`. Membership of
//! `N` in the admissible class is decided through its logarithm, admissible
//! logarithms are built by a closed combinator algebra, and two deformation
//! operators plus a coefficient flow act on the normalized members. Closed
//! form families, recursion conjecture harnesses and Helstrom detection
//! bounds sit on top.
//!
//! Everything outside the float-only detection and asymptotics helpers is
//! pure, immutable and exact, so values can be shared freely across threads.

pub mod conjecture;
pub mod cst;
pub mod deform;
pub mod detection;
pub mod eta;
pub mod families;
pub mod poly;
pub mod rational;
pub mod report;
pub mod series;
pub mod sigma;

pub use cst::{
    deformed_binomial, i_coefficients, pn_polynomials, sequence_from_series,
    series_from_sequence, CstSequence, DeformedBinomialTable,
};
pub use eta::{eta_division, EtaSeries};
pub use poly::RatPoly;
pub use rational::{parse_rational, rat, rat_int, Rational};
pub use report::{ClassReport, IdentityReport, SigmaClass};
pub use series::{SeriesError, TruncSeries};
pub use sigma::{check_sigma, check_sigma0, check_sigma_plus, normalize, Sigma0Expr};
