//! Helstrom error bounds for discriminating two quantum states, evaluated
//! for nonlinear coherent states through a generating function.
//!
//! The two-state bound is `P_H = (1/2)(1 − √(1 − s))` for squared overlap
//! `s`; for a nonlinear coherent state built on `N` the overlap becomes
//! `1/N(t)`, so the bound decreases as `N` grows. Series evaluation refuses
//! to answer when the highest retained term is still significant relative to
//! the partial sum, instead of silently extrapolating past the radius of
//! convergence.

use crate::report::ClassReport;
use crate::series::TruncSeries;
use crate::sigma::check_sigma;
use thiserror::Error;

/// Largest tolerated ratio of the last retained term to the partial sum.
pub const TAIL_GUARD_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DetectionError {
    #[error("squared overlap {0} outside [0, 1]")]
    OverlapOutOfRange(f64),
    #[error("evaluation point t = {0} must be >= 0")]
    NegativeTime(f64),
    #[error("series must pass the Sigma coefficient check: {report}")]
    NotSigma { report: ClassReport },
    #[error(
        "series not converged at t = {t}: last term {last_term:e} exceeds {TAIL_GUARD_RATIO:e} of the partial sum {partial_sum:e}"
    )]
    NotConverged { t: f64, last_term: f64, partial_sum: f64 },
}

/// `P_H = (1/2)(1 − √(1 − s))` for squared overlap `s ∈ [0, 1]`; always in
/// `[0, 1/2]`.
pub fn helstrom_overlap(overlap_sq: f64) -> Result<f64, DetectionError> {
    if !(0.0..=1.0).contains(&overlap_sq) || overlap_sq.is_nan() {
        return Err(DetectionError::OverlapOutOfRange(overlap_sq));
    }
    Ok(0.5 * (1.0 - (1.0 - overlap_sq).sqrt()))
}

/// Bound evaluated through a generating function, with tail diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HelstromBound {
    pub bound: f64,
    /// The partial-sum value `N(t)`.
    pub n_value: f64,
    /// Ratio of the last retained term to the partial sum.
    pub tail_ratio: f64,
}

/// `P_H = (1/2)(1 − √(1 − 1/N(t)))` for `t ≥ 0`. `N` must pass the `Sigma`
/// coefficient check (so `N(t) ≥ 1` and the radicand lies in `[0, 1]`), and
/// the evaluation refuses when the truncated series has not converged at `t`.
pub fn helstrom_nonlinear(n: &TruncSeries, t: f64) -> Result<HelstromBound, DetectionError> {
    let report = check_sigma(n);
    if !report.passed() {
        return Err(DetectionError::NotSigma { report });
    }
    if t < 0.0 || t.is_nan() {
        return Err(DetectionError::NegativeTime(t));
    }
    let (value, last_term) = n.eval_f64(t);
    let tail_ratio = if value == 0.0 { f64::INFINITY } else { last_term / value.abs() };
    if tail_ratio > TAIL_GUARD_RATIO {
        return Err(DetectionError::NotConverged { t, last_term, partial_sum: value });
    }
    let overlap = (1.0 / value).clamp(0.0, 1.0);
    Ok(HelstromBound { bound: helstrom_overlap(overlap)?, n_value: value, tail_ratio })
}
