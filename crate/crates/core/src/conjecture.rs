//! Exact harness for the conjectured product recursions of exponential-type
//! generating functions.
//!
//! For `N = exp(t + (a/m)·t^m)` the sequence is conjectured to satisfy
//! `x_{n+1} = (n+1)/(1 + a·x_n·x_{n−1}⋯x_{n−m+2})` with `x_n ~ (n/a)^{1/m}`;
//! the multi-coefficient version extends this with one product term per
//! exponent. The harness regenerates the sequence from the recursion and
//! compares against direct series extraction in exact rational arithmetic, so
//! a single mismatched index is a definitive counterexample, never a
//! tolerance artifact.
//!
//! The multi-coefficient statement is ambiguous about whether a recursion
//! coefficient `a_k` pairs with the series exponent coefficient `a_k` or
//! `a_k/k` (the single-term form pairs `a` with `a/m`). Both readings are
//! implemented; the report states which one holds.

use crate::cst::{sequence_from_series, CstError, CstSequence};
use crate::rational::{rat_int, rational_to_f64, Rational};
use crate::series::{SeriesError, TruncSeries};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConjectureError {
    #[error("invalid {param} = {value}: must be {requirement}")]
    InvalidParameter { param: &'static str, value: String, requirement: &'static str },
    #[error(transparent)]
    Cst(#[from] CstError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Which series the recursion coefficients refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// Recursion coefficient `a_k` pairs with exponent coefficient `a_k`.
    AsPrinted,
    /// Recursion coefficient `a_k` pairs with exponent coefficient `a_k/k`.
    ScaledByN,
}

/// Outcome of one exact recursion comparison.
#[derive(Clone, Debug, Serialize)]
pub struct RecursionReport {
    pub n_max: usize,
    /// First index where recursion and series extraction disagree.
    pub first_failure: Option<usize>,
    /// `(n, x_n/(n/scale)^{1/m})` on a geometric ladder of indices.
    pub ratios: Vec<(usize, f64)>,
}

impl RecursionReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Generate `x_0..=x_{n_max}` from the recursion
/// `x_{n+1} = (n+1)/(1 + Σ_j a_j·x_n⋯x_{n−j+2})` where `coeffs[j−2] = a_j`.
/// Product terms that would reach `x_0 = 0` vanish, so the start-up indices
/// come out right automatically.
pub fn recursion_sequence(coeffs: &[Rational], n_max: usize) -> Vec<Rational> {
    let mut x: Vec<Rational> = Vec::with_capacity(n_max + 1);
    x.push(Rational::zero());
    for n in 0..n_max {
        let mut denom = Rational::one();
        for (idx, aj) in coeffs.iter().enumerate() {
            if aj.is_zero() {
                continue;
            }
            let j = idx + 2;
            if n + 2 <= j {
                continue; // the product reaches x_0 = 0
            }
            let mut prod = aj.clone();
            for i in (n + 2 - j)..=n {
                prod *= &x[i];
            }
            denom += prod;
        }
        x.push(rat_int(n as i64 + 1) / denom);
    }
    x
}

fn compare_sequences(series_x: &CstSequence, recursion_x: &[Rational], n_max: usize) -> Option<usize> {
    (0..=n_max).find(|&n| series_x.x(n) != &recursion_x[n])
}

fn ratio_ladder(xs: &[Rational], n_max: usize, scale: f64, exponent: f64) -> Vec<(usize, f64)> {
    let mut ladder = Vec::new();
    let mut n = 1usize;
    while n < n_max {
        ladder.push(n);
        n *= 2;
    }
    if n_max >= 1 {
        ladder.push(n_max);
    }
    ladder
        .into_iter()
        .map(|n| {
            let base = (n as f64 / scale).powf(exponent);
            (n, rational_to_f64(&xs[n]) / base)
        })
        .collect()
}

/// Check the single-term recursion for `N = exp(t + (a/m)·t^m)` up to
/// `n_max`, exactly. Requires `a > 0` and `m ≥ 2`.
pub fn single_term_check(
    a: &Rational,
    m: u32,
    n_max: usize,
) -> Result<RecursionReport, ConjectureError> {
    if !a.is_positive() {
        return Err(ConjectureError::InvalidParameter {
            param: "a",
            value: a.to_string(),
            requirement: "> 0",
        });
    }
    if m < 2 {
        return Err(ConjectureError::InvalidParameter {
            param: "m",
            value: m.to_string(),
            requirement: ">= 2",
        });
    }
    let mut coeffs = vec![Rational::zero(); (m - 1) as usize];
    *coeffs.last_mut().unwrap() = a.clone();
    let series = exp_poly_series(&coeffs, Convention::ScaledByN, n_max)?;
    let seq = sequence_from_series(&series)?;
    let rec = recursion_sequence(&coeffs, n_max);
    let first_failure = compare_sequences(&seq, &rec, n_max);
    let ratios = ratio_ladder(&rec, n_max, rational_to_f64(a), 1.0 / f64::from(m));
    Ok(RecursionReport { n_max, first_failure, ratios })
}

/// Build `exp(t + Σ_j c_j·t^j)` where `c_j` is `a_j` or `a_j/j` depending on
/// the convention (`coeffs[j−2] = a_j`).
fn exp_poly_series(
    coeffs: &[Rational],
    convention: Convention,
    order: usize,
) -> Result<TruncSeries, SeriesError> {
    let mut f = TruncSeries::zero(order).into_coeffs();
    if order >= 1 {
        f[1] = Rational::one();
    }
    for (idx, aj) in coeffs.iter().enumerate() {
        let j = idx + 2;
        if j > order {
            break;
        }
        f[j] = match convention {
            Convention::AsPrinted => aj.clone(),
            Convention::ScaledByN => aj / rat_int(j as i64),
        };
    }
    TruncSeries::from_coeffs(f).exp()
}

/// Check the multi-coefficient recursion under the given convention;
/// `coeffs[j−2] = a_j ≥ 0` for `j = 2..=m`. The asymptotic ratio uses the
/// highest nonzero coefficient as the scale.
pub fn multi_term_check(
    coeffs: &[Rational],
    convention: Convention,
    n_max: usize,
) -> Result<RecursionReport, ConjectureError> {
    if coeffs.is_empty() || coeffs.iter().all(Rational::is_zero) {
        return Err(ConjectureError::InvalidParameter {
            param: "coeffs",
            value: "[]".into(),
            requirement: "at least one nonzero a_j",
        });
    }
    for c in coeffs {
        if c.is_negative() {
            return Err(ConjectureError::InvalidParameter {
                param: "coeffs",
                value: c.to_string(),
                requirement: ">= 0",
            });
        }
    }
    let series = exp_poly_series(coeffs, convention, n_max)?;
    let seq = sequence_from_series(&series)?;
    let rec = recursion_sequence(coeffs, n_max);
    let first_failure = compare_sequences(&seq, &rec, n_max);
    let top = coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
    let m = top + 2;
    let ratios = ratio_ladder(&rec, n_max, rational_to_f64(&coeffs[top]), 1.0 / m as f64);
    Ok(RecursionReport { n_max, first_failure, ratios })
}

/// Ratios `x_n/(n/scale)^{exponent}` at a geometric ladder of indices, from
/// direct series extraction; requires `n_max ≤ T`.
pub fn asymptotic_probe(
    n_series: &TruncSeries,
    exponent: &Rational,
    scale: &Rational,
    n_max: usize,
) -> Result<Vec<(usize, f64)>, ConjectureError> {
    if n_max > n_series.order() {
        return Err(ConjectureError::Cst(CstError::BeyondTruncation {
            n: n_max,
            order: n_series.order(),
        }));
    }
    let seq = sequence_from_series(n_series)?;
    Ok(ratio_ladder(
        seq.xs(),
        n_max,
        rational_to_f64(scale),
        rational_to_f64(exponent),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn quadratic_case_recursion_is_exact() {
        // m = 2 reduces to x_{n+1} = (n+1)/(1 + a·x_n), provably exact
        let report = single_term_check(&rat_int(1), 2, 60).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn cubic_case_small_values() {
        // exp(t + t³/3): x_3 = 3/(1+2a) = 1 and x_4 = 4(1+2a)/(1+8a) = 4/3 at a = 1
        let a = rat_int(1);
        let rec = recursion_sequence(&[Rational::zero(), a.clone()], 6);
        assert_eq!(rec[3], rat_int(1));
        assert_eq!(rec[4], rat(4, 3));
        let report = single_term_check(&a, 3, 40).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn as_printed_convention_fails_at_two() {
        // a_2 = 1/2 as a literal exponent coefficient: series x_2 = 1 but
        // recursion predicts 2/(1+1/2) = 4/3
        let report = multi_term_check(&[rat(1, 2)], Convention::AsPrinted, 10).unwrap();
        assert_eq!(report.first_failure, Some(2));
        let scaled = multi_term_check(&[rat(1, 2)], Convention::ScaledByN, 10).unwrap();
        assert!(scaled.passed());
    }

    #[test]
    fn scaled_convention_matches_single_term_for_quadratic() {
        let a = rat(7, 3);
        let single = single_term_check(&a, 2, 30).unwrap();
        let multi = multi_term_check(&[a], Convention::ScaledByN, 30).unwrap();
        assert_eq!(single.first_failure, multi.first_failure);
        let last_s = single.ratios.last().unwrap();
        let last_m = multi.ratios.last().unwrap();
        assert_eq!(last_s.0, last_m.0);
        assert!((last_s.1 - last_m.1).abs() < 1e-12);
    }

    #[test]
    fn exponential_probe_is_exactly_one() {
        let probe =
            asymptotic_probe(&TruncSeries::exp_t(64), &rat_int(1), &rat_int(1), 64).unwrap();
        for (_, ratio) in probe {
            assert!((ratio - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bounded_family_probe_converges_to_limit() {
        // (1−t)^{-5}: exponent 0 makes the ratio the sequence itself → 1/a = 1
        let series = crate::families::FamilySpec::NegPow { a: rat_int(1), n0: 5 }
            .series(256)
            .unwrap();
        let probe = asymptotic_probe(&series, &rat_int(0), &rat_int(1), 256).unwrap();
        let (_, last) = probe.last().unwrap();
        assert!((last - 1.0).abs() < 0.02);
    }

    #[test]
    fn parameter_validation() {
        assert!(single_term_check(&rat_int(0), 2, 10).is_err());
        assert!(single_term_check(&rat_int(1), 1, 10).is_err());
        assert!(multi_term_check(&[], Convention::AsPrinted, 10).is_err());
        assert!(multi_term_check(&[rat_int(-1)], Convention::AsPrinted, 10).is_err());
    }
}
