//! From a generating function to its sequence, win-parameter polynomials and
//! deformed binomial tables.
//!
//! A series `N(t) = Σ a_n t^n` with `a_0 = 1` and `a_n > 0` encodes the
//! sequence `x_n = a_{n−1}/a_n` (so `a_n = 1/x_n!` with `x_n! = x_1⋯x_n`).
//! The quotient `N(t)/N(ηt)` generates the polynomials `p_n(η)`, the
//! reciprocal `1/N(t) = Σ I_n/x_n!·(−t)^n` the coefficients `I_n`, and the
//! deformed binomial table at `n` trials is
//! `P_k = (x_n!/(x_{n−k}!·x_k!))·η^k·p_{n−k}(η)`, which sums to 1 exactly for
//! every member of `Sigma` and is nonnegative exactly on `SigmaPlus`.

use crate::eta::eta_division;
use crate::poly::RatPoly;
use crate::rational::{rat_int, Rational};
use crate::report::{ClassReport, IdentityReport, Mismatch};
use crate::series::{SeriesError, TruncSeries};
use crate::sigma::{check_sigma, check_sigma_plus, SigmaError};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CstError {
    #[error("series must pass the Sigma coefficient check: {report}")]
    NotSigma { report: ClassReport },
    #[error("n = {n} exceeds truncation order {order}")]
    BeyondTruncation { n: usize, order: usize },
    #[error("eta = {eta} outside [0, 1]")]
    EtaOutOfRange { eta: Rational },
    #[error("sequence values must satisfy x_0 = 0 and x_n > 0, got x_{index} = {value}")]
    InvalidSequence { index: usize, value: Rational },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Sigma(#[from] SigmaError),
}

/// The sequence `x_n` extracted from a generating function, with its running
/// factorials `x_n! = x_1·x_2⋯x_n` cached (`x_0 = 0`, `x_0! = 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CstSequence {
    x: Vec<Rational>,
    xfact: Vec<Rational>,
}

impl CstSequence {
    /// Build from explicit values; validates `x_0 = 0` and `x_n > 0`.
    pub fn from_values(x: Vec<Rational>) -> Result<Self, CstError> {
        if x.is_empty() || !x[0].is_zero() {
            let value = x.first().cloned().unwrap_or_else(Rational::zero);
            return Err(CstError::InvalidSequence { index: 0, value });
        }
        for (k, v) in x.iter().enumerate().skip(1) {
            if !v.is_positive() {
                return Err(CstError::InvalidSequence { index: k, value: v.clone() });
            }
        }
        let mut xfact = Vec::with_capacity(x.len());
        let mut acc = Rational::one();
        xfact.push(acc.clone());
        for v in x.iter().skip(1) {
            acc *= v;
            xfact.push(acc.clone());
        }
        Ok(CstSequence { x, xfact })
    }

    /// Highest index carried (the truncation order of the source series).
    pub fn order(&self) -> usize {
        self.x.len() - 1
    }

    pub fn x(&self, n: usize) -> &Rational {
        &self.x[n]
    }

    pub fn xs(&self) -> &[Rational] {
        &self.x
    }

    pub fn x_factorial(&self, n: usize) -> &Rational {
        &self.xfact[n]
    }

    /// Generalized binomial `x_n!/(x_k!·x_{n−k}!)`.
    pub fn binom(&self, n: usize, k: usize) -> Rational {
        &self.xfact[n] / (&self.xfact[k] * &self.xfact[n - k])
    }
}

/// Extract the sequence `x_n = a_{n−1}/a_n`; requires `Sigma` membership.
pub fn sequence_from_series(n: &TruncSeries) -> Result<CstSequence, CstError> {
    let report = check_sigma(n);
    if !report.passed() {
        return Err(CstError::NotSigma { report });
    }
    let mut x = Vec::with_capacity(n.order() + 1);
    x.push(Rational::zero());
    for k in 1..=n.order() {
        x.push(n.coeff(k - 1) / n.coeff(k));
    }
    CstSequence::from_values(x)
}

/// Rebuild the generating function `Σ t^n/x_n!`; inverse of
/// [`sequence_from_series`].
pub fn series_from_sequence(seq: &CstSequence) -> TruncSeries {
    TruncSeries::from_coeffs(
        seq.xfact.iter().map(|f| Rational::one() / f).collect(),
    )
}

/// Coefficients `I_n` of the reciprocal series `1/N(t) = Σ I_n/x_n!·(−t)^n`.
pub fn i_coefficients(n: &TruncSeries) -> Result<Vec<Rational>, CstError> {
    let seq = sequence_from_series(n)?;
    let recip = n.reciprocal()?;
    let coeffs = recip
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let sign = if k % 2 == 0 { c.clone() } else { -c };
            sign * &seq.xfact[k]
        })
        .collect();
    Ok(coeffs)
}

/// The polynomials `p_n(η)` read off the quotient `N(t)/N(ηt)`, exact.
pub fn pn_polynomials(n: &TruncSeries) -> Result<Vec<RatPoly>, CstError> {
    let seq = sequence_from_series(n)?;
    let g = eta_division(n)?;
    Ok(g
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, poly)| poly.scale(&seq.xfact[k]))
        .collect())
}

/// The same polynomials from the explicit sum
/// `p_n(η) = Σ_k (x_n;x_k)·I_k·(−η)^k`; an independent route used to
/// cross-check [`pn_polynomials`].
pub fn pn_polynomials_explicit(seq: &CstSequence, icoeffs: &[Rational]) -> Vec<RatPoly> {
    binomial_alternating_sum(seq, Some(icoeffs))
}

/// Specialization for `N = e^F` with `F` odd: all `I_k = 1`, so
/// `p_n(η) = Σ_k (x_n;x_k)·(−η)^k`.
pub fn odd_f_polynomials(seq: &CstSequence) -> Vec<RatPoly> {
    binomial_alternating_sum(seq, None)
}

fn binomial_alternating_sum(seq: &CstSequence, icoeffs: Option<&[Rational]>) -> Vec<RatPoly> {
    (0..=seq.order())
        .map(|n| {
            let mut coeffs = Vec::with_capacity(n + 1);
            for k in 0..=n {
                let mut c = seq.binom(n, k);
                if let Some(i) = icoeffs {
                    c *= &i[k];
                }
                if k % 2 == 1 {
                    c = -c;
                }
                coeffs.push(c);
            }
            RatPoly::new(coeffs)
        })
        .collect()
}

/// Finite deformed binomial distribution at `n` trials and win parameter
/// `eta`. Rows sum to 1 exactly for any `Sigma` member; `probabilistic`
/// records whether the source also passed the `SigmaPlus` check, i.e.
/// whether the entries are guaranteed nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformedBinomialTable {
    pub n: usize,
    pub eta: Rational,
    pub probs: Vec<Rational>,
    pub probabilistic: bool,
}

impl DeformedBinomialTable {
    pub fn sum(&self) -> Rational {
        self.probs.iter().sum()
    }
}

/// Assemble a table row from precomputed parts. `eta` must lie in `[0, 1]`
/// and `n` within the carried order.
pub fn deformed_binomial_from_parts(
    seq: &CstSequence,
    polys: &[RatPoly],
    n: usize,
    eta: &Rational,
    probabilistic: bool,
) -> Result<DeformedBinomialTable, CstError> {
    if n > seq.order() {
        return Err(CstError::BeyondTruncation { n, order: seq.order() });
    }
    if eta.is_negative() || *eta > rat_int(1) {
        return Err(CstError::EtaOutOfRange { eta: eta.clone() });
    }
    let mut probs = Vec::with_capacity(n + 1);
    let mut eta_pow = Rational::one();
    for k in 0..=n {
        if k > 0 {
            eta_pow *= eta;
        }
        probs.push(seq.binom(n, k) * &eta_pow * polys[n - k].eval(eta));
    }
    Ok(DeformedBinomialTable { n, eta: eta.clone(), probs, probabilistic })
}

/// The distribution `P_k = (x_n;x_k)·η^k·p_{n−k}(η)` for `k = 0..=n`,
/// computed exactly. Requires `Sigma` membership; a failed `SigmaPlus` check
/// only clears the `probabilistic` flag (the formal table still sums to 1).
pub fn deformed_binomial(
    n_series: &TruncSeries,
    n: usize,
    eta: &Rational,
) -> Result<DeformedBinomialTable, CstError> {
    let seq = sequence_from_series(n_series)?;
    let polys = pn_polynomials(n_series)?;
    let probabilistic = check_sigma_plus(n_series)?.passed();
    deformed_binomial_from_parts(&seq, &polys, n, eta, probabilistic)
}

/// Row of table entries with `η` symbolic: `P_k(η) = (x_n;x_k)·η^k·p_{n−k}(η)`.
pub fn symbolic_deformed_row(seq: &CstSequence, polys: &[RatPoly], n: usize) -> Vec<RatPoly> {
    (0..=n)
        .map(|k| {
            RatPoly::monomial(seq.binom(n, k), k).mul(&polys[n - k])
        })
        .collect()
}

/// Verify the joint generating identity: the coefficient of `t^n z^k` in
/// `N(zηt)·N(t)/N(ηt)` equals `P_k(η)/x_n!` as an exact polynomial in `η`,
/// for all `n ≤ n_max`. The `z`-power is tracked structurally (the factor
/// `N(zηt)` contributes `z^k` exactly at its `t^k` term).
pub fn joint_gf_check(n_series: &TruncSeries, n_max: usize) -> Result<IdentityReport, CstError> {
    if n_max > n_series.order() {
        return Err(CstError::BeyondTruncation { n: n_max, order: n_series.order() });
    }
    let seq = sequence_from_series(n_series)?;
    let polys = pn_polynomials(n_series)?;
    let rows: Vec<Vec<RatPoly>> = (0..=n_max)
        .map(|n| symbolic_deformed_row(&seq, &polys, n))
        .collect();
    Ok(joint_gf_compare(n_series, n_max, &seq, &rows)?)
}

/// Compare the product side against externally supplied table rows; split
/// out so corrupted rows can be detected in tests.
pub(crate) fn joint_gf_compare(
    n_series: &TruncSeries,
    n_max: usize,
    seq: &CstSequence,
    rows: &[Vec<RatPoly>],
) -> Result<IdentityReport, SeriesError> {
    let g = eta_division(n_series)?;
    for n in 0..=n_max {
        for k in 0..=n {
            // lhs: a_k·η^k · (N(t)/N(ηt))_{n−k}
            let lhs = RatPoly::monomial(n_series.coeff(k).clone(), k).mul(g.coeff(n - k));
            let rhs = rows[n][k].scale(&(Rational::one() / &seq.xfact[n]));
            if lhs != rhs {
                return Ok(IdentityReport::fail(
                    "joint generating identity",
                    n_max,
                    Mismatch {
                        location: format!("t^{n} z^{k}"),
                        lhs: lhs.to_string(),
                        rhs: rhs.to_string(),
                    },
                ));
            }
        }
    }
    Ok(IdentityReport::pass("joint generating identity", n_max))
}

/// Verify the exact link between the logarithm and the polynomials:
/// `[t^n] log N = −p_n'(1)/(x_n!·n)` for `1 ≤ n ≤ T`, together with the sign
/// facts `p_n'(1) ≤ 0` and `p_1'(1) = −1`.
pub fn log_identity_check(n_series: &TruncSeries) -> Result<IdentityReport, CstError> {
    let seq = sequence_from_series(n_series)?;
    let polys = pn_polynomials(n_series)?;
    let log = n_series.log()?;
    let t = n_series.order();
    for n in 1..=t {
        let dp1 = polys[n].derivative().eval(&rat_int(1));
        if dp1.is_positive() {
            return Ok(IdentityReport::fail(
                "log coefficient identity",
                t,
                Mismatch {
                    location: format!("p_{n}'(1)"),
                    lhs: dp1.to_string(),
                    rhs: "<= 0".into(),
                },
            ));
        }
        if n == 1 && dp1 != rat_int(-1) {
            return Ok(IdentityReport::fail(
                "log coefficient identity",
                t,
                Mismatch { location: "p_1'(1)".into(), lhs: dp1.to_string(), rhs: "-1".into() },
            ));
        }
        let rhs = -dp1 / (&seq.xfact[n] * rat_int(n as i64));
        if log.coeff(n) != &rhs {
            return Ok(IdentityReport::fail(
                "log coefficient identity",
                t,
                Mismatch {
                    location: format!("t^{n}"),
                    lhs: log.coeff(n).to_string(),
                    rhs: rhs.to_string(),
                },
            ));
        }
    }
    Ok(IdentityReport::pass("log coefficient identity", t))
}

/// Verify the growth bound `0 ≤ x_n ≤ n·x_1` satisfied by every sequence
/// extracted from a `SigmaPlus` member.
pub fn sequence_bound_check(seq: &CstSequence) -> IdentityReport {
    let x1 = seq.x(1).clone();
    for n in 1..=seq.order() {
        let bound = &x1 * rat_int(n as i64);
        if seq.x(n).is_negative() || *seq.x(n) > bound {
            return IdentityReport::fail(
                "sequence growth bound",
                seq.order(),
                Mismatch {
                    location: format!("x_{n}"),
                    lhs: seq.x(n).to_string(),
                    rhs: format!("<= {bound}"),
                },
            );
        }
    }
    IdentityReport::pass("sequence growth bound", seq.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::sigma::normalize;

    fn gauss_unit(order: usize) -> TruncSeries {
        // exp(t + t²/2)
        let mut f = TruncSeries::zero(order);
        f = f.add(&TruncSeries::identity(order)).unwrap();
        let mut t2 = TruncSeries::zero(order).into_coeffs();
        if order >= 2 {
            t2[2] = rat(1, 2);
        }
        f.add(&TruncSeries::from_coeffs(t2)).unwrap().exp().unwrap()
    }

    #[test]
    fn exponential_recovers_the_integers() {
        let seq = sequence_from_series(&TruncSeries::exp_t(6)).unwrap();
        for n in 0..=6 {
            assert_eq!(seq.x(n), &rat_int(n as i64));
        }
    }

    #[test]
    fn negative_power_sequence_matches_closed_form() {
        // (1−t)^{-5}: x_k = k/(4+k)
        let n = TruncSeries::one(8)
            .sub(&TruncSeries::identity(8))
            .unwrap()
            .pow_rational(&rat_int(-5))
            .unwrap();
        let seq = sequence_from_series(&n).unwrap();
        assert_eq!(seq.x(1), &rat(1, 5));
        assert_eq!(seq.x(2), &rat(1, 3));
        assert_eq!(seq.x(3), &rat(3, 7));
    }

    #[test]
    fn gauss_x2_is_one() {
        let seq = sequence_from_series(&gauss_unit(6)).unwrap();
        assert_eq!(seq.x(2), &rat_int(1));
    }

    #[test]
    fn series_sequence_round_trip() {
        let n = gauss_unit(10);
        let seq = sequence_from_series(&n).unwrap();
        assert_eq!(series_from_sequence(&seq), n);
        // constant sequence after x_1 gives a geometric series
        let a = rat(1, 3); // x_n = 1/a with a = 3... use x = 1/3 ⇒ coefficients 3^n
        let seq =
            CstSequence::from_values(vec![rat_int(0), a.clone(), a.clone(), a.clone()]).unwrap();
        assert_eq!(series_from_sequence(&seq), TruncSeries::geometric(&rat_int(3), 3));
    }

    #[test]
    fn reciprocal_coefficients_examples() {
        // e^t: all I_n = 1
        let i = i_coefficients(&TruncSeries::exp_t(8)).unwrap();
        assert!(i.iter().all(|v| v == &rat_int(1)));
        // 1/(1−t): 1/N = 1−t so I_0 = I_1 = 1, rest 0
        let i = i_coefficients(&TruncSeries::geometric(&rat_int(1), 6)).unwrap();
        assert_eq!(i[0], rat_int(1));
        assert_eq!(i[1], rat_int(1));
        assert!(i[2..].iter().all(Rational::is_zero));
    }

    #[test]
    fn odd_member_has_unit_reciprocal_coefficients() {
        // N = exp(t + t³/3), an odd exponent: I_n = 1 for all n
        let mut f = TruncSeries::zero(10).into_coeffs();
        f[1] = rat_int(1);
        f[3] = rat(1, 3);
        let n = TruncSeries::from_coeffs(f).exp().unwrap();
        let i = i_coefficients(&n).unwrap();
        assert!(i.iter().all(|v| v == &rat_int(1)));
        // and the explicit odd-route polynomials agree with the division route
        let seq = sequence_from_series(&n).unwrap();
        assert_eq!(odd_f_polynomials(&seq), pn_polynomials(&n).unwrap());
        // same for a sinh-like odd exponent t + t³/6
        let mut f = TruncSeries::zero(10).into_coeffs();
        f[1] = rat_int(1);
        f[3] = rat(1, 6);
        let n = TruncSeries::from_coeffs(f).exp().unwrap();
        let seq = sequence_from_series(&n).unwrap();
        assert_eq!(odd_f_polynomials(&seq), pn_polynomials(&n).unwrap());
    }

    #[test]
    fn polynomials_for_exponential_are_binomial_powers() {
        // p_n(η) = (1−η)^n, expanded independently via integer binomials
        let polys = pn_polynomials(&TruncSeries::exp_t(8)).unwrap();
        let one_minus = RatPoly::from_pairs(&[(1, 1), (-1, 1)]);
        let mut expected = RatPoly::one();
        for n in 0..=8 {
            assert_eq!(polys[n], expected, "n = {n}");
            expected = expected.mul(&one_minus);
        }
    }

    #[test]
    fn polynomials_for_fifth_negative_power() {
        let n = TruncSeries::one(8)
            .sub(&TruncSeries::identity(8))
            .unwrap()
            .pow_rational(&rat_int(-5))
            .unwrap();
        let polys = pn_polynomials(&n).unwrap();
        assert_eq!(polys[1], RatPoly::from_pairs(&[(1, 1), (-1, 1)]));
        assert_eq!(polys[2], RatPoly::from_pairs(&[(1, 1), (-5, 3), (2, 3)]));
    }

    #[test]
    fn explicit_sum_route_agrees_with_division_route() {
        for n_series in [
            TruncSeries::exp_t(10),
            TruncSeries::geometric(&rat(1, 2), 10),
            gauss_unit(10),
        ] {
            let seq = sequence_from_series(&n_series).unwrap();
            let i = i_coefficients(&n_series).unwrap();
            assert_eq!(pn_polynomials_explicit(&seq, &i), pn_polynomials(&n_series).unwrap());
        }
    }

    #[test]
    fn binomial_table_for_exponential_is_ordinary_binomial() {
        let table = deformed_binomial(&TruncSeries::exp_t(6), 2, &rat(1, 2)).unwrap();
        assert_eq!(table.probs, vec![rat(1, 4), rat(1, 2), rat(1, 4)]);
        assert!(table.probabilistic);
    }

    #[test]
    fn exponential_tables_match_integer_binomial_everywhere() {
        // P(k) = C(n,k)·η^k·(1−η)^{n−k}, with C(n,k) built by Pascal's rule
        let e = TruncSeries::exp_t(10);
        let seq = sequence_from_series(&e).unwrap();
        let polys = pn_polynomials(&e).unwrap();
        let mut pascal = vec![vec![rat_int(1)]];
        for n in 1..=10usize {
            let prev = &pascal[n - 1];
            let mut row = vec![rat_int(1)];
            for k in 1..n {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(rat_int(1));
            pascal.push(row);
        }
        for n in 0..=10usize {
            for j in 0..=10i64 {
                let eta = rat(j, 10);
                let table = deformed_binomial_from_parts(&seq, &polys, n, &eta, true).unwrap();
                for k in 0..=n {
                    let expect = &pascal[n][k]
                        * crate::rational::rat_pow(&eta, k as i64)
                        * crate::rational::rat_pow(&(rat_int(1) - &eta), (n - k) as i64);
                    assert_eq!(table.probs[k], expect, "n={n} k={k} eta={eta}");
                }
            }
        }
    }

    #[test]
    fn binomial_table_boundary_eta() {
        let n = gauss_unit(8);
        let zero = deformed_binomial(&n, 5, &rat_int(0)).unwrap();
        assert_eq!(zero.probs[0], rat_int(1));
        assert!(zero.probs[1..].iter().all(Rational::is_zero));
        let one = deformed_binomial(&n, 5, &rat_int(1)).unwrap();
        assert_eq!(one.probs[5], rat_int(1));
        assert!(one.probs[..5].iter().all(Rational::is_zero));
    }

    #[test]
    fn binomial_table_input_validation() {
        let e = TruncSeries::exp_t(4);
        assert!(matches!(
            deformed_binomial(&e, 9, &rat(1, 2)),
            Err(CstError::BeyondTruncation { .. })
        ));
        assert!(matches!(
            deformed_binomial(&e, 2, &rat(3, 2)),
            Err(CstError::EtaOutOfRange { .. })
        ));
    }

    #[test]
    fn formal_table_is_flagged_non_probabilistic() {
        // Sigma member that is not SigmaPlus: e^t with a_4 bumped upward
        let mut coeffs = TruncSeries::exp_t(8).into_coeffs();
        coeffs[4] = rat(1, 23);
        let n = TruncSeries::from_coeffs(coeffs);
        let table = deformed_binomial(&n, 6, &rat(1, 2)).unwrap();
        assert!(!table.probabilistic);
        assert_eq!(table.sum(), rat_int(1));
    }

    #[test]
    fn joint_identity_holds_and_detects_corruption() {
        let e = TruncSeries::exp_t(6);
        assert!(joint_gf_check(&e, 6).unwrap().passed());
        let geo = TruncSeries::geometric(&rat(1, 2), 8);
        assert!(joint_gf_check(&geo, 8).unwrap().passed());

        let seq = sequence_from_series(&e).unwrap();
        let polys = pn_polynomials(&e).unwrap();
        let mut rows: Vec<Vec<RatPoly>> =
            (0..=4).map(|n| symbolic_deformed_row(&seq, &polys, n)).collect();
        rows[3][1] = rows[3][1].add(&RatPoly::one());
        let report = joint_gf_compare(&e, 4, &seq, &rows).unwrap();
        assert_eq!(report.mismatch.unwrap().location, "t^3 z^1");
    }

    #[test]
    fn log_identity_examples() {
        assert!(log_identity_check(&TruncSeries::exp_t(8)).unwrap().passed());
        let g = gauss_unit(8);
        assert!(log_identity_check(&g).unwrap().passed());
        // spot value: [t²] log N = 1/2 = −p_2'(1)/(x_2!·2) with x_2! = 1
        let polys = pn_polynomials(&g).unwrap();
        assert_eq!(polys[2].derivative().eval(&rat_int(1)), rat_int(-1));
    }

    #[test]
    fn growth_bound_examples() {
        // e^t sits exactly on the bound
        let seq = sequence_from_series(&TruncSeries::exp_t(8)).unwrap();
        assert!(sequence_bound_check(&seq).passed());
        for n in 1..=8 {
            assert_eq!(seq.x(n), &(seq.x(1) * rat_int(n as i64)));
        }
        // exp(t + t²/2): x_2 = 1 < 2
        let seq = sequence_from_series(&gauss_unit(8)).unwrap();
        assert!(sequence_bound_check(&seq).passed());
        assert!(seq.x(2) < &rat_int(2));
        // (1−t)^{-5} normalized: x_n/(n·x_1) = 5/(4+n) ≤ 1
        let n = TruncSeries::one(8)
            .sub(&TruncSeries::identity(8))
            .unwrap()
            .pow_rational(&rat_int(-5))
            .unwrap();
        let seq = sequence_from_series(&normalize(&n).unwrap()).unwrap();
        assert!(sequence_bound_check(&seq).passed());
    }
}
