//! Deformation operators on normalized generating functions, the induced
//! coefficient flow, and win-parameter reparametrization.
//!
//! For `α ∈ [−1, 1)` and normalized `N` (linear coefficient 1):
//!
//! * the quotient deformation maps `N(t) ↦ N(t/(1−α)) / N(αt/(1−α))`;
//! * the product deformation maps `N(t) ↦ N(t/(1−α)) · N(−αt/(1−α))`.
//!
//! Both preserve normalization and the admissible class, and fix `e^t`.
//! Writing `N = e^F`, one application multiplies the coefficient `f_k` by
//! `(1−α^k)/(1−α)^k` (quotient) or `(1+(−α)^k)/(1−α)^k` (product), which is
//! what [`flow_iterate`] tracks axis by axis: for `α < 0` every `k ≥ 2` axis
//! contracts toward the fixed point `e^t`, for `α > 0` every one expands,
//! and `k = 1` is always marginal.

use crate::cst::{
    deformed_binomial_from_parts, pn_polynomials, sequence_from_series, CstError, CstSequence,
    DeformedBinomialTable,
};
use crate::poly::RatPoly;
use crate::rational::{rat_int, rat_pow, Rational};
use crate::series::{SeriesError, TruncSeries};
use crate::sigma::{check_sigma_plus, SigmaError};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeformError {
    #[error("alpha = {0} outside [-1, 1)")]
    AlphaOutOfRange(Rational),
    #[error("series must be normalized (linear coefficient 1), got {0}")]
    NotNormalized(Rational),
    #[error("series must pass the SigmaPlus check to deform (first violation at index {index})")]
    NotSigmaPlus { index: usize },
    #[error("degenerate evaluation: {poly}_{index}({at}) = 0")]
    DegenerateEvaluation { poly: &'static str, index: usize, at: Rational },
    #[error("flow state must have f_0 = 0, f_1 = 1 and f_k >= 0, got f_{index} = {value}")]
    InvalidFlowState { index: usize, value: Rational },
    #[error("monotone map: {0}")]
    InvalidMonotoneMap(String),
    #[error("eta^({p}/{q}) is not rational for eta = {eta}; use an exact grid or a polynomial map")]
    InexactPower { eta: Rational, p: i64, q: i64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Sigma(#[from] SigmaError),
    #[error(transparent)]
    Cst(#[from] CstError),
}

fn check_deform_inputs(n: &TruncSeries, alpha: &Rational) -> Result<(), DeformError> {
    if *alpha < rat_int(-1) || *alpha >= rat_int(1) {
        return Err(DeformError::AlphaOutOfRange(alpha.clone()));
    }
    if n.order() < 1 || !n.coeff(1).is_one() {
        let a1 = if n.order() >= 1 { n.coeff(1).clone() } else { Rational::zero() };
        return Err(DeformError::NotNormalized(a1));
    }
    let report = check_sigma_plus(n)?;
    if let Some(v) = report.violation {
        return Err(DeformError::NotSigmaPlus { index: v.index });
    }
    Ok(())
}

/// Quotient deformation `N(t/(1−α)) / N(αt/(1−α))`; identity at `α = 0`,
/// fixes `e^t` for every `α`.
pub fn d_alpha(n: &TruncSeries, alpha: &Rational) -> Result<TruncSeries, DeformError> {
    check_deform_inputs(n, alpha)?;
    let stretch = Rational::one() / (Rational::one() - alpha);
    let numerator = n.scale_argument(&stretch);
    let denominator = n.scale_argument(&(alpha * &stretch));
    Ok(numerator.div(&denominator)?)
}

/// Product deformation `N(t/(1−α)) · N(−αt/(1−α))`; identity at `α = 0`,
/// fixes `e^t` for every `α`.
pub fn e_alpha(n: &TruncSeries, alpha: &Rational) -> Result<TruncSeries, DeformError> {
    check_deform_inputs(n, alpha)?;
    let stretch = Rational::one() / (Rational::one() - alpha);
    let left = n.scale_argument(&stretch);
    let right = n.scale_argument(&(-alpha * &stretch));
    Ok(left.mul(&right)?)
}

fn eval_nonzero(
    polys: &[RatPoly],
    index: usize,
    at: &Rational,
    name: &'static str,
) -> Result<Rational, DeformError> {
    let v = polys[index].eval(at);
    if v.is_zero() {
        return Err(DeformError::DegenerateEvaluation { poly: name, index, at: at.clone() });
    }
    Ok(v)
}

/// Sequence of the quotient-deformed function from the original data:
/// `x_n^(α) = x_n·(1−α)·p_{n−1}(α)/p_n(α)`. Matches extraction from
/// [`d_alpha`] exactly.
pub fn d_alpha_sequence(
    seq: &CstSequence,
    polys: &[RatPoly],
    alpha: &Rational,
) -> Result<CstSequence, DeformError> {
    transported_sequence(seq, polys, alpha, "p")
}

fn transported_sequence(
    seq: &CstSequence,
    polys: &[RatPoly],
    alpha: &Rational,
    name: &'static str,
) -> Result<CstSequence, DeformError> {
    let one_minus = Rational::one() - alpha;
    let mut x = Vec::with_capacity(seq.order() + 1);
    x.push(Rational::zero());
    for n in 1..=seq.order() {
        let prev = eval_nonzero(polys, n - 1, alpha, name)?;
        let cur = eval_nonzero(polys, n, alpha, name)?;
        x.push(seq.x(n) * &one_minus * prev / cur);
    }
    Ok(CstSequence::from_values(x)?)
}

/// Reciprocal-series coefficients of the quotient-deformed function, from the
/// ratio of alternating binomial sums
/// `I_n^(α) = Σ_k (x_n;x_k)·I_k·(−α)^{n−k} / Σ_k (x_n;x_k)·I_k·(−α)^k`
/// (equivalently `(−α)^n·p_n(1/α)/p_n(α)`). `α = 0` is the identity and
/// never evaluates `1/α`.
pub fn d_alpha_i_coefficients(
    seq: &CstSequence,
    icoeffs: &[Rational],
    alpha: &Rational,
) -> Result<Vec<Rational>, DeformError> {
    if alpha.is_zero() {
        return Ok(icoeffs.to_vec());
    }
    let neg_alpha = -alpha;
    let mut out = Vec::with_capacity(seq.order() + 1);
    for n in 0..=seq.order() {
        let mut num = Rational::zero();
        let mut den = Rational::zero();
        for k in 0..=n {
            let term = seq.binom(n, k) * &icoeffs[k];
            num += &term * rat_pow(&neg_alpha, (n - k) as i64);
            den += term * rat_pow(&neg_alpha, k as i64);
        }
        if den.is_zero() {
            return Err(DeformError::DegenerateEvaluation {
                poly: "p",
                index: n,
                at: alpha.clone(),
            });
        }
        out.push(num / den);
    }
    Ok(out)
}

/// Win-parameter polynomials of the quotient-deformed function:
/// `p_n^(α)(η) = (1/p_n(α))·Σ_k (x_n;x_k)·p_k(1/α)·p_{n−k}(α)·(αη)^k`.
/// `α = 0` is the identity and never evaluates `1/α`.
pub fn d_alpha_polynomials(
    seq: &CstSequence,
    polys: &[RatPoly],
    alpha: &Rational,
) -> Result<Vec<RatPoly>, DeformError> {
    if alpha.is_zero() {
        return Ok(polys.to_vec());
    }
    let inv_alpha = Rational::one() / alpha;
    let mut out = Vec::with_capacity(seq.order() + 1);
    for n in 0..=seq.order() {
        let pn_alpha = eval_nonzero(polys, n, alpha, "p")?;
        let mut coeffs = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let c = seq.binom(n, k)
                * polys[k].eval(&inv_alpha)
                * polys[n - k].eval(alpha)
                * rat_pow(alpha, k as i64)
                / &pn_alpha;
            coeffs.push(c);
        }
        out.push(RatPoly::new(coeffs));
    }
    Ok(out)
}

/// The polynomials generated by the product `N(t)·N(−ηt)`:
/// `q_n(η) = Σ_k (x_n;x_k)·(−η)^k`.
pub fn q_polynomials(seq: &CstSequence) -> Vec<RatPoly> {
    (0..=seq.order())
        .map(|n| {
            let coeffs = (0..=n)
                .map(|k| {
                    let b = seq.binom(n, k);
                    if k % 2 == 1 {
                        -b
                    } else {
                        b
                    }
                })
                .collect();
            RatPoly::new(coeffs)
        })
        .collect()
}

/// Sequence and win-parameter polynomials of the product-deformed function:
/// `x_n^(α) = x_n·(1−α)·q_{n−1}(α)/q_n(α)` and
/// `p_n^(α)(η) = (1/q_n(α))·Σ_k (x_n;x_k)·p_k(η)·p_{n−k}(η)·(−α)^k`.
pub fn e_alpha_sequence_and_polys(
    seq: &CstSequence,
    polys: &[RatPoly],
    qpolys: &[RatPoly],
    alpha: &Rational,
) -> Result<(CstSequence, Vec<RatPoly>), DeformError> {
    let new_seq = transported_sequence(seq, qpolys, alpha, "q")?;
    let neg_alpha = -alpha;
    let mut out = Vec::with_capacity(seq.order() + 1);
    for n in 0..=seq.order() {
        let qn_alpha = eval_nonzero(qpolys, n, alpha, "q")?;
        let mut acc = RatPoly::zero();
        for k in 0..=n {
            let scalar = seq.binom(n, k) * rat_pow(&neg_alpha, k as i64) / &qn_alpha;
            acc = acc.add(&polys[k].mul(&polys[n - k]).scale(&scalar));
        }
        out.push(acc);
    }
    Ok((new_seq, out))
}

/// Per-axis multiplier of the quotient deformation: `(1−α^k)/(1−α)^k`.
pub fn d_flow_multiplier(alpha: &Rational, k: usize) -> Rational {
    (Rational::one() - rat_pow(alpha, k as i64))
        / rat_pow(&(Rational::one() - alpha), k as i64)
}

/// Per-axis multiplier of the product deformation: `(1+(−α)^k)/(1−α)^k`.
pub fn e_flow_multiplier(alpha: &Rational, k: usize) -> Rational {
    (Rational::one() + rat_pow(&-alpha, k as i64))
        / rat_pow(&(Rational::one() - alpha), k as i64)
}

/// Point on the coefficient flow: the exponent coefficients `f_k` (with
/// `f_0 = 0`, `f_1 = 1`, `f_k ≥ 0`), the step count, and the deformation
/// parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowState {
    pub coeffs: Vec<Rational>,
    pub step: u64,
    pub alpha: Rational,
}

impl FlowState {
    pub fn new(coeffs: Vec<Rational>, alpha: Rational) -> Result<Self, DeformError> {
        if alpha < rat_int(-1) || alpha >= rat_int(1) {
            return Err(DeformError::AlphaOutOfRange(alpha));
        }
        if coeffs.first().is_some_and(|f0| !f0.is_zero()) {
            return Err(DeformError::InvalidFlowState { index: 0, value: coeffs[0].clone() });
        }
        match coeffs.get(1) {
            Some(f1) if f1.is_one() => {}
            other => {
                return Err(DeformError::InvalidFlowState {
                    index: 1,
                    value: other.cloned().unwrap_or_else(Rational::zero),
                })
            }
        }
        for (k, f) in coeffs.iter().enumerate().skip(2) {
            if f.is_negative() {
                return Err(DeformError::InvalidFlowState { index: k, value: f.clone() });
            }
        }
        Ok(FlowState { coeffs, step: 0, alpha })
    }
}

/// How one axis behaves under repeated application.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AxisClass {
    Contracting,
    Marginal,
    Expanding,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxisReport {
    pub k: usize,
    #[serde(with = "crate::rational::rat_string")]
    pub multiplier: Rational,
    pub class: AxisClass,
}

/// Apply the quotient-deformation multiplier to every axis `steps` times and
/// classify each axis. `f_1` stays exactly 1 (its multiplier is 1).
pub fn flow_iterate(state: &FlowState, steps: u64) -> (FlowState, Vec<AxisReport>) {
    let mut coeffs = state.coeffs.clone();
    let mut reports = Vec::new();
    for (k, f) in coeffs.iter_mut().enumerate().skip(1) {
        let mu = d_flow_multiplier(&state.alpha, k);
        let class = match mu.cmp(&Rational::one()) {
            std::cmp::Ordering::Less => AxisClass::Contracting,
            std::cmp::Ordering::Equal => AxisClass::Marginal,
            std::cmp::Ordering::Greater => AxisClass::Expanding,
        };
        let mut mu_pow = Rational::one();
        for _ in 0..steps {
            mu_pow *= &mu;
        }
        *f *= mu_pow;
        reports.push(AxisReport { k, multiplier: mu, class });
    }
    (
        FlowState { coeffs, step: state.step + steps, alpha: state.alpha.clone() },
        reports,
    )
}

/// Monotone reparametrizations of the win parameter with `g(0) = 0`,
/// `g(1) = 1`, evaluated exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonotoneMap {
    /// `g(η) = η^c` with positive rational `c = p/q`. Exact only when the
    /// q-th root of `η^p` is rational; other points are refused rather than
    /// approximated.
    Power { c: Rational },
    /// Polynomial with nonnegative coefficients, zero constant term and
    /// coefficient sum 1 (monotone on `[0, 1]` by construction).
    Poly { coeffs: Vec<Rational> },
}

impl MonotoneMap {
    pub fn validate(&self) -> Result<(), DeformError> {
        match self {
            MonotoneMap::Power { c } => {
                if !c.is_positive() {
                    return Err(DeformError::InvalidMonotoneMap(format!(
                        "power exponent must be > 0, got {c}"
                    )));
                }
                Ok(())
            }
            MonotoneMap::Poly { coeffs } => {
                if coeffs.first().is_some_and(|c0| !c0.is_zero()) {
                    return Err(DeformError::InvalidMonotoneMap(
                        "polynomial map needs zero constant term".into(),
                    ));
                }
                if coeffs.iter().any(Rational::is_negative) {
                    return Err(DeformError::InvalidMonotoneMap(
                        "polynomial map needs nonnegative coefficients".into(),
                    ));
                }
                let sum: Rational = coeffs.iter().sum();
                if !sum.is_one() {
                    return Err(DeformError::InvalidMonotoneMap(format!(
                        "polynomial map coefficients must sum to 1, got {sum}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Exact value of `g(eta)` for `eta ∈ [0, 1]`.
    pub fn apply(&self, eta: &Rational) -> Result<Rational, DeformError> {
        self.validate()?;
        match self {
            MonotoneMap::Power { c } => {
                let p: i64 = c.numer().try_into().map_err(|_| {
                    DeformError::InvalidMonotoneMap(format!("exponent numerator {} too large", c.numer()))
                })?;
                let q: i64 = c.denom().try_into().map_err(|_| {
                    DeformError::InvalidMonotoneMap(format!("exponent denominator {} too large", c.denom()))
                })?;
                let powered = rat_pow(eta, p);
                if q == 1 {
                    return Ok(powered);
                }
                let root = |v: &BigInt| -> Option<BigInt> {
                    let r = v.nth_root(q as u32);
                    if num_traits::pow::Pow::pow(&r, q as u32) == *v {
                        Some(r)
                    } else {
                        None
                    }
                };
                match (root(powered.numer()), root(powered.denom())) {
                    (Some(rn), Some(rd)) => Ok(Rational::new(rn, rd)),
                    _ => Err(DeformError::InexactPower { eta: eta.clone(), p, q }),
                }
            }
            MonotoneMap::Poly { coeffs } => Ok(RatPoly::new(coeffs.clone()).eval(eta)),
        }
    }
}

/// Deformed binomial table with the win parameter sent through a monotone
/// map: `P_k = (x_n;x_k)·g(η)^k·p_{n−k}(g(η))`. Sums to 1 exactly; entries
/// are nonnegative whenever the base series passes the `SigmaPlus` check.
pub fn eta_deform(
    n_series: &TruncSeries,
    g: &MonotoneMap,
    n: usize,
    eta: &Rational,
) -> Result<DeformedBinomialTable, DeformError> {
    if eta.is_negative() || *eta > rat_int(1) {
        return Err(DeformError::Cst(CstError::EtaOutOfRange { eta: eta.clone() }));
    }
    let g_eta = g.apply(eta)?;
    let seq = sequence_from_series(n_series)?;
    let polys = pn_polynomials(n_series)?;
    let probabilistic = check_sigma_plus(n_series)?.passed();
    let mut table = deformed_binomial_from_parts(&seq, &polys, n, &g_eta, probabilistic)?;
    // report the caller's eta, not the mapped value
    table.eta = eta.clone();
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cst::i_coefficients;
    use crate::rational::rat;
    use crate::sigma::check_sigma0;

    fn exp_poly(coeffs: &[(usize, Rational)], order: usize) -> TruncSeries {
        let mut f = TruncSeries::zero(order).into_coeffs();
        for (k, c) in coeffs {
            f[*k] = c.clone();
        }
        TruncSeries::from_coeffs(f).exp().unwrap()
    }

    fn gauss(a: Rational, order: usize) -> TruncSeries {
        exp_poly(&[(1, rat_int(1)), (2, a / rat_int(2))], order)
    }

    #[test]
    fn exponential_is_fixed_point_of_both_operators() {
        let e = TruncSeries::exp_t(10);
        for alpha in [rat_int(-1), rat(-1, 2), rat(1, 2), rat(9, 10)] {
            assert_eq!(d_alpha(&e, &alpha).unwrap(), e);
            assert_eq!(e_alpha(&e, &alpha).unwrap(), e);
        }
    }

    #[test]
    fn alpha_zero_is_identity() {
        let n = gauss(rat(1, 2), 8);
        assert_eq!(d_alpha(&n, &rat_int(0)).unwrap(), n);
        assert_eq!(e_alpha(&n, &rat_int(0)).unwrap(), n);
    }

    #[test]
    fn quotient_deformation_scales_quadratic_exponent() {
        // exp(t + t²/2) at α = 1/2: multiplier (1−α²)/(1−α)² = 3, so the
        // result is exp(t + (3/2)t²)
        let n = gauss(rat_int(1), 10);
        let expected = gauss(rat_int(3), 10);
        assert_eq!(d_alpha(&n, &rat(1, 2)).unwrap(), expected);
    }

    #[test]
    fn product_deformation_scales_quadratic_exponent() {
        // multiplier (1+α²)/(1−α)² = 5 at α = 1/2: exp(t + (5/2)t²)
        let n = gauss(rat_int(1), 10);
        let expected = gauss(rat_int(5), 10);
        assert_eq!(e_alpha(&n, &rat(1, 2)).unwrap(), expected);
    }

    #[test]
    fn deformation_rejects_bad_inputs() {
        let e = TruncSeries::exp_t(6);
        assert!(matches!(d_alpha(&e, &rat_int(1)), Err(DeformError::AlphaOutOfRange(_))));
        let unnormalized = TruncSeries::identity(6).scale(&rat_int(2)).exp().unwrap();
        assert!(matches!(
            d_alpha(&unnormalized, &rat(1, 2)),
            Err(DeformError::NotNormalized(_))
        ));
    }

    #[test]
    fn formula_sequence_matches_series_extraction() {
        let n = gauss(rat_int(1), 10);
        let seq = sequence_from_series(&n).unwrap();
        let polys = pn_polynomials(&n).unwrap();
        for alpha in [rat_int(0), rat(-1, 2), rat(1, 2), rat(-1, 1)] {
            let formula = d_alpha_sequence(&seq, &polys, &alpha).unwrap();
            let series = sequence_from_series(&d_alpha(&n, &alpha).unwrap()).unwrap();
            assert_eq!(formula, series, "alpha = {alpha}");
        }
        // spot value: x_2^(1/2) of exp(t+t²/2) is 1/2 (sequence of exp(t+3t²/2))
        let formula = d_alpha_sequence(&seq, &polys, &rat(1, 2)).unwrap();
        assert_eq!(formula.x(2), &rat(1, 2));
    }

    #[test]
    fn formula_reciprocal_coefficients_match_series_route() {
        let n = gauss(rat_int(1), 10);
        let seq = sequence_from_series(&n).unwrap();
        let icoeffs = i_coefficients(&n).unwrap();
        for alpha in [rat_int(0), rat(1, 2), rat(-1, 2)] {
            let formula = d_alpha_i_coefficients(&seq, &icoeffs, &alpha).unwrap();
            let series = i_coefficients(&d_alpha(&n, &alpha).unwrap()).unwrap();
            assert_eq!(formula, series, "alpha = {alpha}");
        }
        // e^t: every I_n^(α) stays 1
        let e = TruncSeries::exp_t(8);
        let eseq = sequence_from_series(&e).unwrap();
        let ei = i_coefficients(&e).unwrap();
        let out = d_alpha_i_coefficients(&eseq, &ei, &rat(1, 3)).unwrap();
        assert!(out.iter().all(|v| v.is_one()));
    }

    #[test]
    fn formula_polynomials_match_series_route() {
        let n = gauss(rat_int(1), 8);
        let seq = sequence_from_series(&n).unwrap();
        let polys = pn_polynomials(&n).unwrap();
        for alpha in [rat_int(0), rat(1, 2), rat(-1, 2)] {
            let formula = d_alpha_polynomials(&seq, &polys, &alpha).unwrap();
            let series = pn_polynomials(&d_alpha(&n, &alpha).unwrap()).unwrap();
            assert_eq!(formula, series, "alpha = {alpha}");
        }
    }

    #[test]
    fn q_polynomials_match_symbolic_product() {
        use crate::eta::EtaSeries;
        for n_series in [
            TruncSeries::exp_t(8),
            TruncSeries::geometric(&rat(1, 2), 8),
            gauss(rat_int(1), 8),
        ] {
            let seq = sequence_from_series(&n_series).unwrap();
            let q = q_polynomials(&seq);
            let product = EtaSeries::from_series(&n_series)
                .mul(&EtaSeries::from_scaled_eta(&n_series, true))
                .unwrap();
            for n in 0..=8 {
                assert_eq!(q[n], product.coeff(n).scale(seq.x_factorial(n)), "n = {n}");
            }
        }
        // e^t: q_n(η) = (1−η)^n
        let seq = sequence_from_series(&TruncSeries::exp_t(6)).unwrap();
        let q = q_polynomials(&seq);
        assert_eq!(q[1], RatPoly::from_pairs(&[(1, 1), (-1, 1)]));
        let mut expect = RatPoly::one();
        for n in 0..=6 {
            assert_eq!(q[n], expect);
            expect = expect.mul(&RatPoly::from_pairs(&[(1, 1), (-1, 1)]));
        }
    }

    #[test]
    fn product_deformation_formulas_match_series_route() {
        let n = gauss(rat_int(1), 8);
        let seq = sequence_from_series(&n).unwrap();
        let polys = pn_polynomials(&n).unwrap();
        let q = q_polynomials(&seq);
        for alpha in [rat_int(0), rat(-1, 2), rat(1, 2)] {
            let (fseq, fpolys) = e_alpha_sequence_and_polys(&seq, &polys, &q, &alpha).unwrap();
            let transformed = e_alpha(&n, &alpha).unwrap();
            assert_eq!(fseq, sequence_from_series(&transformed).unwrap(), "alpha = {alpha}");
            assert_eq!(fpolys, pn_polynomials(&transformed).unwrap(), "alpha = {alpha}");
        }
    }

    #[test]
    fn flow_single_step_and_invariance() {
        // α = −1/2, f = (0,1,1): f₂ multiplier (1−1/4)/(9/4) = 1/3
        let state = FlowState::new(vec![rat_int(0), rat_int(1), rat_int(1)], rat(-1, 2)).unwrap();
        let (next, reports) = flow_iterate(&state, 1);
        assert_eq!(next.coeffs[2], rat(1, 3));
        assert_eq!(next.coeffs[1], rat_int(1));
        assert_eq!(reports[0].class, AxisClass::Marginal);
        assert_eq!(reports[1].class, AxisClass::Contracting);
        // α = 1/2: f₂ multiplier 3, expanding
        assert_eq!(d_flow_multiplier(&rat(1, 2), 2), rat_int(3));
        // pure t is invariant for any α
        let state = FlowState::new(vec![rat_int(0), rat_int(1), rat_int(0)], rat(3, 4)).unwrap();
        let (next, _) = flow_iterate(&state, 7);
        assert_eq!(next.coeffs, vec![rat_int(0), rat_int(1), rat_int(0)]);
    }

    #[test]
    fn flow_matches_direct_deformation() {
        // one flow step on the exponent = d_alpha on the series
        let f = vec![rat_int(0), rat_int(1), rat(1, 2), rat(1, 3)];
        let alpha = rat(-1, 2);
        let state = FlowState::new(f.clone(), alpha.clone()).unwrap();
        let (next, _) = flow_iterate(&state, 1);
        let order = 8;
        let mut coeffs = TruncSeries::zero(order).into_coeffs();
        for (k, c) in f.iter().enumerate() {
            coeffs[k] = c.clone();
        }
        let n = TruncSeries::from_coeffs(coeffs).exp().unwrap();
        let deformed = d_alpha(&n, &alpha).unwrap();
        let mut expect = TruncSeries::zero(order).into_coeffs();
        for (k, c) in next.coeffs.iter().enumerate() {
            expect[k] = c.clone();
        }
        assert_eq!(deformed, TruncSeries::from_coeffs(expect).exp().unwrap());
    }

    #[test]
    fn product_multiplier_keeps_sign_pattern() {
        // F(t/(1−α)) + F(−αt/(1−α)) stays in the class for sampled α
        let f = TruncSeries::from_pairs(&[(0, 1), (1, 1), (1, 2), (1, 6), (0, 1), (2, 7)]);
        for alpha in [rat(-1, 1), rat(-1, 2), rat(1, 2), rat(9, 10)] {
            let stretch = Rational::one() / (Rational::one() - &alpha);
            let sum = f
                .scale_argument(&stretch)
                .add(&f.scale_argument(&(-&alpha * &stretch)))
                .unwrap();
            assert!(check_sigma0(&sum).passed(), "alpha = {alpha}");
            for k in 1..=f.order() {
                let expect = f.coeff(k) * e_flow_multiplier(&alpha, k);
                assert_eq!(sum.coeff(k), &expect);
            }
        }
    }

    #[test]
    fn monotone_maps_evaluate_exactly() {
        let square = MonotoneMap::Power { c: rat_int(2) };
        assert_eq!(square.apply(&rat(1, 2)).unwrap(), rat(1, 4));
        let sqrt = MonotoneMap::Power { c: rat(1, 2) };
        assert_eq!(sqrt.apply(&rat(1, 4)).unwrap(), rat(1, 2));
        assert!(matches!(
            sqrt.apply(&rat(1, 2)),
            Err(DeformError::InexactPower { .. })
        ));
        let poly = MonotoneMap::Poly { coeffs: vec![rat_int(0), rat(1, 2), rat(1, 2)] };
        assert_eq!(poly.apply(&rat(1, 2)).unwrap(), rat(3, 8));
        assert!(MonotoneMap::Poly { coeffs: vec![rat_int(0), rat(1, 2)] }.validate().is_err());
    }

    #[test]
    fn eta_deform_examples() {
        let e = TruncSeries::exp_t(6);
        // identity map reproduces the plain table
        let ident = MonotoneMap::Poly { coeffs: vec![rat_int(0), rat_int(1)] };
        let plain = crate::cst::deformed_binomial(&e, 3, &rat(1, 2)).unwrap();
        let mapped = eta_deform(&e, &ident, 3, &rat(1, 2)).unwrap();
        assert_eq!(plain.probs, mapped.probs);
        // g(η) = η² on e^t at n = 2, η = 1/2: binomial at 1/4
        let square = MonotoneMap::Power { c: rat_int(2) };
        let table = eta_deform(&e, &square, 2, &rat(1, 2)).unwrap();
        assert_eq!(table.probs, vec![rat(9, 16), rat(6, 16), rat(1, 16)]);
        assert_eq!(table.eta, rat(1, 2));
        // exact normalization for a nontrivial base
        let g = gauss(rat(1, 2), 8);
        let table = eta_deform(&g, &square, 6, &rat(3, 4)).unwrap();
        assert_eq!(table.sum(), rat_int(1));
        assert!(table.probs.iter().all(|p| !p.is_negative()));
    }
}
