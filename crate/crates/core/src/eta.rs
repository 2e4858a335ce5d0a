//! Truncated series in `t` whose coefficients are polynomials in the win
//! parameter `η`.
//!
//! This is the exact carrier for `G(t) = N(t)/N(ηt)` with `η` kept symbolic:
//! the coefficient of `t^k` in `N(ηt)` is `a_k·η^k`, and dividing over the
//! polynomial ring yields the `p_k(η)/x_k!` coefficients in one pass.

use crate::poly::RatPoly;
use crate::rational::Rational;
use crate::series::{SeriesError, TruncSeries};
use num_traits::One;

/// Dense truncated series over the `η`-polynomial ring; `coeffs[k]` is the
/// polynomial coefficient of `t^k`, of degree at most `k` in every value this
/// crate constructs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaSeries {
    coeffs: Vec<RatPoly>,
}

impl EtaSeries {
    pub fn from_polys(coeffs: Vec<RatPoly>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the constant coefficient");
        EtaSeries { coeffs }
    }

    /// Lift a plain series: every coefficient becomes a constant polynomial.
    pub fn from_series(n: &TruncSeries) -> Self {
        EtaSeries {
            coeffs: n.coeffs().iter().map(|a| RatPoly::constant(a.clone())).collect(),
        }
    }

    /// The series of `N(±ηt)`: coefficient `k` becomes the monomial
    /// `a_k·(∓1)^k·η^k` (`negate` selects `N(−ηt)`).
    pub fn from_scaled_eta(n: &TruncSeries, negate: bool) -> Self {
        let coeffs = n
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let sign = if negate && k % 2 == 1 { -a } else { a.clone() };
                RatPoly::monomial(sign, k)
            })
            .collect();
        EtaSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &RatPoly {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[RatPoly] {
        &self.coeffs
    }

    fn check_order(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch { left: self.order(), right: other.order() });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        let t = self.order();
        let mut coeffs = vec![RatPoly::zero(); t + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(t + 1 - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Ok(EtaSeries { coeffs })
    }

    /// Forward-substitution division. The divisor's `t^0` coefficient must be
    /// the constant polynomial 1, which is the only case the crate needs
    /// (generating functions are normalized to `N(0) = 1`).
    pub fn div(&self, divisor: &Self) -> Result<Self, SeriesError> {
        self.check_order(divisor)?;
        if !divisor.coeffs[0].is_one() {
            return Err(SeriesError::Domain {
                op: "eta-series division",
                expected: "1",
                actual: divisor.coeffs[0].coeff(0),
            });
        }
        let t = self.order();
        let mut coeffs = vec![RatPoly::zero(); t + 1];
        for n in 0..=t {
            let mut acc = self.coeffs[n].clone();
            for k in 1..=n {
                if divisor.coeffs[k].is_zero() || coeffs[n - k].is_zero() {
                    continue;
                }
                acc = acc.sub(&divisor.coeffs[k].mul(&coeffs[n - k]));
            }
            coeffs[n] = acc;
        }
        Ok(EtaSeries { coeffs })
    }

    /// Substitute a rational value for `η`, collapsing back to a plain series.
    pub fn eval_eta(&self, eta: &Rational) -> TruncSeries {
        TruncSeries::from_coeffs(self.coeffs.iter().map(|p| p.eval(eta)).collect())
    }
}

/// `G(t) = N(t)/N(ηt)` with `η` symbolic; requires `N(0) = 1`. The `t^k`
/// coefficient of the result is the exact polynomial `p_k(η)/x_k!`.
pub fn eta_division(n: &TruncSeries) -> Result<EtaSeries, SeriesError> {
    if !n.coeff(0).is_one() {
        return Err(SeriesError::Domain {
            op: "eta division",
            expected: "1",
            actual: n.coeff(0).clone(),
        });
    }
    let numerator = EtaSeries::from_series(n);
    let denominator = EtaSeries::from_scaled_eta(n, false);
    numerator.div(&denominator)
}
