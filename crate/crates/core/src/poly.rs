//! Dense univariate polynomials with exact rational coefficients.
//!
//! Used for the win-parameter polynomials `p_n(η)`, `q_n(η)` and for exact
//! Hermite polynomials. Trailing zero coefficients are always trimmed, so the
//! zero polynomial has an empty coefficient vector.

use crate::rational::{Rational, rational_to_f64};
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        Self::new(pairs.iter().map(|&(n, d)| crate::rational::rat(n, d)).collect())
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c·x^degree`.
    pub fn monomial(c: Rational, degree: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        RatPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^k` (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        Self::new(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RatPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs)
    }

    /// Exact value at a rational point (Horner).
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rational_to_f64(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * crate::rational::rat_int(k as i64))
            .collect();
        Self::new(coeffs)
    }

    /// True if any coefficient is negative.
    pub fn has_negative_coeff(&self) -> bool {
        self.coeffs.iter().any(Rational::is_negative)
    }
}

impl fmt::Display for RatPoly {
    /// Coefficient-list form, lowest degree first: `[1, -5/3, 2/3]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    #[test]
    fn trims_trailing_zeros() {
        let p = RatPoly::new(vec![rat_int(1), rat_int(0), rat_int(0)]);
        assert_eq!(p.degree(), Some(0));
        assert!(RatPoly::new(vec![rat_int(0)]).is_zero());
    }

    #[test]
    fn mul_and_eval_agree() {
        // (1−x)(1+x) = 1−x²
        let a = RatPoly::from_pairs(&[(1, 1), (-1, 1)]);
        let b = RatPoly::from_pairs(&[(1, 1), (1, 1)]);
        let p = a.mul(&b);
        assert_eq!(p, RatPoly::from_pairs(&[(1, 1), (0, 1), (-1, 1)]));
        assert_eq!(p.eval(&rat(1, 2)), rat(3, 4));
    }

    #[test]
    fn derivative_drops_degree() {
        let p = RatPoly::from_pairs(&[(5, 1), (3, 1), (1, 2)]);
        assert_eq!(p.derivative(), RatPoly::from_pairs(&[(3, 1), (1, 1)]));
        assert_eq!(RatPoly::one().derivative(), RatPoly::zero());
    }
}
