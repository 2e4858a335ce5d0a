//! Truncated formal power series over exact rationals.
//!
//! A [`TruncSeries`] holds coefficients for `t^0 .. t^T` where `T` is the
//! truncation order fixed at construction. All arithmetic is coefficient-exact
//! and never reads or writes past index `T`. Division uses the forward
//! substitution recurrence; `exp`/`log` use the standard derivative
//! recurrences (`g' = f'·g` and integration of `a'/a`), which makes sparse
//! exponents cheap because zero coefficients drop out of the convolutions.

use crate::rational::{rat_int, rat_pow, Rational};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Errors from series arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("division undefined: divisor has zero constant term")]
    DivisorConstantZero,
    #[error("{op} requires constant term {expected}, got {actual}")]
    Domain {
        op: &'static str,
        expected: &'static str,
        actual: Rational,
    },
}

/// Dense truncated power series; `coeffs[k]` is the coefficient of `t^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<Rational>,
}

impl TruncSeries {
    /// Build from explicit coefficients; the truncation order is `len - 1`.
    ///
    /// Panics on an empty vector (a series always carries at least `t^0`).
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the constant coefficient");
        TruncSeries { coeffs }
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        Self::from_coeffs(pairs.iter().map(|&(n, d)| crate::rational::rat(n, d)).collect())
    }

    pub fn zero(order: usize) -> Self {
        TruncSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    /// The identity series `t` (zero when the order is 0).
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    /// Constant series `c`.
    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Truncation order `T`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Copy truncated (or zero-extended) to a new order.
    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Rational::zero());
        coeffs.truncate(order + 1);
        TruncSeries { coeffs }
    }

    fn check_order(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch { left: self.order(), right: other.order() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(TruncSeries { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(TruncSeries { coeffs })
    }

    pub fn neg(&self) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    /// Multiply every coefficient by a scalar.
    pub fn scale(&self, s: &Rational) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|a| a * s).collect() }
    }

    /// Add a constant to the `t^0` coefficient.
    pub fn shift_constant(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        let t = self.order();
        let mut coeffs = vec![Rational::zero(); t + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(t + 1 - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        Ok(TruncSeries { coeffs })
    }

    /// Forward-substitution division; the divisor needs a nonzero constant term.
    pub fn div(&self, divisor: &Self) -> Result<Self, SeriesError> {
        self.check_order(divisor)?;
        if divisor.coeffs[0].is_zero() {
            return Err(SeriesError::DivisorConstantZero);
        }
        let t = self.order();
        let b0 = &divisor.coeffs[0];
        let mut coeffs = vec![Rational::zero(); t + 1];
        for n in 0..=t {
            let mut acc = self.coeffs[n].clone();
            for k in 1..=n {
                if divisor.coeffs[k].is_zero() || coeffs[n - k].is_zero() {
                    continue;
                }
                acc -= &divisor.coeffs[k] * &coeffs[n - k];
            }
            coeffs[n] = acc / b0;
        }
        Ok(TruncSeries { coeffs })
    }

    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        Self::one(self.order()).div(self)
    }

    /// Formal exponential; requires zero constant term.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::Domain {
                op: "exp",
                expected: "0",
                actual: self.coeffs[0].clone(),
            });
        }
        let t = self.order();
        let mut g = vec![Rational::zero(); t + 1];
        g[0] = Rational::one();
        for n in 1..=t {
            // n·g_n = Σ_{k=1..n} k·f_k·g_{n−k}
            let mut acc = Rational::zero();
            for k in 1..=n {
                if self.coeffs[k].is_zero() || g[n - k].is_zero() {
                    continue;
                }
                acc += &self.coeffs[k] * &g[n - k] * rat_int(k as i64);
            }
            g[n] = acc / rat_int(n as i64);
        }
        Ok(TruncSeries { coeffs: g })
    }

    /// Formal logarithm; requires constant term exactly 1.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::Domain {
                op: "log",
                expected: "1",
                actual: self.coeffs[0].clone(),
            });
        }
        let t = self.order();
        let mut f = vec![Rational::zero(); t + 1];
        for n in 1..=t {
            // f_n = a_n − (1/n)·Σ_{k=1..n−1} k·f_k·a_{n−k}
            let mut acc = Rational::zero();
            for k in 1..n {
                if f[k].is_zero() || self.coeffs[n - k].is_zero() {
                    continue;
                }
                acc += &f[k] * &self.coeffs[n - k] * rat_int(k as i64);
            }
            f[n] = &self.coeffs[n] - acc / rat_int(n as i64);
        }
        Ok(TruncSeries { coeffs: f })
    }

    /// Formal power `self^r` for rational `r`, computed as `exp(r·log self)`;
    /// requires constant term exactly 1.
    pub fn pow_rational(&self, r: &Rational) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::Domain {
                op: "pow",
                expected: "1",
                actual: self.coeffs[0].clone(),
            });
        }
        self.log()?.scale(r).exp()
    }

    /// Formal composition `self ∘ inner`; `inner` needs zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        self.check_order(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::Domain {
                op: "compose",
                expected: "0",
                actual: inner.coeffs[0].clone(),
            });
        }
        let t = self.order();
        // Horner over truncated products.
        let mut acc = Self::constant(self.coeffs[t].clone(), t);
        for k in (0..t).rev() {
            acc = acc.mul(inner)?;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Substitute `t → s·t`: coefficient `k` is multiplied by `s^k`.
    pub fn scale_argument(&self, s: &Rational) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        let mut sk = Rational::one();
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                sk *= s;
            }
            coeffs.push(a * &sk);
        }
        TruncSeries { coeffs }
    }

    /// Evaluate the truncated polynomial at a float `t` by Horner, returning
    /// the value together with the magnitude of the highest-order term as a
    /// tail diagnostic.
    pub fn eval_f64(&self, t: f64) -> (f64, f64) {
        let mut acc = 0.0;
        for a in self.coeffs.iter().rev() {
            acc = acc * t + crate::rational::rational_to_f64(a);
        }
        let last = crate::rational::rational_to_f64(&self.coeffs[self.order()])
            * t.powi(self.order() as i32);
        (acc, last.abs())
    }

    /// Exact evaluation at a rational point (the truncated polynomial value).
    pub fn eval_rational(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for a in self.coeffs.iter().rev() {
            acc = acc * t + a;
        }
        acc
    }

    /// Geometric series `1/(1−c·t)` up to the given order.
    pub fn geometric(c: &Rational, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        for k in 0..=order {
            coeffs.push(rat_pow(c, k as i64));
        }
        TruncSeries { coeffs }
    }

    /// `e^t` up to the given order.
    pub fn exp_t(order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut fact = Rational::one();
        for k in 0..=order {
            if k > 0 {
                fact *= rat_int(k as i64);
            }
            coeffs.push(Rational::one() / fact.clone());
        }
        TruncSeries { coeffs }
    }

    /// True if every coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// Index of the first negative coefficient, if any.
    pub fn first_negative(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| c.is_negative())
    }
}
