//! Closed-form generating-function families and their independent formulas
//! for `x_n`, `x_n!` and `p_n(η)`.
//!
//! Each family's series is built through the generic kernel (powers, exp,
//! products), while the values below come from separate closed forms, so the
//! two routes cross-check one another:
//!
//! * [`FamilySpec::NegPow`] `(1−at)^{−n0}`: bounded sequence with limit `1/a`;
//! * [`FamilySpec::TwoFactor`] `1/((1−a1·t)(1−a2·t))`: q-bracket ratios,
//!   quadratic polynomials;
//! * [`FamilySpec::QGeometric`] truncated product `∏ 1/(1−(1−q)q^k t)`, the
//!   q-calculus case with `x_n → [n]_q`;
//! * [`FamilySpec::Gauss`] `exp(t + a·t²/2)`: Hermite-connected, unbounded
//!   sequence growing like `√(n/a)`;
//! * [`FamilySpec::CubicExp`] `exp(t + a·t³/3)` and [`FamilySpec::ExpPoly`]
//!   `exp(t + Σ c_k t^k)`: the recursion-conjecture families.

use crate::rational::{rat_int, rat_pow, Rational};
use crate::poly::RatPoly;
use crate::series::{SeriesError, TruncSeries};
use crate::sigma::{product_family, SigmaError};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid {family}.{param} = {value}: must be {requirement}")]
    InvalidParameter {
        family: &'static str,
        param: &'static str,
        value: String,
        requirement: &'static str,
    },
    #[error("recursion step is degenerate (zero denominator) at the given point")]
    DegenerateRecursion,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Sigma(#[from] SigmaError),
}

fn invalid(
    family: &'static str,
    param: &'static str,
    value: String,
    requirement: &'static str,
) -> FamilyError {
    FamilyError::InvalidParameter { family, param, value, requirement }
}

/// A generating-function family with closed-form data. JSON encoding is a
/// tagged union on `"kind"`, rationals as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FamilySpec {
    /// `(1 − at)^{−n0}`, `a > 0`, `n0 ≥ 1`.
    NegPow {
        #[serde(with = "crate::rational::rat_string")]
        a: Rational,
        n0: u32,
    },
    /// `1/((1 − a1·t)(1 − a2·t))`, `0 < a1 < a2`.
    TwoFactor {
        #[serde(with = "crate::rational::rat_string")]
        a1: Rational,
        #[serde(with = "crate::rational::rat_string")]
        a2: Rational,
    },
    /// `∏_{k=0}^{factors−1} 1/(1 − (1−q)q^k t)`, `0 < q < 1`.
    QGeometric {
        #[serde(with = "crate::rational::rat_string")]
        q: Rational,
        factors: u32,
    },
    /// `exp(t + a·t²/2)`, `a > 0`.
    Gauss {
        #[serde(with = "crate::rational::rat_string")]
        a: Rational,
    },
    /// `exp(t + a·t³/3)`, `a > 0`.
    CubicExp {
        #[serde(with = "crate::rational::rat_string")]
        a: Rational,
    },
    /// `exp(t + Σ_{k≥2} c_k t^k)` with `c_k ≥ 0`; `coeffs[0]` is `c_2`.
    ExpPoly {
        #[serde(with = "crate::rational::rat_vec_string")]
        coeffs: Vec<Rational>,
    },
}

impl FamilySpec {
    pub fn validate(&self) -> Result<(), FamilyError> {
        match self {
            FamilySpec::NegPow { a, n0 } => {
                if !a.is_positive() {
                    return Err(invalid("NegPow", "a", a.to_string(), "> 0"));
                }
                if *n0 == 0 {
                    return Err(invalid("NegPow", "n0", "0".into(), ">= 1"));
                }
                Ok(())
            }
            FamilySpec::TwoFactor { a1, a2 } => {
                if !a1.is_positive() {
                    return Err(invalid("TwoFactor", "a1", a1.to_string(), "> 0"));
                }
                if a2 <= a1 {
                    return Err(invalid("TwoFactor", "a2", a2.to_string(), "> a1"));
                }
                Ok(())
            }
            FamilySpec::QGeometric { q, factors } => {
                if !q.is_positive() || *q >= rat_int(1) {
                    return Err(invalid("QGeometric", "q", q.to_string(), "in (0, 1)"));
                }
                if *factors == 0 {
                    return Err(invalid("QGeometric", "factors", "0".into(), ">= 1"));
                }
                Ok(())
            }
            FamilySpec::Gauss { a } => {
                if !a.is_positive() {
                    return Err(invalid("Gauss", "a", a.to_string(), "> 0"));
                }
                Ok(())
            }
            FamilySpec::CubicExp { a } => {
                if !a.is_positive() {
                    return Err(invalid("CubicExp", "a", a.to_string(), "> 0"));
                }
                Ok(())
            }
            FamilySpec::ExpPoly { coeffs } => {
                for c in coeffs {
                    if c.is_negative() {
                        return Err(invalid("ExpPoly", "coeffs", c.to_string(), ">= 0"));
                    }
                }
                Ok(())
            }
        }
    }

    /// The family's series, built through the generic kernel.
    pub fn series(&self, order: usize) -> Result<TruncSeries, FamilyError> {
        self.validate()?;
        Ok(match self {
            FamilySpec::NegPow { a, n0 } => {
                let base = TruncSeries::one(order)
                    .sub(&TruncSeries::identity(order).scale(a))?;
                base.pow_rational(&rat_int(-i64::from(*n0)))?
            }
            FamilySpec::TwoFactor { a1, a2 } => {
                let f1 = TruncSeries::one(order)
                    .sub(&TruncSeries::identity(order).scale(a1))?
                    .reciprocal()?;
                let f2 = TruncSeries::one(order)
                    .sub(&TruncSeries::identity(order).scale(a2))?
                    .reciprocal()?;
                f1.mul(&f2)?
            }
            FamilySpec::QGeometric { q, factors } => {
                let aks = q_geometric_factors(q, *factors);
                product_family(&aks, &Rational::zero(), order)?
            }
            FamilySpec::Gauss { a } => exp_with_monomial(order, 2, &(a / rat_int(2)))?,
            FamilySpec::CubicExp { a } => exp_with_monomial(order, 3, &(a / rat_int(3)))?,
            FamilySpec::ExpPoly { coeffs } => {
                let mut f = TruncSeries::zero(order).into_coeffs();
                if order >= 1 {
                    f[1] = Rational::one();
                }
                for (i, c) in coeffs.iter().enumerate() {
                    let k = i + 2;
                    if k <= order {
                        f[k] = c.clone();
                    }
                }
                TruncSeries::from_coeffs(f).exp()?
            }
        })
    }
}

fn exp_with_monomial(order: usize, degree: usize, c: &Rational) -> Result<TruncSeries, SeriesError> {
    let mut f = TruncSeries::zero(order).into_coeffs();
    if order >= 1 {
        f[1] = Rational::one();
    }
    if degree <= order {
        f[degree] = c.clone();
    }
    TruncSeries::from_coeffs(f).exp()
}

// ------------------------------------------------------------------
// (1 − at)^{−n0}
// ------------------------------------------------------------------

/// `x_k = k/(a·(n0 − 1 + k))`; bounded, increasing, limit `1/a`.
pub fn negpow_x(a: &Rational, n0: u32, k: usize) -> Rational {
    if k == 0 {
        return Rational::zero();
    }
    rat_int(k as i64) / (a * rat_int(i64::from(n0) - 1 + k as i64))
}

/// `x_k! = (k!/a^k)·(n0−1)!/(n0−1+k)!`, computed as the running product of
/// [`negpow_x`].
pub fn negpow_x_factorial(a: &Rational, n0: u32, k: usize) -> Rational {
    let mut acc = Rational::one();
    for j in 1..=k {
        acc *= negpow_x(a, n0, j);
    }
    acc
}

/// One recursion step: `x_{k+1} = (a·x_k·(n0−2) + 1)/(a·(n0 − a·x_k))`.
pub fn negpow_x_step(a: &Rational, n0: u32, xk: &Rational) -> Result<Rational, FamilyError> {
    let axk = a * xk;
    let denom = a * (rat_int(i64::from(n0)) - &axk);
    if denom.is_zero() {
        return Err(FamilyError::DegenerateRecursion);
    }
    Ok((axk * rat_int(i64::from(n0) - 2) + rat_int(1)) / denom)
}

/// Terminating hypergeometric sum
/// `p_k(η) = Σ_{j=0}^{min(k,n0)} C(n0,j)·(−1)^j·[(n0−1+k−j)!/(n0−1+k)!]·[k!/(k−j)!]·η^j`.
/// Scale-free: independent of `a`.
pub fn negpow_poly(n0: u32, k: usize) -> RatPoly {
    let n0 = n0 as usize;
    let jmax = k.min(n0);
    let mut coeffs = Vec::with_capacity(jmax + 1);
    let mut binom = Rational::one(); // C(n0, j)
    let mut fall_top = Rational::one(); // (n0−1+k−j)!/(n0−1+k)! = 1/∏_{i=0..j-1}(n0−1+k−i)
    let mut fall_k = Rational::one(); // k!/(k−j)! = ∏ falling
    for j in 0..=jmax {
        if j > 0 {
            binom = binom * rat_int((n0 - j + 1) as i64) / rat_int(j as i64);
            fall_top /= rat_int((n0 - 1 + k - (j - 1)) as i64);
            fall_k *= rat_int((k - (j - 1)) as i64);
        }
        let mut c = &binom * &fall_top * &fall_k;
        if j % 2 == 1 {
            c = -c;
        }
        coeffs.push(c);
    }
    RatPoly::new(coeffs)
}

pub fn negpow_x_f64(a: f64, n0: u32, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    k as f64 / (a * (f64::from(n0) - 1.0 + k as f64))
}

// ------------------------------------------------------------------
// 1/((1 − a1·t)(1 − a2·t))
// ------------------------------------------------------------------

/// `Σ_{i=0}^{k} a1^i·a2^{k−i}`, the `t^k` series coefficient.
pub fn twofactor_coeff(a1: &Rational, a2: &Rational, k: usize) -> Rational {
    let mut acc = Rational::zero();
    for i in 0..=k {
        acc += rat_pow(a1, i as i64) * rat_pow(a2, (k - i) as i64);
    }
    acc
}

/// Ratio form `x_k = Σ_{j=0}^{k−1} a1^j·a2^{k−1−j} / Σ_{i=0}^{k} a1^i·a2^{k−i}`,
/// limit `1/a2`. The q-bracket form `x_k = (1/a2)·[k]_q/[k+1]_q` with
/// `q = a1/a2` and `[n]_q = (q^n−1)/(q−1)` is equal and checked in tests.
pub fn twofactor_x(a1: &Rational, a2: &Rational, k: usize) -> Rational {
    if k == 0 {
        return Rational::zero();
    }
    twofactor_coeff(a1, a2, k - 1) / twofactor_coeff(a1, a2, k)
}

/// `x_k! = 1/Σ_{i=0}^{k} a1^i·a2^{k−i}`.
pub fn twofactor_x_factorial(a1: &Rational, a2: &Rational, k: usize) -> Rational {
    Rational::one() / twofactor_coeff(a1, a2, k)
}

/// q-analog of the integer `n`: `[n]_q = (q^n − 1)/(q − 1)`, `q ≠ 1`.
pub fn q_bracket(q: &Rational, n: usize) -> Rational {
    (rat_pow(q, n as i64) - rat_int(1)) / (q - rat_int(1))
}

/// The quadratic's middle coefficient for `k ≥ 2`:
/// `b = Σ_{i=0}^{k−2} a1^{i+1}·a2^{k−1−i} / Σ_{i=0}^{k} a1^i·a2^{k−i}`.
pub fn twofactor_b(a1: &Rational, a2: &Rational, k: usize) -> Rational {
    let mut num = Rational::zero();
    for i in 0..=(k - 2) {
        num += rat_pow(a1, (i + 1) as i64) * rat_pow(a2, (k - 1 - i) as i64);
    }
    num / twofactor_coeff(a1, a2, k)
}

/// `p_k(η) = 1 − (1+b)·η + b·η²` for `k ≥ 2`; degree stays ≤ 2 for every `k`.
pub fn twofactor_poly(a1: &Rational, a2: &Rational, k: usize) -> RatPoly {
    match k {
        0 => RatPoly::one(),
        1 => RatPoly::from_pairs(&[(1, 1), (-1, 1)]),
        _ => {
            let b = twofactor_b(a1, a2, k);
            RatPoly::new(vec![Rational::one(), -(Rational::one() + &b), b])
        }
    }
}

pub fn twofactor_x_f64(a1: f64, a2: f64, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let r = a1 / a2;
    (r.powi(k as i32) - 1.0) / (r.powi(k as i32 + 1) - 1.0) / a2
}

// ------------------------------------------------------------------
// q-geometric product
// ------------------------------------------------------------------

/// The factor list `a_k = (1−q)·q^k`, `k = 0..count`.
pub fn q_geometric_factors(q: &Rational, count: u32) -> Vec<Rational> {
    let one_minus = Rational::one() - q;
    (0..count).map(|k| &one_minus * rat_pow(q, i64::from(k))).collect()
}

/// Series at the given factor count, with the coefficient movement relative
/// to one fewer factor; the movement bounds how far each coefficient is from
/// settled as factors are added.
pub fn q_geometric_series_with_report(
    q: &Rational,
    factors: u32,
    order: usize,
) -> Result<(TruncSeries, Vec<Rational>), FamilyError> {
    let spec = FamilySpec::QGeometric { q: q.clone(), factors };
    let series = spec.series(order)?;
    let movement = if factors > 1 {
        let prev = FamilySpec::QGeometric { q: q.clone(), factors: factors - 1 }.series(order)?;
        series
            .coeffs()
            .iter()
            .zip(prev.coeffs())
            .map(|(a, b)| {
                let d = a - b;
                if d.is_negative() {
                    -d
                } else {
                    d
                }
            })
            .collect()
    } else {
        series.coeffs().to_vec()
    };
    Ok((series, movement))
}

// ------------------------------------------------------------------
// exp(t + a·t²/2) and Hermite polynomials
// ------------------------------------------------------------------

/// The `t^n` series coefficient `Σ_{m=0}^{⌊n/2⌋} (a/2)^m/(m!·(n−2m)!)`,
/// whose reciprocal is `x_n!`. With `a = p/q` the terms are accumulated as
/// integers over the common denominator `(2q)^{⌊n/2⌋}·n!`, so the whole sum
/// costs a single rational reduction.
pub fn gauss_coeff(a: &Rational, n: usize) -> Rational {
    use num_bigint::BigInt;
    let k_max = n / 2;
    let two_q: BigInt = a.denom() * 2;
    // n!/(m!(n−2m)!) stays integral; update by (n−2m+2)(n−2m+1)/m
    let mut falling = BigInt::from(1u32);
    let mut p_pow = BigInt::from(1u32);
    let mut q_pow = num_traits::pow::Pow::pow(&two_q, k_max);
    let denom = &q_pow * factorial_int(n);
    let mut sum = q_pow.clone();
    for m in 1..=k_max {
        falling = falling
            * BigInt::from((n - 2 * m + 2) as u64)
            * BigInt::from((n - 2 * m + 1) as u64)
            / BigInt::from(m as u64);
        p_pow *= a.numer();
        q_pow /= &two_q;
        sum += &falling * &p_pow * &q_pow;
    }
    Rational::new(sum, denom)
}

fn factorial_int(n: usize) -> num_bigint::BigInt {
    let mut acc = num_bigint::BigInt::from(1u32);
    for j in 2..=n {
        acc *= num_bigint::BigInt::from(j as u64);
    }
    acc
}

/// `x_n!` from the floor sum.
pub fn gauss_x_factorial(a: &Rational, n: usize) -> Rational {
    Rational::one() / gauss_coeff(a, n)
}

/// `x_n` as the ratio of consecutive floor sums.
pub fn gauss_x(a: &Rational, n: usize) -> Rational {
    if n == 0 {
        return Rational::zero();
    }
    gauss_coeff(a, n - 1) / gauss_coeff(a, n)
}

/// One recursion step `x_{n+1} = (n+1)/(1 + a·x_n)`.
pub fn gauss_x_step(a: &Rational, n: usize, xn: &Rational) -> Rational {
    rat_int(n as i64 + 1) / (Rational::one() + a * xn)
}

/// `x_n` by running the float recursion from `x_0 = 0`.
pub fn gauss_x_recursion_f64(a: f64, n: usize) -> f64 {
    let mut x = 0.0;
    for j in 0..n {
        x = (j as f64 + 1.0) / (1.0 + a * x);
    }
    x
}

/// `p_n(η) = x_n!·Σ_{j=0}^{⌊n/2⌋} (a/2)^j·(1+η)^j·(1−η)^{n−j}/(j!·(n−2j)!)`,
/// the polynomial route through the Hermite expansion with the half-integer
/// powers cancelled exactly.
pub fn gauss_poly(a: &Rational, n: usize) -> RatPoly {
    let half_a = a / rat_int(2);
    let one_minus = RatPoly::from_pairs(&[(1, 1), (-1, 1)]);
    let one_plus = RatPoly::from_pairs(&[(1, 1), (1, 1)]);
    let mut acc = RatPoly::zero();
    let mut m_fact = Rational::one();
    for j in 0..=(n / 2) {
        if j > 0 {
            m_fact *= rat_int(j as i64);
        }
        let mut scalar = rat_pow(&half_a, j as i64) / &m_fact;
        for i in 2..=(n - 2 * j) {
            scalar /= rat_int(i as i64);
        }
        let mut term = RatPoly::constant(scalar);
        for _ in 0..j {
            term = term.mul(&one_plus);
        }
        for _ in 0..(n - j) {
            term = term.mul(&one_minus);
        }
        acc = acc.add(&term);
    }
    acc.scale(&gauss_x_factorial(a, n))
}

/// Hermite polynomial by the three-term recurrence
/// `H_{n+1}(x) = 2x·H_n(x) − 2n·H_{n−1}(x)`, `H_0 = 1`, `H_1 = 2x`.
pub fn hermite(n: usize) -> RatPoly {
    let two_x = RatPoly::from_pairs(&[(0, 1), (2, 1)]);
    let mut prev = RatPoly::one();
    if n == 0 {
        return prev;
    }
    let mut cur = two_x.clone();
    for m in 1..n {
        let next = two_x.mul(&cur).sub(&prev.scale(&rat_int(2 * m as i64)));
        prev = cur;
        cur = next;
    }
    cur
}

/// Hermite polynomial by the explicit expansion
/// `H_n(x) = n!·Σ_{m=0}^{⌊n/2⌋} (−1)^m·(2x)^{n−2m}/(m!·(n−2m)!)`.
pub fn hermite_expansion(n: usize) -> RatPoly {
    let mut n_fact = Rational::one();
    for j in 2..=n {
        n_fact *= rat_int(j as i64);
    }
    let mut coeffs = vec![Rational::zero(); n + 1];
    let mut m_fact = Rational::one();
    for m in 0..=(n / 2) {
        if m > 0 {
            m_fact *= rat_int(m as i64);
        }
        let deg = n - 2 * m;
        let mut c = &n_fact * rat_pow(&rat_int(2), deg as i64) / &m_fact;
        for j in 2..=deg {
            c /= rat_int(j as i64);
        }
        if m % 2 == 1 {
            c = -c;
        }
        coeffs[deg] = c;
    }
    RatPoly::new(coeffs)
}

/// The `t^n` series coefficient of `exp(t + a·t²/2)` evaluated through exact
/// Hermite coefficients at the imaginary argument: only parities matching `n`
/// contribute, and the residual powers of `i` and `√(2a)` collapse to the
/// rational `(−1)^i·(−1)^{(n+i)/2}·a^{(n−i)/2}/2^{(n+i)/2}`.
pub fn gauss_coeff_hermite_route(a: &Rational, n: usize) -> Rational {
    let h = hermite(n);
    let mut acc = Rational::zero();
    for i in (n % 2..=n).step_by(2) {
        let c = h.coeff(i);
        if c.is_zero() {
            continue;
        }
        let mut term = c * rat_pow(a, ((n - i) / 2) as i64)
            / rat_pow(&rat_int(2), ((n + i) / 2) as i64);
        let sign_flips = i + (n + i) / 2;
        if sign_flips % 2 == 1 {
            term = -term;
        }
        acc += term;
    }
    let mut n_fact = Rational::one();
    for j in 2..=n {
        n_fact *= rat_int(j as i64);
    }
    acc / n_fact
}
