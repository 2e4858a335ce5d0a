//! The coefficient classes of admissible generating functions, and the
//! closed builder algebra for their logarithms.
//!
//! `Sigma0` collects series with zero constant term, positive linear term and
//! nonnegative tail; these are exactly the logarithms of the generating
//! functions whose deformed binomial tables stay nonnegative. [`Sigma0Expr`]
//! is a small AST of atoms and combinators that land in `Sigma0` by
//! construction, so evaluating any well-formed tree yields a certified
//! member. Membership of a raw series in `SigmaPlus` is decided through its
//! logarithm, which turns the definition's sweep over the win parameter into
//! a per-coefficient sign test.

use crate::rational::{rat_int, Rational};
use crate::report::{ClassReport, SigmaClass, Violation};
use crate::series::{SeriesError, TruncSeries};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SigmaError {
    #[error("invalid {node}.{param} = {value}: must be {requirement}")]
    InvalidParameter {
        node: &'static str,
        param: &'static str,
        value: String,
        requirement: &'static str,
    },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("constant term must be 1 to test membership, got {0}")]
    ConstantNotOne(Rational),
    #[error("normalize requires a positive linear coefficient, got {0}")]
    NonPositiveLinear(Rational),
}

/// Builder AST for functions with zero constant term, positive linear term
/// and nonnegative higher coefficients.
///
/// Atoms are the elementary members `e^{at}−1`, `−a·ln(1−bt)`,
/// `a·ln((1+αbt)/(1−bt))` and explicit coefficient lists; combinators are the
/// closure operations (sums, the `F(t)−F(ηt)` / `F(t)+F(−ηt)` differences,
/// `(a+F)·G`, composition, and extension by a nonnegative tail with zero
/// linear term). The JSON encoding is a tagged union on `"kind"` with
/// rationals as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Sigma0Expr {
    /// `e^{at} − 1`, `a > 0`.
    ExpM1 {
        #[serde(with = "crate::rational::rat_string")]
        a: Rational,
    },
    /// `−a·ln(1 − bt)`, `a, b > 0`.
    NegLog {
        #[serde(with = "crate::rational::rat_string")]
        a: Rational,
        #[serde(with = "crate::rational::rat_string")]
        b: Rational,
    },
    /// `a·ln((1 + αbt)/(1 − bt))`, `a, b > 0`, `α ∈ [0, 1]`.
    LogRatio {
        #[serde(with = "crate::rational::rat_string")]
        a: Rational,
        #[serde(with = "crate::rational::rat_string")]
        b: Rational,
        #[serde(with = "crate::rational::rat_string")]
        alpha: Rational,
    },
    /// Explicit coefficients `f_0 = 0`, `f_1 > 0`, `f_k ≥ 0`.
    MonomialSum {
        #[serde(with = "crate::rational::rat_vec_string")]
        coeffs: Vec<Rational>,
    },
    Add {
        lhs: Box<Sigma0Expr>,
        rhs: Box<Sigma0Expr>,
    },
    /// `F(t) − F(ηt)`, `η ∈ [−1, 1)`.
    EtaDiff {
        inner: Box<Sigma0Expr>,
        #[serde(with = "crate::rational::rat_string")]
        eta: Rational,
    },
    /// `F(t) + F(−ηt)`, `η ∈ [−1, 1)`.
    EtaSum {
        inner: Box<Sigma0Expr>,
        #[serde(with = "crate::rational::rat_string")]
        eta: Rational,
    },
    /// `(a + F)·G`, `a > 0`.
    ShiftMul {
        #[serde(with = "crate::rational::rat_string")]
        a: Rational,
        lhs: Box<Sigma0Expr>,
        rhs: Box<Sigma0Expr>,
    },
    /// `F ∘ G`.
    Compose {
        outer: Box<Sigma0Expr>,
        inner: Box<Sigma0Expr>,
    },
    /// `F + H` where `H` has `h_0 = h_1 = 0` and `h_k ≥ 0`. `H` alone is not
    /// a member (its linear term vanishes), so it is carried as a raw
    /// coefficient list rather than as a `MonomialSum` atom.
    Extend {
        inner: Box<Sigma0Expr>,
        #[serde(with = "crate::rational::rat_vec_string")]
        h: Vec<Rational>,
    },
}

fn invalid(
    node: &'static str,
    param: &'static str,
    value: &Rational,
    requirement: &'static str,
) -> SigmaError {
    SigmaError::InvalidParameter { node, param, value: value.to_string(), requirement }
}

fn require_positive(node: &'static str, param: &'static str, v: &Rational) -> Result<(), SigmaError> {
    if v.is_positive() {
        Ok(())
    } else {
        Err(invalid(node, param, v, "> 0"))
    }
}

fn require_unit_interval(
    node: &'static str,
    param: &'static str,
    v: &Rational,
) -> Result<(), SigmaError> {
    if !v.is_negative() && *v <= rat_int(1) {
        Ok(())
    } else {
        Err(invalid(node, param, v, "in [0, 1]"))
    }
}

fn require_deform_range(
    node: &'static str,
    param: &'static str,
    v: &Rational,
) -> Result<(), SigmaError> {
    if *v >= rat_int(-1) && *v < rat_int(1) {
        Ok(())
    } else {
        Err(invalid(node, param, v, "in [-1, 1)"))
    }
}

impl Sigma0Expr {
    pub fn exp_m1(a: Rational) -> Result<Self, SigmaError> {
        let e = Sigma0Expr::ExpM1 { a };
        e.validate()?;
        Ok(e)
    }

    pub fn neg_log(a: Rational, b: Rational) -> Result<Self, SigmaError> {
        let e = Sigma0Expr::NegLog { a, b };
        e.validate()?;
        Ok(e)
    }

    pub fn log_ratio(a: Rational, b: Rational, alpha: Rational) -> Result<Self, SigmaError> {
        let e = Sigma0Expr::LogRatio { a, b, alpha };
        e.validate()?;
        Ok(e)
    }

    pub fn monomial_sum(coeffs: Vec<Rational>) -> Result<Self, SigmaError> {
        let e = Sigma0Expr::MonomialSum { coeffs };
        e.validate()?;
        Ok(e)
    }

    pub fn add(lhs: Sigma0Expr, rhs: Sigma0Expr) -> Self {
        Sigma0Expr::Add { lhs: Box::new(lhs), rhs: Box::new(rhs) }
    }

    pub fn eta_diff(inner: Sigma0Expr, eta: Rational) -> Result<Self, SigmaError> {
        let e = Sigma0Expr::EtaDiff { inner: Box::new(inner), eta };
        e.validate()?;
        Ok(e)
    }

    pub fn eta_sum(inner: Sigma0Expr, eta: Rational) -> Result<Self, SigmaError> {
        let e = Sigma0Expr::EtaSum { inner: Box::new(inner), eta };
        e.validate()?;
        Ok(e)
    }

    pub fn shift_mul(a: Rational, lhs: Sigma0Expr, rhs: Sigma0Expr) -> Result<Self, SigmaError> {
        let e = Sigma0Expr::ShiftMul { a, lhs: Box::new(lhs), rhs: Box::new(rhs) };
        e.validate()?;
        Ok(e)
    }

    pub fn compose(outer: Sigma0Expr, inner: Sigma0Expr) -> Self {
        Sigma0Expr::Compose { outer: Box::new(outer), inner: Box::new(inner) }
    }

    /// Check every parameter constraint in the tree.
    pub fn validate(&self) -> Result<(), SigmaError> {
        match self {
            Sigma0Expr::ExpM1 { a } => require_positive("ExpM1", "a", a),
            Sigma0Expr::NegLog { a, b } => {
                require_positive("NegLog", "a", a)?;
                require_positive("NegLog", "b", b)
            }
            Sigma0Expr::LogRatio { a, b, alpha } => {
                require_positive("LogRatio", "a", a)?;
                require_positive("LogRatio", "b", b)?;
                require_unit_interval("LogRatio", "alpha", alpha)
            }
            Sigma0Expr::MonomialSum { coeffs } => {
                if coeffs.first().is_some_and(|f0| !f0.is_zero()) {
                    return Err(invalid("MonomialSum", "coeffs[0]", &coeffs[0], "= 0"));
                }
                match coeffs.get(1) {
                    Some(f1) if f1.is_positive() => {}
                    Some(f1) => return Err(invalid("MonomialSum", "coeffs[1]", f1, "> 0")),
                    None => {
                        return Err(invalid("MonomialSum", "coeffs[1]", &Rational::zero(), "> 0"))
                    }
                }
                for (k, f) in coeffs.iter().enumerate().skip(2) {
                    if f.is_negative() {
                        let _ = k;
                        return Err(invalid("MonomialSum", "coeffs[k>=2]", f, ">= 0"));
                    }
                }
                Ok(())
            }
            Sigma0Expr::Add { lhs, rhs } => {
                lhs.validate()?;
                rhs.validate()
            }
            Sigma0Expr::EtaDiff { inner, eta } => {
                require_deform_range("EtaDiff", "eta", eta)?;
                inner.validate()
            }
            Sigma0Expr::EtaSum { inner, eta } => {
                require_deform_range("EtaSum", "eta", eta)?;
                inner.validate()
            }
            Sigma0Expr::ShiftMul { a, lhs, rhs } => {
                require_positive("ShiftMul", "a", a)?;
                lhs.validate()?;
                rhs.validate()
            }
            Sigma0Expr::Compose { outer, inner } => {
                outer.validate()?;
                inner.validate()
            }
            Sigma0Expr::Extend { inner, h } => {
                if h.first().is_some_and(|h0| !h0.is_zero()) {
                    return Err(invalid("Extend", "h[0]", &h[0], "= 0"));
                }
                if h.get(1).is_some_and(|h1| !h1.is_zero()) {
                    return Err(invalid("Extend", "h[1]", &h[1], "= 0"));
                }
                for hk in h.iter().skip(2) {
                    if hk.is_negative() {
                        return Err(invalid("Extend", "h[k>=2]", hk, ">= 0"));
                    }
                }
                inner.validate()
            }
        }
    }

    /// Evaluate the tree as a truncated series. The result passes
    /// [`check_sigma0`] whenever the tree validates.
    pub fn eval(&self, order: usize) -> Result<TruncSeries, SigmaError> {
        self.validate()?;
        self.eval_unchecked(order)
    }

    fn eval_unchecked(&self, order: usize) -> Result<TruncSeries, SigmaError> {
        Ok(match self {
            Sigma0Expr::ExpM1 { a } => {
                let at = TruncSeries::identity(order).scale(a);
                at.exp()?.shift_constant(&rat_int(-1))
            }
            Sigma0Expr::NegLog { a, b } => {
                let one_minus_bt = TruncSeries::one(order).sub(&TruncSeries::identity(order).scale(b))?;
                one_minus_bt.log()?.scale(&-a)
            }
            Sigma0Expr::LogRatio { a, b, alpha } => {
                let t = TruncSeries::identity(order);
                let num = TruncSeries::one(order).add(&t.scale(&(alpha * b)))?;
                let den = TruncSeries::one(order).sub(&t.scale(b))?;
                num.log()?.sub(&den.log()?)?.scale(a)
            }
            Sigma0Expr::MonomialSum { coeffs } => {
                let mut c = coeffs.clone();
                c.resize(order + 1, Rational::zero());
                c.truncate(order + 1);
                TruncSeries::from_coeffs(c)
            }
            Sigma0Expr::Add { lhs, rhs } => {
                lhs.eval_unchecked(order)?.add(&rhs.eval_unchecked(order)?)?
            }
            Sigma0Expr::EtaDiff { inner, eta } => {
                let f = inner.eval_unchecked(order)?;
                f.sub(&f.scale_argument(eta))?
            }
            Sigma0Expr::EtaSum { inner, eta } => {
                let f = inner.eval_unchecked(order)?;
                let minus_eta = -eta;
                f.add(&f.scale_argument(&minus_eta))?
            }
            Sigma0Expr::ShiftMul { a, lhs, rhs } => {
                let f = lhs.eval_unchecked(order)?.shift_constant(a);
                f.mul(&rhs.eval_unchecked(order)?)?
            }
            Sigma0Expr::Compose { outer, inner } => {
                let g = inner.eval_unchecked(order)?;
                outer.eval_unchecked(order)?.compose(&g)?
            }
            Sigma0Expr::Extend { inner, h } => {
                let mut c = h.clone();
                c.resize(order + 1, Rational::zero());
                c.truncate(order + 1);
                inner.eval_unchecked(order)?.add(&TruncSeries::from_coeffs(c))?
            }
        })
    }
}

/// Extend `f` by a perturbation with `h_0 = h_1 = 0` and `h_k ≥ 0`; the sum
/// stays in the class and the induced generating function stays normalized.
pub fn extend_by_h(f: Sigma0Expr, h: Vec<Rational>) -> Result<Sigma0Expr, SigmaError> {
    let e = Sigma0Expr::Extend { inner: Box::new(f), h };
    e.validate()?;
    Ok(e)
}

/// Coefficient test: `f_0 = 0`, `f_1 > 0`, `f_n ≥ 0` for `2 ≤ n ≤ T`.
pub fn check_sigma0(f: &TruncSeries) -> ClassReport {
    let t = f.order();
    if !f.coeff(0).is_zero() {
        return ClassReport::fail(
            SigmaClass::Sigma0,
            t,
            Violation { index: 0, value: f.coeff(0).clone(), condition: "constant term must be 0" },
        );
    }
    let f1 = if t >= 1 { f.coeff(1).clone() } else { Rational::zero() };
    if !f1.is_positive() {
        return ClassReport::fail(
            SigmaClass::Sigma0,
            t,
            Violation { index: 1, value: f1, condition: "linear coefficient must be > 0" },
        );
    }
    for k in 2..=t {
        if f.coeff(k).is_negative() {
            return ClassReport::fail(
                SigmaClass::Sigma0,
                t,
                Violation {
                    index: k,
                    value: f.coeff(k).clone(),
                    condition: "coefficient must be >= 0",
                },
            );
        }
    }
    ClassReport::pass(SigmaClass::Sigma0, t)
}

/// Coefficient test: `a_0 = 1`, `a_n > 0` for `1 ≤ n ≤ T`.
pub fn check_sigma(n: &TruncSeries) -> ClassReport {
    let t = n.order();
    if !n.coeff(0).is_one() {
        return ClassReport::fail(
            SigmaClass::Sigma,
            t,
            Violation { index: 0, value: n.coeff(0).clone(), condition: "constant term must be 1" },
        );
    }
    for k in 1..=t {
        if !n.coeff(k).is_positive() {
            return ClassReport::fail(
                SigmaClass::Sigma,
                t,
                Violation {
                    index: k,
                    value: n.coeff(k).clone(),
                    condition: "coefficient must be > 0",
                },
            );
        }
    }
    ClassReport::pass(SigmaClass::Sigma, t)
}

/// Membership test through the logarithm: a series with unit constant term is
/// accepted exactly when `log n` passes [`check_sigma0`] up to the truncation
/// order. This replaces the defining sweep over win parameters in `[0, 1)`
/// with a single per-coefficient criterion.
pub fn check_sigma_plus(n: &TruncSeries) -> Result<ClassReport, SigmaError> {
    if !n.coeff(0).is_one() {
        return Err(SigmaError::ConstantNotOne(n.coeff(0).clone()));
    }
    let log = n.log()?;
    let inner = check_sigma0(&log);
    let t = n.order();
    Ok(match inner.violation {
        None => ClassReport::pass(SigmaClass::SigmaPlus, t),
        Some(v) => {
            let condition = match v.condition {
                "constant term must be 0" => "log constant term must be 0",
                "linear coefficient must be > 0" => "log linear coefficient must be > 0",
                _ => "log coefficient must be >= 0",
            };
            ClassReport::fail(
                SigmaClass::SigmaPlus,
                t,
                Violation { index: v.index, value: v.value, condition },
            )
        }
    })
}

/// The closed forms that send a class member `F` into an admissible
/// generating function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SigmaPlusForm {
    /// `e^F`
    ExpF,
    /// `exp(e^F − 1)`
    ExpExpM1,
    /// `(1 − bF)^{−a}`, `a, b > 0`
    InvPow { a: Rational, b: Rational },
    /// `(1 + αbF)^a (1 − bF)^{−a}`, `a, b > 0`, `α ∈ [0, 1]`
    RatioPow { a: Rational, b: Rational, alpha: Rational },
    /// `(1 + b − b·e^F)^{−a}`, `a, b > 0`
    GeomExp { a: Rational, b: Rational },
}

/// Build one of the closed-form generating functions from a class member.
/// The result passes [`check_sigma_plus`].
pub fn build_sigma_plus(
    f: &Sigma0Expr,
    form: &SigmaPlusForm,
    order: usize,
) -> Result<TruncSeries, SigmaError> {
    let fs = f.eval(order)?;
    Ok(match form {
        SigmaPlusForm::ExpF => fs.exp()?,
        SigmaPlusForm::ExpExpM1 => fs.exp()?.shift_constant(&rat_int(-1)).exp()?,
        SigmaPlusForm::InvPow { a, b } => {
            require_positive("InvPow", "a", a)?;
            require_positive("InvPow", "b", b)?;
            let base = TruncSeries::one(order).sub(&fs.scale(b))?;
            base.pow_rational(&-a)?
        }
        SigmaPlusForm::RatioPow { a, b, alpha } => {
            require_positive("RatioPow", "a", a)?;
            require_positive("RatioPow", "b", b)?;
            require_unit_interval("RatioPow", "alpha", alpha)?;
            let num = TruncSeries::one(order).add(&fs.scale(&(alpha * b)))?;
            let den = TruncSeries::one(order).sub(&fs.scale(b))?;
            num.pow_rational(a)?.mul(&den.pow_rational(&-a)?)?
        }
        SigmaPlusForm::GeomExp { a, b } => {
            require_positive("GeomExp", "a", a)?;
            require_positive("GeomExp", "b", b)?;
            let base = TruncSeries::constant(Rational::one() + b, order)
                .sub(&fs.exp()?.scale(b))?;
            base.pow_rational(&-a)?
        }
    })
}

/// Finite product `∏_k (1 + α a_k t)/(1 − a_k t)` with `a_k > 0`,
/// `α ∈ [0, 1]`; the result passes [`check_sigma_plus`]. Factors are
/// truncated to the given list, so the caller is responsible for supplying
/// enough of a summable family for the low-order coefficients to settle.
pub fn product_family(
    factors: &[Rational],
    alpha: &Rational,
    order: usize,
) -> Result<TruncSeries, SigmaError> {
    require_unit_interval("product family", "alpha", alpha)?;
    let mut acc = TruncSeries::one(order);
    for ak in factors {
        require_positive("product family", "a_k", ak)?;
        let mut factor = TruncSeries::geometric(ak, order);
        if !alpha.is_zero() {
            let num = TruncSeries::one(order)
                .add(&TruncSeries::identity(order).scale(&(alpha * ak)))?;
            factor = num.mul(&factor)?;
        }
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}

/// Rescale the argument so the linear coefficient becomes 1 (equivalently
/// `x_1 = 1`). Idempotent; requires `a_1 > 0`.
pub fn normalize(n: &TruncSeries) -> Result<TruncSeries, SigmaError> {
    if n.order() < 1 || !n.coeff(1).is_positive() {
        let a1 = if n.order() >= 1 { n.coeff(1).clone() } else { Rational::zero() };
        return Err(SigmaError::NonPositiveLinear(a1));
    }
    Ok(n.scale_argument(&(Rational::one() / n.coeff(1))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn atom_series_match_taylor_expansions() {
        // e^t − 1
        let f = Sigma0Expr::exp_m1(rat_int(1)).unwrap();
        assert_eq!(f.eval(3).unwrap(), TruncSeries::from_pairs(&[(0, 1), (1, 1), (1, 2), (1, 6)]));
        // −ln(1−t) = t + t²/2 + t³/3
        let f = Sigma0Expr::neg_log(rat_int(1), rat_int(1)).unwrap();
        assert_eq!(f.eval(3).unwrap(), TruncSeries::from_pairs(&[(0, 1), (1, 1), (1, 2), (1, 3)]));
    }

    #[test]
    fn eta_diff_scales_coefficients_by_one_minus_eta_pow() {
        // F = t + t², η = 1/2 → (1−η)t + (1−η²)t² = t/2 + 3t²/4
        let f = Sigma0Expr::monomial_sum(vec![rat_int(0), rat_int(1), rat_int(1)]).unwrap();
        let d = Sigma0Expr::eta_diff(f, rat(1, 2)).unwrap();
        assert_eq!(d.eval(2).unwrap(), TruncSeries::from_pairs(&[(0, 1), (1, 2), (3, 4)]));
    }

    #[test]
    fn log_ratio_atom_passes_class_check() {
        let f = Sigma0Expr::log_ratio(rat(3, 2), rat(1, 3), rat(1, 2)).unwrap();
        let s = f.eval(12).unwrap();
        assert!(check_sigma0(&s).passed());
    }

    #[test]
    fn class_check_sigma0_examples() {
        let pass = TruncSeries::from_pairs(&[(0, 1), (1, 1), (0, 1), (5, 1)]);
        assert!(check_sigma0(&pass).passed());

        let neg_tail = TruncSeries::from_pairs(&[(0, 1), (1, 1), (-1, 2), (0, 1)]);
        let r = check_sigma0(&neg_tail);
        assert_eq!(r.violation.as_ref().unwrap().index, 2);

        let bad_const = TruncSeries::from_pairs(&[(1, 1), (1, 1), (0, 1), (0, 1)]);
        assert_eq!(check_sigma0(&bad_const).violation.unwrap().index, 0);
    }

    #[test]
    fn class_check_sigma_examples() {
        assert!(check_sigma(&TruncSeries::exp_t(6)).passed());
        let zero_coeff = TruncSeries::from_pairs(&[(1, 1), (1, 1), (0, 1), (1, 1)]);
        assert_eq!(check_sigma(&zero_coeff).violation.unwrap().index, 2);
        let negative = TruncSeries::from_pairs(&[(1, 1), (-1, 1), (1, 1)]);
        assert_eq!(check_sigma(&negative).violation.unwrap().index, 1);
    }

    #[test]
    fn sigma_plus_accepts_exponential_and_geometric() {
        assert!(check_sigma_plus(&TruncSeries::exp_t(16)).unwrap().passed());
        // (1 − t/2)^{-1}: log = −ln(1−t/2) has positive coefficients
        let geo = TruncSeries::geometric(&rat(1, 2), 16);
        assert!(check_sigma_plus(&geo).unwrap().passed());
    }

    #[test]
    fn sigma_plus_rejects_perturbed_exponential() {
        // e^t with a_4 bumped to 1/23 = 1/24 + 1/552: the log picks up
        // −1/552 at t^5 (first term of ln(1 + εt⁴e^{−t})).
        let mut coeffs = TruncSeries::exp_t(8).into_coeffs();
        coeffs[4] = rat(1, 23);
        let n = TruncSeries::from_coeffs(coeffs);
        let r = check_sigma_plus(&n).unwrap();
        let v = r.violation.expect("must fail");
        assert_eq!(v.index, 5);
        assert_eq!(v.value, rat(-1, 552));
    }

    #[test]
    fn sigma_plus_requires_unit_constant() {
        let n = TruncSeries::from_pairs(&[(2, 1), (1, 1)]);
        assert!(matches!(check_sigma_plus(&n), Err(SigmaError::ConstantNotOne(_))));
    }

    #[test]
    fn closed_forms_from_linear_member() {
        let t = Sigma0Expr::monomial_sum(vec![rat_int(0), rat_int(1)]).unwrap();
        // e^t
        let e = build_sigma_plus(&t, &SigmaPlusForm::ExpF, 5).unwrap();
        assert_eq!(e, TruncSeries::exp_t(5));
        // (1−t)^{-1} = geometric series
        let inv = build_sigma_plus(
            &t,
            &SigmaPlusForm::InvPow { a: rat_int(1), b: rat_int(1) },
            3,
        )
        .unwrap();
        assert_eq!(inv, TruncSeries::from_pairs(&[(1, 1), (1, 1), (1, 1), (1, 1)]));
        // exp(e^t−1): coefficients are Bell numbers over factorials
        let bell = build_sigma_plus(&t, &SigmaPlusForm::ExpExpM1, 3).unwrap();
        assert_eq!(bell, TruncSeries::from_pairs(&[(1, 1), (1, 1), (1, 1), (5, 6)]));
        for form in [
            SigmaPlusForm::ExpF,
            SigmaPlusForm::ExpExpM1,
            SigmaPlusForm::InvPow { a: rat(3, 2), b: rat(1, 2) },
            SigmaPlusForm::RatioPow { a: rat(3, 2), b: rat(1, 2), alpha: rat(1, 3) },
            SigmaPlusForm::GeomExp { a: rat(2, 1), b: rat(1, 4) },
        ] {
            let n = build_sigma_plus(&t, &form, 10).unwrap();
            assert!(check_sigma_plus(&n).unwrap().passed(), "form {form:?}");
        }
    }

    #[test]
    fn product_family_matches_closed_forms() {
        // n identical factors at α = 0 gives (1 − at)^{−n}
        let a = rat(1, 3);
        let n = product_family(&[a.clone(), a.clone(), a.clone()], &rat_int(0), 6).unwrap();
        let direct = TruncSeries::one(6)
            .sub(&TruncSeries::identity(6).scale(&a))
            .unwrap()
            .pow_rational(&rat_int(-3))
            .unwrap();
        assert_eq!(n, direct);
        // single factor, α = 1: (1+t)/(1−t) = 1 + 2t + 2t² + ...
        let n = product_family(&[rat_int(1)], &rat_int(1), 4).unwrap();
        assert_eq!(n, TruncSeries::from_pairs(&[(1, 1), (2, 1), (2, 1), (2, 1), (2, 1)]));
        assert!(product_family(&[rat_int(0)], &rat_int(0), 4).is_err());
    }

    #[test]
    fn extend_by_h_keeps_membership_and_normalization() {
        let t = Sigma0Expr::monomial_sum(vec![rat_int(0), rat_int(1)]).unwrap();
        let ext = extend_by_h(t.clone(), vec![rat_int(0), rat_int(0), rat_int(1)]).unwrap();
        let n = ext.eval(8).unwrap().exp().unwrap();
        assert!(check_sigma_plus(&n).unwrap().passed());
        assert_eq!(n.coeff(1), &rat_int(1));
        // all-zero h is the identity extension
        let same = extend_by_h(t.clone(), vec![]).unwrap();
        assert_eq!(same.eval(8).unwrap(), t.eval(8).unwrap());
        // h with a linear term is rejected
        assert!(extend_by_h(t, vec![rat_int(0), rat_int(1)]).is_err());
    }

    #[test]
    fn normalize_examples() {
        // e^{2t} → e^t
        let e2 = TruncSeries::identity(6).scale(&rat_int(2)).exp().unwrap();
        assert_eq!(normalize(&e2).unwrap(), TruncSeries::exp_t(6));
        // idempotent
        let n = normalize(&e2).unwrap();
        assert_eq!(normalize(&n).unwrap(), n);
        // (1−2t)^{-1} → geometric with ratio 1
        let g = TruncSeries::geometric(&rat_int(2), 3);
        assert_eq!(normalize(&g).unwrap(), TruncSeries::geometric(&rat_int(1), 3));
        assert!(normalize(&TruncSeries::one(3)).is_err());
    }

    #[test]
    fn json_round_trip_uses_tagged_kinds() {
        let expr = Sigma0Expr::eta_diff(
            Sigma0Expr::exp_m1(rat(3, 2)).unwrap(),
            rat(-1, 2),
        )
        .unwrap();
        let json = serde_json::to_string(&expr).unwrap();
        assert!(json.contains("\"kind\":\"EtaDiff\""));
        assert!(json.contains("\"a\":\"3/2\""));
        let back: Sigma0Expr = serde_json::from_str(&json).unwrap();
        assert_eq!(back, expr);
        let parsed: Sigma0Expr =
            serde_json::from_str(r#"{"kind":"ExpM1","a":"3/2"}"#).unwrap();
        assert_eq!(parsed, Sigma0Expr::ExpM1 { a: rat(3, 2) });
    }

    #[test]
    fn validation_rejects_out_of_range_parameters() {
        assert!(Sigma0Expr::exp_m1(rat_int(0)).is_err());
        assert!(Sigma0Expr::neg_log(rat_int(1), rat_int(-1)).is_err());
        assert!(Sigma0Expr::log_ratio(rat_int(1), rat_int(1), rat(3, 2)).is_err());
        assert!(Sigma0Expr::monomial_sum(vec![rat_int(1), rat_int(1)]).is_err());
        assert!(Sigma0Expr::monomial_sum(vec![rat_int(0), rat_int(1), rat_int(-1)]).is_err());
        let t = Sigma0Expr::monomial_sum(vec![rat_int(0), rat_int(1)]).unwrap();
        assert!(Sigma0Expr::eta_diff(t, rat_int(1)).is_err());
    }
}
