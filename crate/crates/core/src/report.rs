//! Pass/fail reports for class membership and exact identity checks.
//!
//! Membership in the coefficient classes is only ever certified up to the
//! truncation order, so every report records how far it looked and, on
//! failure, the first offending index with the violated condition.

use crate::rational::Rational;
use serde::Serialize;
use std::fmt;

/// The three coefficient classes a series can be tested against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SigmaClass {
    /// Zero constant term, positive linear term, nonnegative tail.
    Sigma0,
    /// Unit constant term, strictly positive tail.
    Sigma,
    /// Members of Sigma whose logarithm lies in Sigma0; exactly the
    /// generating functions of complete-statistical-type sequences.
    SigmaPlus,
}

impl fmt::Display for SigmaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigmaClass::Sigma0 => write!(f, "Sigma0"),
            SigmaClass::Sigma => write!(f, "Sigma"),
            SigmaClass::SigmaPlus => write!(f, "SigmaPlus"),
        }
    }
}

/// First coefficient that broke a class condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub index: usize,
    #[serde(with = "crate::rational::rat_string")]
    pub value: Rational,
    pub condition: &'static str,
}

/// Outcome of a class check, certified for coefficients `0..=checked_up_to`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub class: SigmaClass,
    pub checked_up_to: usize,
    pub violation: Option<Violation>,
}

impl ClassReport {
    pub fn pass(class: SigmaClass, checked_up_to: usize) -> Self {
        ClassReport { class, checked_up_to, violation: None }
    }

    pub fn fail(class: SigmaClass, checked_up_to: usize, violation: Violation) -> Self {
        ClassReport { class, checked_up_to, violation: Some(violation) }
    }

    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

impl fmt::Display for ClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            None => write!(f, "{}: pass up to order {}", self.class, self.checked_up_to),
            Some(v) => write!(
                f,
                "{}: fail at index {} (value {}, {})",
                self.class, v.index, v.value, v.condition
            ),
        }
    }
}

/// First location where an exact identity failed, with both sides rendered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub location: String,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of a coefficient-exact identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub name: &'static str,
    pub checked_up_to: usize,
    pub mismatch: Option<Mismatch>,
}

impl IdentityReport {
    pub fn pass(name: &'static str, checked_up_to: usize) -> Self {
        IdentityReport { name, checked_up_to, mismatch: None }
    }

    pub fn fail(name: &'static str, checked_up_to: usize, mismatch: Mismatch) -> Self {
        IdentityReport { name, checked_up_to, mismatch: Some(mismatch) }
    }

    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.mismatch {
            None => write!(f, "{}: pass up to {}", self.name, self.checked_up_to),
            Some(m) => write!(
                f,
                "{}: mismatch at {} (lhs {}, rhs {})",
                self.name, m.location, m.lhs, m.rhs
            ),
        }
    }
}
