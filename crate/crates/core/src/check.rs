//! Named identity checks with their residuals.

use std::fmt;

use crate::cartan::VectorField;
use crate::graded::GradedPolynomial;

#[derive(Clone, PartialEq, Eq)]
pub enum Residual {
    Polynomial(GradedPolynomial),
    Field(VectorField),
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        match self {
            Residual::Polynomial(p) => p.is_zero(),
            Residual::Field(x) => x.is_zero(),
        }
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::Polynomial(p) => p.fmt(f),
            Residual::Field(x) => x.fmt(f),
        }
    }
}

impl fmt::Debug for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<GradedPolynomial> for Residual {
    fn from(p: GradedPolynomial) -> Self {
        Residual::Polynomial(p)
    }
}

impl From<VectorField> for Residual {
    fn from(x: VectorField) -> Self {
        Residual::Field(x)
    }
}

/// One identity: passes when the residual (lhs − rhs) is exactly zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub residual: Residual,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: impl Into<Residual>) -> Self {
        Check {
            name: name.into(),
            residual: residual.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(Check::passed)
}
