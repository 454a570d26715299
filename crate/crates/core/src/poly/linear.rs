use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use super::{Poly, Rat, Var};

pub type Assignment = BTreeMap<Var, Rat>;

/// `poly ≤ 0`, `poly < 0` or `poly = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Lt,
    Eq,
}

impl Relation {
    pub fn holds(self, value: &Rat) -> bool {
        match self {
            Relation::Le => !value.is_positive(),
            Relation::Lt => value.is_negative(),
            Relation::Eq => value.is_zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("constraint is not linear: {0}")]
    NotLinear(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinConstraint {
    poly: Poly,
    rel: Relation,
}

impl LinConstraint {
    pub fn new(poly: Poly, rel: Relation) -> Result<LinConstraint, LinearError> {
        if !poly.is_linear() {
            return Err(LinearError::NotLinear(poly.to_string()));
        }
        Ok(LinConstraint { poly, rel })
    }

    pub fn le(poly: Poly) -> Result<LinConstraint, LinearError> {
        LinConstraint::new(poly, Relation::Le)
    }

    pub fn lt(poly: Poly) -> Result<LinConstraint, LinearError> {
        LinConstraint::new(poly, Relation::Lt)
    }

    pub fn eq(poly: Poly) -> Result<LinConstraint, LinearError> {
        LinConstraint::new(poly, Relation::Eq)
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn relation(&self) -> Relation {
        self.rel
    }

    /// `None` when a variable is unassigned.
    pub fn satisfied_by(&self, a: &Assignment) -> Option<bool> {
        self.poly.eval(a).map(|v| self.rel.holds(&v))
    }
}

impl fmt::Display for LinConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.rel {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Eq => "=",
        };
        write!(f, "{} {op} 0", self.poly)
    }
}
