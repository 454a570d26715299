use std::fmt;

use num_traits::{One, Signed};
use skepsis_core::kexpr::{print_kexpr, KExpr};
use skepsis_core::poly::{Assignment, Rat};

/// Evidence for a claim, carrying exactly what its checker consumes.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    RingEq { lhs: KExpr, rhs: KExpr },
    FarkasWitness { hyps: Vec<KExpr>, coeffs: Vec<Rat> },
    SolutionWitness { system: Vec<KExpr>, assignment: Assignment },
    Counterexample { assignment: Assignment },
    TrustedAxiom { claim: KExpr, provenance: String },
    ApproxBound { target: KExpr, lower: Rat, upper: Rat },
}

/// A certificate that passed its checker. Only the checkers in this crate
/// can make one, so the ledger's verified entries all come from a check.
#[derive(Debug, Clone, PartialEq)]
pub struct Verified(Certificate);

impl Verified {
    pub(crate) fn new(c: Certificate) -> Verified {
        Verified(c)
    }

    pub fn certificate(&self) -> &Certificate {
        &self.0
    }

    pub fn into_certificate(self) -> Certificate {
        self.0
    }
}

/// `p`, or `p / q`, the usual way to write rationals.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{} / {}", r.numer(), r.denom())
    }
}

pub fn fmt_assignment(a: &Assignment) -> String {
    let parts: Vec<String> = a.iter().map(|(v, x)| format!("{v} := {}", fmt_rat(x))).collect();
    parts.join(", ")
}

fn join(es: &[KExpr]) -> String {
    es.iter().map(print_kexpr).collect::<Vec<_>>().join(", ")
}

/// Wraps a printed operand of a bound when it would otherwise bind loosely.
fn bound_operand(r: &Rat) -> String {
    let s = fmt_rat(r);
    if r.is_negative() && !r.denom().is_one() {
        format!("({s})")
    } else {
        s
    }
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::RingEq { .. } => "ring_eq",
            Certificate::FarkasWitness { .. } => "farkas",
            Certificate::SolutionWitness { .. } => "solution",
            Certificate::Counterexample { .. } => "counterexample",
            Certificate::TrustedAxiom { .. } => "axiom",
            Certificate::ApproxBound { .. } => "approx",
        }
    }

    /// The claim in surface syntax.
    pub fn claim(&self) -> String {
        match self {
            Certificate::RingEq { lhs, rhs } => format!("{} = {}", print_kexpr(lhs), print_kexpr(rhs)),
            Certificate::FarkasWitness { hyps, .. } => format!("{} ⊢ false", join(hyps)),
            Certificate::SolutionWitness { system, assignment } => {
                format!("{} at {}", join(system), fmt_assignment(assignment))
            }
            Certificate::Counterexample { assignment } => format!("counterexample {}", fmt_assignment(assignment)),
            Certificate::TrustedAxiom { claim, .. } => print_kexpr(claim),
            Certificate::ApproxBound { target, lower, upper } => {
                let t = print_kexpr(target);
                if lower == upper {
                    format!("{t} = {}", bound_operand(lower))
                } else {
                    format!("{} < {t} < {}", bound_operand(lower), bound_operand(upper))
                }
            }
        }
    }

    /// Where the evidence came from, for the ledger.
    pub fn provenance(&self) -> String {
        match self {
            Certificate::RingEq { .. } => "polynomial normal forms agree".into(),
            Certificate::FarkasWitness { coeffs, .. } => {
                format!("coefficients [{}]", coeffs.iter().map(fmt_rat).collect::<Vec<_>>().join(", "))
            }
            Certificate::SolutionWitness { .. } => "exact substitution".into(),
            Certificate::Counterexample { .. } => "satisfies hypotheses and negated goal".into(),
            Certificate::TrustedAxiom { provenance, .. } => provenance.clone(),
            Certificate::ApproxBound { .. } => "numeric estimate".into(),
        }
    }

    /// Trusting this would make every statement provable.
    pub fn is_absurd(&self) -> bool {
        matches!(self, Certificate::TrustedAxiom { claim, .. } if claim.is_const_named("false"))
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.kind(), self.claim())
    }
}
