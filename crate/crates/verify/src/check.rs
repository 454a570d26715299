//! Checkers. Each re-derives its verdict from the certificate alone with
//! exact rational arithmetic.

use num_traits::{Signed, Zero};
use skepsis_core::kexpr::KExpr;
use skepsis_core::poly::{Assignment, Poly, Rat, Relation};

use crate::certificate::{fmt_rat, Certificate, Verified};
use crate::translate::Walker;
use crate::VerifyError;

/// Equal as polynomials over one carrier.
pub fn check_ring_eq(lhs: &KExpr, rhs: &KExpr) -> Result<Verified, VerifyError> {
    let mut w = Walker::new();
    let p = w.poly(lhs)?;
    let q = w.poly(rhs)?;
    if p != q {
        return Err(VerifyError::UnableToSimplify { lhs: p.to_string(), rhs: q.to_string() });
    }
    Ok(Verified::new(Certificate::RingEq { lhs: lhs.clone(), rhs: rhs.clone() }))
}

/// `Σ cᵢ·pᵢ` is a constant contradicting the hypotheses `pᵢ rel 0`: every
/// inequality row has `cᵢ ≥ 0`, and the constant is positive, or zero with
/// positive weight on a strict row.
pub fn check_farkas(hyps: &[KExpr], coeffs: &[Rat]) -> Result<Verified, VerifyError> {
    if hyps.len() != coeffs.len() {
        return Err(VerifyError::BadCertificate {
            row: None,
            reason: format!("{} hypotheses but {} coefficients", hyps.len(), coeffs.len()),
        });
    }
    let mut w = Walker::new();
    let mut sum = Poly::zero();
    let mut strict_weight = false;
    for (i, (h, c)) in hyps.iter().zip(coeffs).enumerate() {
        let (p, rel) = w.relation(h)?;
        if !p.is_linear() {
            return Err(VerifyError::OutOfFragment(format!("hypothesis {i} is not linear")));
        }
        if rel != Relation::Eq && c.is_negative() {
            return Err(VerifyError::BadCertificate {
                row: Some(i),
                reason: format!("negative coefficient {} on an inequality", fmt_rat(c)),
            });
        }
        if rel == Relation::Lt && c.is_positive() {
            strict_weight = true;
        }
        sum = sum.add(&p.scale(c));
    }
    let Some(q) = sum.as_constant() else {
        return Err(VerifyError::BadCertificate { row: None, reason: format!("sum {sum} is not constant") });
    };
    if !(q.is_positive() || (q.is_zero() && strict_weight)) {
        return Err(VerifyError::BadCertificate {
            row: None,
            reason: format!("sum {} is not positive", fmt_rat(&q)),
        });
    }
    Ok(Verified::new(Certificate::FarkasWitness { hyps: hyps.to_vec(), coeffs: coeffs.to_vec() }))
}

/// The value of `Σ cᵢ·pᵢ` for a certificate that passed [`check_farkas`].
pub fn farkas_sum(hyps: &[KExpr], coeffs: &[Rat]) -> Result<Rat, VerifyError> {
    let mut w = Walker::new();
    let mut sum = Poly::zero();
    for (h, c) in hyps.iter().zip(coeffs) {
        sum = sum.add(&w.relation(h)?.0.scale(c));
    }
    sum.as_constant().ok_or_else(|| VerifyError::BadCertificate { row: None, reason: format!("sum {sum} is not constant") })
}

/// Every equation holds exactly under `assignment`.
pub fn check_solution(system: &[KExpr], assignment: &Assignment) -> Result<Verified, VerifyError> {
    let mut w = Walker::new();
    for (i, eq) in system.iter().enumerate() {
        let (p, rel) = w.relation(eq)?;
        if rel != Relation::Eq {
            return Err(VerifyError::OutOfFragment(format!("equation {i} is not an equation")));
        }
        let residue = p.subst_all(assignment);
        match residue.as_constant() {
            Some(r) if r.is_zero() => {}
            Some(r) => return Err(VerifyError::ResidueNonZero { equation: i, residue: r }),
            None => {
                let missing: Vec<String> = residue.vars().iter().map(|v| v.to_string()).collect();
                return Err(VerifyError::Unassigned(missing.join(", ")));
            }
        }
    }
    Ok(Verified::new(Certificate::SolutionWitness { system: system.to_vec(), assignment: assignment.clone() }))
}
