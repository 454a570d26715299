use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use skepsis_core::cexpr::CExpr;

/// The exact value of a numeric atom: an integer, `Rational[p, q]`, or a
/// decimal (read exactly).
pub fn as_number(e: &CExpr) -> Option<BigRational> {
    match e {
        CExpr::Int(n) => Some(BigRational::from_integer(n.clone())),
        CExpr::Real(r) => Some(r.to_rational()),
        _ => match (e.head_sym(), e.args()) {
            (Some("Rational"), [CExpr::Int(p), CExpr::Int(q)]) if !q.is_zero() => {
                Some(BigRational::new(p.clone(), q.clone()))
            }
            _ => None,
        },
    }
}

/// Canonical numeric atom: an integer when possible, else `Rational[p, q]`.
pub fn number(r: &BigRational) -> CExpr {
    if r.is_integer() {
        CExpr::Int(r.to_integer())
    } else {
        CExpr::rational(r)
    }
}

/// `r^(1/k)` if it is rational.
pub fn rational_root(r: &BigRational, k: u32) -> Option<BigRational> {
    if k == 0 {
        return None;
    }
    if r.is_negative() {
        return (k % 2 == 1).then(|| rational_root(&-r, k).map(|x| -x)).flatten();
    }
    let exact = |n: &BigInt| {
        let root = n.nth_root(k);
        (num_traits::pow(root.clone(), k as usize) == *n).then_some(root)
    };
    Some(BigRational::new(exact(r.numer())?, exact(r.denom())?))
}

/// `base^exp` for an integer exponent; `None` for `0^negative`.
pub fn rational_pow(base: &BigRational, exp: &BigInt) -> Option<BigRational> {
    let e = exp.abs().to_usize()?;
    if exp.is_negative() {
        if base.is_zero() {
            return None;
        }
        Some(num_traits::pow(base.recip(), e))
    } else if e == 0 {
        Some(BigRational::one())
    } else {
        Some(num_traits::pow(base.clone(), e))
    }
}
