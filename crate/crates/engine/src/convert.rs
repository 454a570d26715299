use num_traits::{Signed, ToPrimitive};
use skepsis_core::cexpr::{parse_fullform, print_fullform, CExpr};
use skepsis_core::poly::{Poly, Var};

use crate::arith::{plus, power, times};
use crate::number::{as_number, number};
use crate::EngineError;

/// The polynomial variable standing for an atom or an opaque subterm.
pub fn var_of(e: &CExpr) -> Var {
    Var::new(print_fullform(e))
}

/// The expression a polynomial variable stands for.
pub fn expr_of_var(v: &Var) -> CExpr {
    parse_fullform(v.as_str()).unwrap_or_else(|_| CExpr::sym(v.as_str()))
}

/// Reads `Plus`/`Times`/`Power` (natural exponents) over numbers. Any
/// other subterm is an opaque variable; a non-natural exponent is an error.
pub fn to_poly(e: &CExpr) -> Result<Poly, EngineError> {
    if let Some(r) = as_number(e) {
        return Ok(Poly::constant(r));
    }
    let not_poly = || EngineError::NotPolynomial(print_fullform(e));
    match (e.head_sym(), e.args()) {
        (Some("Plus"), args) => args.iter().try_fold(Poly::zero(), |acc, a| Ok(acc.add(&to_poly(a)?))),
        (Some("Times"), args) => args.iter().try_fold(Poly::int(1), |acc, a| Ok(acc.mul(&to_poly(a)?))),
        (Some("Subtract"), [a, b]) => Ok(to_poly(a)?.sub(&to_poly(b)?)),
        (Some("Minus"), [a]) => Ok(to_poly(a)?.neg()),
        (Some("Divide"), [a, b]) => match as_number(b) {
            Some(d) if !num_traits::Zero::is_zero(&d) => Ok(to_poly(a)?.scale(&d.recip())),
            _ => Err(not_poly()),
        },
        (Some("Power"), [b, x]) => match as_number(x) {
            Some(n) if n.is_integer() && !n.is_negative() => {
                let n = n.to_integer().to_u32().ok_or_else(not_poly)?;
                Ok(to_poly(b)?.pow(n))
            }
            _ => Err(not_poly()),
        },
        _ => Ok(Poly::var(var_of(e))),
    }
}

pub fn from_poly(p: &Poly) -> CExpr {
    let terms: Vec<CExpr> = p
        .terms()
        .map(|(m, c)| {
            let mut factors = vec![number(c)];
            factors.extend(m.iter().map(|(v, e)| power(&expr_of_var(v), &CExpr::int(*e))));
            times(&factors)
        })
        .collect();
    plus(&terms)
}

/// Renders a factorization as a canonical product.
pub fn from_factors(factors: &[(Poly, u32)]) -> CExpr {
    let parts: Vec<CExpr> = factors
        .iter()
        .map(|(f, m)| match f.as_constant() {
            Some(c) => number(&num_traits::pow(c, *m as usize)),
            None => power(&from_poly(f), &CExpr::int(*m)),
        })
        .collect();
    times(&parts)
}
