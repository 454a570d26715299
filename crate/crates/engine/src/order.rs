//! The canonical order used to sort the arguments of `Plus` and `Times`.
//!
//! Terms are compared as products of (base, exponent) factors, starting from
//! the greatest base, which gives the familiar `1 - 2 x + x^2` and
//! `x^4 + x^3 y + x^2 y^2 + x y^3 + y^4` layouts.

use std::cmp::Ordering;

use skepsis_core::cexpr::CExpr;
use skepsis_core::poly::natural_cmp;

use crate::number::as_number;

/// Total order on expressions: numbers, strings, symbols, then compounds.
pub fn expr_cmp(a: &CExpr, b: &CExpr) -> Ordering {
    fn rank(e: &CExpr) -> u8 {
        if as_number(e).is_some() {
            return 0;
        }
        match e {
            CExpr::Str(_) => 1,
            CExpr::Sym(_) => 2,
            _ => 3,
        }
    }
    rank(a).cmp(&rank(b)).then_with(|| match (a, b) {
        (CExpr::Str(x), CExpr::Str(y)) => x.cmp(y),
        (CExpr::Sym(x), CExpr::Sym(y)) => natural_cmp(x, y),
        (CExpr::App(h1, a1), CExpr::App(h2, a2)) if rank(a) == 3 => expr_cmp(h1, h2)
            .then_with(|| a1.len().cmp(&a2.len()))
            .then_with(|| a1.iter().zip(a2).map(|(x, y)| expr_cmp(x, y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)),
        _ => match (as_number(a), as_number(b)) {
            (Some(x), Some(y)) => x.cmp(&y).then_with(|| format!("{a:?}").cmp(&format!("{b:?}"))),
            _ => Ordering::Equal,
        },
    })
}

/// A factor as (base, exponent).
pub fn base_exp(e: &CExpr) -> (CExpr, CExpr) {
    match (e.head_sym(), e.args()) {
        (Some("Power"), [b, x]) => (b.clone(), x.clone()),
        _ => (e.clone(), CExpr::int(1)),
    }
}

fn factor_cmp(a: &(CExpr, CExpr), b: &(CExpr, CExpr)) -> Ordering {
    expr_cmp(&a.0, &b.0).then_with(|| expr_cmp(&a.1, &b.1))
}

/// The non-numeric factors of a term, sorted.
fn term_key(e: &CExpr) -> Vec<(CExpr, CExpr)> {
    let factors: Vec<&CExpr> = if e.is_call("Times") { e.args().iter().collect() } else { vec![e] };
    let mut key: Vec<_> = factors.into_iter().filter(|f| as_number(f).is_none()).map(base_exp).collect();
    key.sort_by(factor_cmp);
    key
}

/// Order of summands in `Plus`.
pub fn term_cmp(a: &CExpr, b: &CExpr) -> Ordering {
    match (as_number(a), as_number(b)) {
        (Some(x), Some(y)) => return x.cmp(&y),
        (Some(_), None) => return Ordering::Less,
        (None, Some(_)) => return Ordering::Greater,
        _ => {}
    }
    let (ka, kb) = (term_key(a), term_key(b));
    for (x, y) in ka.iter().rev().zip(kb.iter().rev()) {
        let o = factor_cmp(x, y);
        if o.is_ne() {
            return o;
        }
    }
    ka.len().cmp(&kb.len()).then_with(|| expr_cmp(a, b))
}

/// Order of factors in `Times`.
pub fn factor_order(a: &CExpr, b: &CExpr) -> Ordering {
    match (as_number(a), as_number(b)) {
        (Some(x), Some(y)) => x.cmp(&y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        _ => factor_cmp(&base_exp(a), &base_exp(b)),
    }
}
