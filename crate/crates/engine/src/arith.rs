//! Canonical forms for `Plus`, `Times` and `Power` over already-evaluated
//! arguments: flattening, numeric folding, collection of like terms and
//! sorting. Products are never distributed over sums.

use num_rational::BigRational;
use num_traits::{One, Zero};
use skepsis_core::cexpr::CExpr;

use crate::number::{as_number, number, rational_pow, rational_root};
use crate::order::{base_exp, factor_order, term_cmp};

fn flatten<'a>(head: &str, args: &'a [CExpr], out: &mut Vec<&'a CExpr>) {
    for a in args {
        if a.is_call(head) {
            flatten(head, a.args(), out);
        } else {
            out.push(a);
        }
    }
}

/// Splits `c * rest` with `c` numeric.
fn split_coeff(t: &CExpr) -> (BigRational, CExpr) {
    if t.is_call("Times") {
        if let Some((first, rest)) = t.args().split_first() {
            if let Some(c) = as_number(first) {
                let rest = match rest {
                    [one] => one.clone(),
                    _ => CExpr::call("Times", rest.to_vec()),
                };
                return (c, rest);
            }
        }
    }
    (BigRational::one(), t.clone())
}

fn with_coeff(c: &BigRational, rest: CExpr) -> CExpr {
    if c.is_one() {
        return rest;
    }
    let mut args = vec![number(c)];
    if rest.is_call("Times") {
        args.extend(rest.args().iter().cloned());
    } else {
        args.push(rest);
    }
    CExpr::call("Times", args)
}

pub fn plus(args: &[CExpr]) -> CExpr {
    let mut flat = Vec::new();
    flatten("Plus", args, &mut flat);
    let mut sum = BigRational::zero();
    let mut terms: Vec<(CExpr, BigRational)> = Vec::new();
    for t in flat {
        if let Some(n) = as_number(t) {
            sum += n;
            continue;
        }
        let (c, rest) = split_coeff(t);
        match terms.iter_mut().find(|(r, _)| *r == rest) {
            Some((_, acc)) => *acc += c,
            None => terms.push((rest, c)),
        }
    }
    let mut out: Vec<CExpr> = terms.into_iter().filter(|(_, c)| !c.is_zero()).map(|(r, c)| with_coeff(&c, r)).collect();
    out.sort_by(term_cmp);
    if !sum.is_zero() {
        out.insert(0, number(&sum));
    }
    match out.len() {
        0 => number(&sum),
        1 => out.pop().unwrap(),
        _ => CExpr::call("Plus", out),
    }
}

pub fn times(args: &[CExpr]) -> CExpr {
    let mut flat = Vec::new();
    flatten("Times", args, &mut flat);
    let mut coeff = BigRational::one();
    let mut groups: Vec<(CExpr, Vec<CExpr>)> = Vec::new();
    for f in flat {
        if let Some(n) = as_number(f) {
            coeff *= n;
            continue;
        }
        let (b, e) = base_exp(f);
        match groups.iter_mut().find(|(gb, _)| *gb == b) {
            Some((_, es)) => es.push(e),
            None => groups.push((b, vec![e])),
        }
    }
    if coeff.is_zero() {
        return CExpr::int(0);
    }
    let mut out = Vec::new();
    for (b, es) in groups {
        let e = if es.len() == 1 { es.into_iter().next().unwrap() } else { plus(&es) };
        let f = power(&b, &e);
        if let Some(n) = as_number(&f) {
            coeff *= n;
        } else if f.is_call("Times") {
            // a power that split, e.g. (2 x)^... cannot occur after
            // flattening, but a numeric base may yield a coefficient
            for g in f.args() {
                match as_number(g) {
                    Some(n) => coeff *= n,
                    None => out.push(g.clone()),
                }
            }
        } else {
            out.push(f);
        }
    }
    if coeff.is_zero() {
        return CExpr::int(0);
    }
    out.sort_by(factor_order);
    if !coeff.is_one() {
        out.insert(0, number(&coeff));
    }
    match out.len() {
        0 => number(&coeff),
        1 => out.pop().unwrap(),
        _ => CExpr::call("Times", out),
    }
}

pub fn power(b: &CExpr, e: &CExpr) -> CExpr {
    let unevaluated = || CExpr::call("Power", vec![b.clone(), e.clone()]);
    let (bn, en) = (as_number(b), as_number(e));
    if let Some(en) = &en {
        if en.is_zero() {
            return if bn.as_ref().is_some_and(Zero::is_zero) { CExpr::sym("Indeterminate") } else { CExpr::int(1) };
        }
        if en.is_one() {
            return b.clone();
        }
    }
    if bn.as_ref().is_some_and(One::is_one) {
        return CExpr::int(1);
    }
    match (&bn, &en) {
        (Some(bv), Some(ev)) => {
            let Ok(k) = u32::try_from(ev.denom().clone()) else { return unevaluated() };
            let Some(root) = rational_root(bv, k) else { return unevaluated() };
            match rational_pow(&root, ev.numer()) {
                Some(v) => number(&v),
                None => CExpr::sym("ComplexInfinity"),
            }
        }
        (_, Some(ev)) if ev.is_integer() => {
            if b.is_call("Power") {
                let (inner_b, inner_e) = base_exp(b);
                return power(&inner_b, &times(&[inner_e, e.clone()]));
            }
            if b.is_call("Times") {
                let parts: Vec<CExpr> = b.args().iter().map(|f| power(f, e)).collect();
                return times(&parts);
            }
            unevaluated()
        }
        _ => unevaluated(),
    }
}
