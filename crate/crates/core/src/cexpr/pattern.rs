use std::collections::BTreeMap;

use super::CExpr;

/// Pattern variable bindings, by variable name.
pub type Bindings = BTreeMap<String, CExpr>;

/// Matches `e` against `p`. `Pattern[x, Blank[]]` binds `x`; a repeated
/// variable must bind syntactically equal subterms; `Blank[h]` checks the
/// head (`Integer`, `Real`, `String` and `Symbol` name atom kinds).
/// `Condition` patterns never match here; see [`match_with`].
pub fn match_pattern(p: &CExpr, e: &CExpr) -> Option<Bindings> {
    match_with(p, e, &mut |_, _| false)
}

/// Like [`match_pattern`], deciding `Condition[p, test]` by calling `cond`
/// with the test and the bindings made so far.
pub fn match_with(p: &CExpr, e: &CExpr, cond: &mut impl FnMut(&CExpr, &Bindings) -> bool) -> Option<Bindings> {
    let mut b = Bindings::new();
    go(p, e, &mut b, cond).then_some(b)
}

fn head_of(e: &CExpr) -> CExpr {
    match e {
        CExpr::Sym(_) => CExpr::sym("Symbol"),
        CExpr::Str(_) => CExpr::sym("String"),
        CExpr::Int(_) => CExpr::sym("Integer"),
        CExpr::Real(_) => CExpr::sym("Real"),
        CExpr::App(h, _) => (**h).clone(),
    }
}

fn blank_ok(args: &[CExpr], e: &CExpr) -> bool {
    match args {
        [] => true,
        [h] => head_of(e) == *h,
        _ => false,
    }
}

fn go(p: &CExpr, e: &CExpr, b: &mut Bindings, cond: &mut impl FnMut(&CExpr, &Bindings) -> bool) -> bool {
    match p {
        CExpr::App(h, args) => match (h.as_sym(), args.as_slice()) {
            (Some("Blank"), a) => blank_ok(a, e),
            (Some("Pattern"), [CExpr::Sym(name), inner]) => {
                if !go(inner, e, b, cond) {
                    return false;
                }
                match b.get(name) {
                    Some(prev) => prev == e,
                    None => {
                        b.insert(name.clone(), e.clone());
                        true
                    }
                }
            }
            (Some("Condition"), [inner, test]) => {
                let saved = b.clone();
                if go(inner, e, b, cond) && cond(test, b) {
                    true
                } else {
                    *b = saved;
                    false
                }
            }
            (Some("HoldPattern"), [inner]) => go(inner, e, b, cond),
            _ => match e {
                CExpr::App(eh, eargs) => {
                    eargs.len() == args.len()
                        && go(h, eh, b, cond)
                        && args.iter().zip(eargs).all(|(pa, ea)| go(pa, ea, b, cond))
                }
                _ => false,
            },
        },
        atom => atom == e,
    }
}

/// Names bound by a pattern, in first-occurrence order.
pub fn pattern_vars(p: &CExpr) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    p.visit(&mut |n| {
        if let (Some("Pattern"), [CExpr::Sym(name), _]) = (n.head_sym(), n.args()) {
            if !out.contains(name) {
                out.push(name.clone());
            }
        }
    });
    out
}

/// Replaces bound symbols in `template` by their values.
pub fn substitute(template: &CExpr, b: &Bindings) -> CExpr {
    if b.is_empty() {
        return template.clone();
    }
    template.replace(&mut |n| match n {
        CExpr::Sym(s) => b.get(s).cloned(),
        _ => None,
    })
}
