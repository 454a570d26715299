//! Exact solving of polynomial systems by root finding, factoring and
//! substitution. Incomplete by design: when no step applies, no solutions
//! are reported. Every returned solution has been checked by substitution.

use std::collections::BTreeSet;

use skepsis_core::poly::{Assignment, Poly, Var};

use crate::factor::{factor, univariate_roots};

const MAX_DEPTH: usize = 64;

/// Rational solutions of `eqs = 0` assigning every variable in `vars`.
pub fn solve(eqs: &[Poly], vars: &[Var]) -> Vec<Assignment> {
    let wanted: BTreeSet<Var> = vars.iter().cloned().collect();
    if eqs.iter().flat_map(Poly::vars).any(|v| !wanted.contains(&v)) {
        return vec![];
    }
    let mut out = Vec::new();
    solve_rec(eqs.to_vec(), Assignment::new(), &wanted, 0, &mut out);
    out.retain(|a| eqs.iter().all(|e| e.eval(a).is_some_and(|r| num_traits::Zero::is_zero(&r))));
    out.sort();
    out.dedup();
    out
}

fn solve_rec(eqs: Vec<Poly>, assign: Assignment, vars: &BTreeSet<Var>, depth: usize, out: &mut Vec<Assignment>) {
    if depth > MAX_DEPTH {
        return;
    }
    let mut live = Vec::new();
    for e in eqs {
        let e = e.subst_all(&assign);
        if e.is_zero() {
            continue;
        }
        if e.is_constant() {
            return;
        }
        live.push(e);
    }
    if live.is_empty() {
        // underdetermined systems are out of scope
        if vars.iter().all(|v| assign.contains_key(v)) {
            out.push(assign);
        }
        return;
    }

    // a univariate equation fixes its variable
    if let Some(e) = live.iter().find(|e| e.vars().len() == 1) {
        let v = e.vars().into_iter().next().unwrap();
        for r in univariate_roots(e, &v) {
            let mut a = assign.clone();
            a.insert(v.clone(), r);
            solve_rec(live.clone(), a, vars, depth + 1, out);
        }
        return;
    }

    // a product is zero when one of its factors is
    for (i, e) in live.iter().enumerate() {
        let fs: Vec<Poly> = factor(e).into_iter().map(|(f, _)| f).filter(|f| !f.is_constant()).collect();
        if fs.len() > 1 {
            for f in fs {
                let mut branch = live.clone();
                branch[i] = f;
                solve_rec(branch, assign.clone(), vars, depth + 1, out);
            }
            return;
        }
    }

    // eliminate a variable that occurs linearly with a constant coefficient
    for (i, e) in live.iter().enumerate() {
        for v in e.vars() {
            let cs = e.coeffs_in(&v);
            if cs.keys().max() != Some(&1) {
                continue;
            }
            let Some(c) = cs[&1].as_constant() else { continue };
            let value = cs.get(&0).cloned().unwrap_or_default().scale(&(-c.recip()));
            let rest: Vec<Poly> = live.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.subst(&v, &value)).collect();
            let mut sub = Vec::new();
            let mut inner_vars = vars.clone();
            inner_vars.remove(&v);
            solve_rec(rest, assign.clone(), &inner_vars, depth + 1, &mut sub);
            for mut a in sub {
                if let Some(x) = value.eval(&a) {
                    a.insert(v.clone(), x);
                    out.push(a);
                }
            }
            return;
        }
    }
}
