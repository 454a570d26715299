use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use skepsis_bridge::Oracle;
use skepsis_core::cexpr::{print_fullform, CExpr};
use skepsis_core::kexpr::KExpr;
use skepsis_core::poly::{Assignment, Poly, Rat, Relation, Var};

use crate::certificate::Certificate;
use crate::encode::Vars;
use crate::translate::{conjuncts, Walker};
use crate::VerifyError;

/// Bounds of the rational grid searched when a system is not linear.
#[derive(Debug, Clone)]
pub struct SanityConfig {
    pub max_denominator: i64,
    pub bound: i64,
    /// Total points tried; with `n` variables the grid uses the simplest
    /// `max_points^(1/n)` values per variable.
    pub max_points: usize,
}

impl Default for SanityConfig {
    fn default() -> Self {
        SanityConfig { max_denominator: 16, bound: 32, max_points: 200_000 }
    }
}

/// Result of a sanity check. `Ok` means no counterexample was found; it is
/// not evidence for the goal.
#[derive(Debug, Clone, PartialEq)]
pub enum Sanity {
    Ok,
    Counterexample(Certificate),
}

type System = Vec<(Poly, Relation)>;

fn holds(cs: &System, a: &Assignment) -> bool {
    cs.iter().all(|(p, rel)| match p.subst_all(a).as_constant() {
        Some(v) => rel.holds(&v),
        None => false,
    })
}

/// Ways the goal can fail, each a conjunction of constraints.
fn negations(w: &mut Walker, goal: &KExpr) -> Result<Vec<System>, VerifyError> {
    let mut out = Vec::new();
    for c in conjuncts(goal) {
        if c.is_const_named("false") {
            out.push(vec![]);
            continue;
        }
        let (p, rel) = w.relation(&c)?;
        match rel {
            // ¬(p ≤ 0) is -p < 0, ¬(p < 0) is -p ≤ 0
            Relation::Le => out.push(vec![(p.neg(), Relation::Lt)]),
            Relation::Lt => out.push(vec![(p.neg(), Relation::Le)]),
            Relation::Eq => {
                out.push(vec![(p.neg(), Relation::Lt)]);
                out.push(vec![(p, Relation::Lt)]);
            }
        }
    }
    Ok(out)
}

/// Looks for an assignment satisfying the hypotheses and the negated goal:
/// linear systems go to the oracle's `FindInstance`, others to a bounded
/// grid search. Any assignment returned has been checked by substitution.
pub fn sanity_check<O: Oracle + ?Sized>(
    hyps: &[KExpr],
    goal: &KExpr,
    oracle: &mut O,
    cfg: &SanityConfig,
) -> Result<Sanity, VerifyError> {
    let mut w = Walker::new();
    let mut base = System::new();
    for h in hyps {
        base.extend(w.constraints(h)?);
    }
    for alt in negations(&mut w, goal)? {
        let mut system = base.clone();
        system.extend(alt);
        if let Some(a) = search(&system, oracle, cfg)? {
            if !holds(&system, &a) {
                return Err(VerifyError::Oracle("the oracle's instance does not satisfy the system".into()));
            }
            return Ok(Sanity::Counterexample(Certificate::Counterexample { assignment: a }));
        }
    }
    Ok(Sanity::Ok)
}

fn search<O: Oracle + ?Sized>(system: &System, oracle: &mut O, cfg: &SanityConfig) -> Result<Option<Assignment>, VerifyError> {
    let vars: BTreeSet<Var> = system.iter().flat_map(|(p, _)| p.vars()).collect();
    let vars: Vec<Var> = vars.into_iter().collect();
    if vars.is_empty() {
        let a = Assignment::new();
        return Ok(holds(system, &a).then_some(a));
    }
    if system.iter().all(|(p, _)| p.is_linear()) {
        let enc = Vars(vars.clone());
        let cons = CExpr::list(system.iter().map(|(p, rel)| enc.constraint(p, *rel)).collect());
        let code = CExpr::call("FindInstance", vec![cons, enc.list()]);
        let answer = oracle.execute(&print_fullform(&code))?;
        let mut found = enc.solutions(&answer)?.into_iter().next();
        if let Some(a) = found.as_mut() {
            for v in &vars {
                a.entry(v.clone()).or_insert_with(Rat::zero);
            }
        }
        return Ok(found);
    }
    Ok(grid_search(system, &vars, cfg))
}

/// Rationals with bounded denominator in `[-bound, bound]`, simplest first.
pub fn grid_values(cfg: &SanityConfig) -> Vec<Rat> {
    let mut out = Vec::new();
    for q in 1..=cfg.max_denominator.max(1) {
        for p in 0..=cfg.bound * q {
            let r = Rat::new(p.into(), q.into());
            if *r.denom() != q.into() {
                continue;
            }
            out.push(r.clone());
            if !r.is_zero() {
                out.push(-r);
            }
        }
    }
    out.sort_by(|a, b| a.denom().cmp(b.denom()).then(a.abs().cmp(&b.abs())).then(b.cmp(a)));
    out
}

fn grid_search(system: &System, vars: &[Var], cfg: &SanityConfig) -> Option<Assignment> {
    let values = grid_values(cfg);
    let per_var = (cfg.max_points as f64).powf(1.0 / vars.len() as f64).floor().max(1.0) as usize;
    let m = per_var.min(values.len());
    let mut idx = vec![0usize; vars.len()];
    loop {
        let a: Assignment = vars.iter().cloned().zip(idx.iter().map(|&i| values[i].clone())).collect();
        if holds(system, &a) {
            return Some(a);
        }
        // odometer step
        let mut k = 0;
        loop {
            if k == idx.len() {
                return None;
            }
            idx[k] += 1;
            if idx[k] < m {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
