//! Fourier–Motzkin elimination over exact rationals, and Farkas
//! certificates found by running it on the dual system.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use skepsis_core::poly::{Assignment, LinConstraint, Poly, Rat, Relation, Var};

use crate::EngineError;

/// A constraint `poly <= 0` (or `< 0` when strict).
#[derive(Debug, Clone)]
struct Ineq {
    poly: Poly,
    strict: bool,
}

impl Ineq {
    fn key(&self) -> (String, bool) {
        (self.poly.to_string(), self.strict)
    }

    /// Scaled so the coefficients are coprime integers (direction kept).
    fn normalized(self) -> Ineq {
        let c = self.poly.content();
        if c.is_zero() {
            return self;
        }
        Ineq { poly: self.poly.scale(&c.recip()), strict: self.strict }
    }

    fn trivially(&self) -> Option<bool> {
        let c = self.poly.as_constant()?;
        Some(if self.strict { c.is_negative() } else { !c.is_positive() })
    }
}

struct Step {
    var: Var,
    bounds: Vec<Ineq>,
}

fn dedup(v: Vec<Ineq>) -> Vec<Ineq> {
    let mut seen = BTreeSet::new();
    v.into_iter().filter(|i| seen.insert(i.key())).collect()
}

/// A satisfying assignment for `constraints`, or `None` if there is none.
/// Variables not mentioned get 0. Values are chosen small: 0 when allowed,
/// else the integer nearest 0, else a midpoint.
pub fn find_instance(constraints: &[LinConstraint], var_limit: usize) -> Result<Option<Assignment>, EngineError> {
    let vars: BTreeSet<Var> = constraints.iter().flat_map(|c| c.poly().vars()).collect();
    if vars.len() > var_limit {
        return Err(EngineError::VariableLimit { found: vars.len(), limit: var_limit });
    }

    // equalities are eliminated by substitution
    let mut eqs: Vec<Poly> = Vec::new();
    let mut ineqs: Vec<Ineq> = Vec::new();
    for c in constraints {
        match c.relation() {
            Relation::Eq => eqs.push(c.poly().clone()),
            Relation::Le => ineqs.push(Ineq { poly: c.poly().clone(), strict: false }),
            Relation::Lt => ineqs.push(Ineq { poly: c.poly().clone(), strict: true }),
        }
    }
    let mut substitutions: Vec<(Var, Poly)> = Vec::new();
    while let Some(e) = eqs.pop() {
        let Some(v) = e.vars().into_iter().next() else {
            if e.is_zero() {
                continue;
            }
            return Ok(None);
        };
        let a = e.linear_coeff(&v);
        let value = e.sub(&Poly::var(v.clone()).scale(&a)).scale(&(-a.recip()));
        eqs = eqs.iter().map(|p| p.subst(&v, &value)).collect();
        ineqs = ineqs.into_iter().map(|i| Ineq { poly: i.poly.subst(&v, &value), strict: i.strict }).collect();
        for (_, s) in substitutions.iter_mut() {
            *s = s.subst(&v, &value);
        }
        substitutions.push((v, value));
    }

    let mut ineqs = dedup(ineqs.into_iter().map(Ineq::normalized).collect());
    let mut steps: Vec<Step> = Vec::new();
    loop {
        let mut remaining = Vec::new();
        for i in ineqs {
            match i.trivially() {
                Some(true) => {}
                Some(false) => return Ok(None),
                None => remaining.push(i),
            }
        }
        ineqs = remaining;
        let live: BTreeSet<Var> = ineqs.iter().flat_map(|i| i.poly.vars()).collect();
        // eliminate the variable producing the fewest new constraints
        let Some(v) = live.iter().min_by_key(|v| {
            let (mut lo, mut hi) = (0usize, 0usize);
            for i in &ineqs {
                let a = i.poly.linear_coeff(v);
                if a.is_positive() {
                    hi += 1;
                } else if a.is_negative() {
                    lo += 1;
                }
            }
            lo * hi
        }) else {
            break;
        };
        let v = v.clone();
        let (with, without): (Vec<Ineq>, Vec<Ineq>) = ineqs.into_iter().partition(|i| !i.poly.linear_coeff(&v).is_zero());
        let mut next = without;
        let (lows, highs): (Vec<&Ineq>, Vec<&Ineq>) = with.iter().partition(|i| i.poly.linear_coeff(&v).is_negative());
        for lo in &lows {
            for hi in &highs {
                let (a, b) = (lo.poly.linear_coeff(&v), hi.poly.linear_coeff(&v));
                // b*lo - a*hi cancels v (a < 0 < b)
                let poly = lo.poly.scale(&b).sub(&hi.poly.scale(&a));
                next.push(Ineq { poly, strict: lo.strict || hi.strict }.normalized());
            }
        }
        steps.push(Step { var: v, bounds: with });
        ineqs = dedup(next);
    }

    // variables never eliminated are free; they stay 0
    let mut assign: Assignment = vars.iter().map(|v| (v.clone(), Rat::zero())).collect();
    for step in steps.iter().rev() {
        let mut lo: Option<(Rat, bool)> = None;
        let mut hi: Option<(Rat, bool)> = None;
        for b in &step.bounds {
            let a = b.poly.linear_coeff(&step.var);
            let rest = b.poly.sub(&Poly::var(step.var.clone()).scale(&a));
            let r = rest.eval(&assign).expect("every variable is assigned");
            let bound = -r / &a;
            if a.is_positive() {
                if hi.as_ref().is_none_or(|(h, s)| bound < *h || (bound == *h && b.strict && !s)) {
                    hi = Some((bound, b.strict));
                }
            } else if lo.as_ref().is_none_or(|(l, s)| bound > *l || (bound == *l && b.strict && !s)) {
                lo = Some((bound, b.strict));
            }
        }
        assign.insert(step.var.clone(), pick(lo, hi));
    }
    // each substitution mentions only variables that were not substituted
    for (v, value) in &substitutions {
        let x = value.eval(&assign).expect("every variable is assigned");
        assign.insert(v.clone(), x);
    }
    let ok = constraints.iter().all(|c| c.satisfied_by(&assign) == Some(true));
    if !ok {
        return Err(EngineError::Internal("Fourier-Motzkin witness failed its own check".into()));
    }
    Ok(Some(assign))
}

fn allows(x: &Rat, lo: &Option<(Rat, bool)>, hi: &Option<(Rat, bool)>) -> bool {
    let lo_ok = lo.as_ref().is_none_or(|(l, s)| if *s { x > l } else { x >= l });
    let hi_ok = hi.as_ref().is_none_or(|(h, s)| if *s { x < h } else { x <= h });
    lo_ok && hi_ok
}

fn pick(lo: Option<(Rat, bool)>, hi: Option<(Rat, bool)>) -> Rat {
    let zero = Rat::zero();
    if allows(&zero, &lo, &hi) {
        return zero;
    }
    let candidate = match (&lo, &hi) {
        (Some((l, s)), _) if l.is_positive() || l.is_zero() => {
            let c = l.ceil();
            if *s && c == *l {
                c + Rat::one()
            } else {
                c
            }
        }
        (_, Some((h, s))) => {
            let f = h.floor();
            if *s && f == *h {
                f - Rat::one()
            } else {
                f
            }
        }
        _ => zero,
    };
    if allows(&candidate, &lo, &hi) {
        return candidate;
    }
    match (lo, hi) {
        (Some((l, _)), Some((h, _))) => (l + h) / Rat::from_integer(2.into()),
        (Some((l, _)), None) => l + Rat::one(),
        (None, Some((h, _))) => h - Rat::one(),
        (None, None) => Rat::zero(),
    }
}

fn coeff_var(i: usize) -> Var {
    Var::new(format!("c${i}"))
}

/// Coefficients `c` with `sum c_i p_i` a constant contradicting the
/// hypotheses: `c_i >= 0` on inequality rows, and the constant is positive,
/// or zero with positive weight on some strict row.
pub fn farkas_coefficients(hyps: &[LinConstraint], var_limit: usize) -> Result<Option<Vec<Rat>>, EngineError> {
    if hyps.is_empty() {
        return Ok(None);
    }
    let vars: BTreeSet<Var> = hyps.iter().flat_map(|h| h.poly().vars()).collect();
    let mut base = Vec::new();
    for (i, h) in hyps.iter().enumerate() {
        if h.relation() != Relation::Eq {
            base.push(le(Poly::var(coeff_var(i)).neg()));
        }
    }
    for v in &vars {
        let sum = hyps.iter().enumerate().fold(Poly::zero(), |acc, (i, h)| {
            acc.add(&Poly::var(coeff_var(i)).scale(&h.poly().linear_coeff(v)))
        });
        base.push(LinConstraint::eq(sum).expect("linear"));
    }
    let q = hyps.iter().enumerate().fold(Poly::zero(), |acc, (i, h)| {
        acc.add(&Poly::var(coeff_var(i)).scale(&h.poly().constant_term()))
    });
    let strict_weight = hyps.iter().enumerate().filter(|(_, h)| h.relation() == Relation::Lt).fold(Poly::zero(), |acc, (i, _)| acc.add(&Poly::var(coeff_var(i))));

    let mut attempts = vec![vec![lt(q.neg())]];
    if !strict_weight.is_zero() {
        attempts.push(vec![le(q.neg()), lt(strict_weight.neg())]);
    }
    for extra in attempts {
        let mut system = base.clone();
        system.extend(extra);
        if let Some(a) = find_instance(&system, var_limit)? {
            return Ok(Some((0..hyps.len()).map(|i| a.get(&coeff_var(i)).cloned().unwrap_or_else(Rat::zero)).collect()));
        }
    }
    Ok(None)
}

fn le(p: Poly) -> LinConstraint {
    LinConstraint::le(p).expect("linear")
}

fn lt(p: Poly) -> LinConstraint {
    LinConstraint::lt(p).expect("linear")
}
