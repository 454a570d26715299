use std::collections::HashMap;

use num_traits::Zero;
use skepsis_core::cexpr::{match_pattern, match_with, substitute, Bindings, CExpr};
use skepsis_core::poly::{LinConstraint, Poly, Relation, Var};
use skepsis_core::reflect::{lean_form, strip_inactive, ForwardRuleSet};
use skepsis_bridge::Scope;

use crate::arith::{plus, power, times};
use crate::convert::{from_factors, from_poly, to_poly, var_of};
use crate::factor::factor;
use crate::linear::{farkas_coefficients, find_instance};
use crate::number::{as_number, number};
use crate::solve::solve;
use crate::EngineError;

#[derive(Debug, Clone)]
pub struct EngineConfig {
    /// Maximum nesting of evaluations.
    pub recursion_limit: usize,
    /// Maximum rewrite steps in one request.
    pub iteration_limit: usize,
    /// Maximum variables handed to Fourier–Motzkin.
    pub variable_limit: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { recursion_limit: 10_000, iteration_limit: 1_000_000, variable_limit: 16 }
    }
}

#[derive(Debug, Clone, Default)]
struct Defs {
    own: HashMap<String, CExpr>,
    down: HashMap<String, Vec<(CExpr, CExpr)>>,
}

/// Definitions visible to one request.
#[derive(Debug)]
pub struct EvalContext {
    pub id: u64,
    pub scope: Scope,
    defs: Defs,
}

/// The built-in CAS. Holds the global context; scoped requests get a
/// scratch context layered over it that is dropped afterwards.
pub struct Engine {
    config: EngineConfig,
    forward: ForwardRuleSet,
    global: EvalContext,
    next_id: u64,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new()
    }
}

impl Engine {
    pub fn new() -> Engine {
        Engine::with_config(EngineConfig::default(), ForwardRuleSet::builtin())
    }

    pub fn with_config(config: EngineConfig, forward: ForwardRuleSet) -> Engine {
        Engine { config, forward, global: EvalContext { id: 0, scope: Scope::Global, defs: Defs::default() }, next_id: 1 }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn forward_rules(&self) -> &ForwardRuleSet {
        &self.forward
    }

    pub fn forward_rules_mut(&mut self) -> &mut ForwardRuleSet {
        &mut self.forward
    }

    pub fn eval(&mut self, e: &CExpr, scope: Scope) -> Result<CExpr, EngineError> {
        match scope {
            Scope::Global => Evaluator::new(&self.config, &self.forward, &mut self.global.defs, None).eval(e),
            Scope::Scoped => {
                let mut ctx = EvalContext { id: self.next_id, scope, defs: Defs::default() };
                self.next_id += 1;
                let out = Evaluator::new(&self.config, &self.forward, &mut self.global.defs, Some(&mut ctx.defs)).eval(e);
                // `ctx` is cleared here and its id never reused
                out
            }
        }
    }
}

struct Evaluator<'a> {
    config: &'a EngineConfig,
    forward: &'a ForwardRuleSet,
    global: &'a mut Defs,
    local: Option<&'a mut Defs>,
    depth: usize,
    steps: usize,
}

#[derive(Clone, Copy)]
enum Hold {
    None,
    First,
    Rest,
    All,
}

fn hold_of(head: &CExpr) -> Hold {
    match head.as_sym() {
        Some("Hold" | "HoldForm" | "HoldPattern" | "SetDelayed" | "Function" | "CompoundExpression" | "And" | "Or"
        | "Condition" | "Inactive") => Hold::All,
        Some("Set" | "Pattern") => Hold::First,
        Some("RuleDelayed" | "If") => Hold::Rest,
        _ if head.is_call("Inactive") => Hold::All,
        _ => Hold::None,
    }
}

fn truth(b: bool) -> CExpr {
    CExpr::sym(if b { "True" } else { "False" })
}

/// Key of the definition list an lhs belongs to.
fn lhs_key(lhs: &CExpr) -> Option<String> {
    match lhs.head_sym() {
        Some("Condition" | "HoldPattern") => lhs.args().first().and_then(lhs_key),
        Some(h) => Some(h.to_string()),
        None => None,
    }
}

fn list_items(e: &CExpr) -> Vec<CExpr> {
    if e.is_call("List") || e.is_call("And") {
        e.args().iter().flat_map(list_items).collect()
    } else {
        vec![e.clone()]
    }
}

fn rules_list(e: &CExpr) -> Vec<CExpr> {
    if e.is_call("List") {
        e.args().to_vec()
    } else {
        vec![e.clone()]
    }
}

/// Relations as `(poly, rel)` with the meaning `poly rel 0`. Chains are
/// split into their links.
pub fn relation_polys(e: &CExpr) -> Result<Vec<(Poly, Relation)>, EngineError> {
    let mut out = Vec::new();
    for item in list_items(e) {
        match item.as_sym() {
            Some("True") => continue,
            Some("False") => {
                out.push((Poly::int(1), Relation::Le));
                continue;
            }
            _ => {}
        }
        let rel = match item.head_sym() {
            Some("Equal") => Relation::Eq,
            Some("LessEqual" | "GreaterEqual") => Relation::Le,
            Some("Less" | "Greater") => Relation::Lt,
            _ => return Err(EngineError::NotPolynomial(skepsis_core::cexpr::print_fullform(&item))),
        };
        let flip = matches!(item.head_sym(), Some("GreaterEqual" | "Greater"));
        let polys = item.args().iter().map(to_poly).collect::<Result<Vec<_>, _>>()?;
        for w in polys.windows(2) {
            let d = if flip { w[1].sub(&w[0]) } else { w[0].sub(&w[1]) };
            out.push((d, rel));
        }
    }
    Ok(out)
}

fn var_list(e: &CExpr) -> Vec<CExpr> {
    if e.is_call("List") {
        e.args().to_vec()
    } else {
        vec![e.clone()]
    }
}

fn rules_of(vars: &[CExpr], a: &skepsis_core::poly::Assignment) -> CExpr {
    CExpr::list(
        vars.iter()
            .map(|v| {
                let value = a.get(&var_of(v)).cloned().unwrap_or_else(num_traits::Zero::zero);
                CExpr::call("Rule", vec![v.clone(), number(&value)])
            })
            .collect(),
    )
}

impl<'a> Evaluator<'a> {
    fn new(config: &'a EngineConfig, forward: &'a ForwardRuleSet, global: &'a mut Defs, local: Option<&'a mut Defs>) -> Self {
        Evaluator { config, forward, global, local, depth: 0, steps: 0 }
    }

    fn defs_mut(&mut self) -> &mut Defs {
        match self.local.as_deref_mut() {
            Some(l) => l,
            None => self.global,
        }
    }

    fn own_value(&self, s: &str) -> Option<CExpr> {
        self.local.as_ref().and_then(|l| l.own.get(s)).or_else(|| self.global.own.get(s)).cloned()
    }

    fn down_values(&self, s: &str) -> Vec<(CExpr, CExpr)> {
        let mut out = Vec::new();
        if let Some(l) = self.local.as_ref().and_then(|l| l.down.get(s)) {
            out.extend(l.iter().cloned());
        }
        if let Some(g) = self.global.down.get(s) {
            out.extend(g.iter().cloned());
        }
        out
    }

    fn define(&mut self, lhs: &CExpr, rhs: CExpr) -> Result<(), EngineError> {
        if let CExpr::Sym(s) = lhs {
            self.defs_mut().own.insert(s.clone(), rhs);
            return Ok(());
        }
        let key = lhs_key(lhs).ok_or_else(|| EngineError::BadDefinition(skepsis_core::cexpr::print_fullform(lhs)))?;
        let rules = self.defs_mut().down.entry(key).or_default();
        match rules.iter_mut().find(|(l, _)| l == lhs) {
            Some(slot) => slot.1 = rhs,
            None => rules.push((lhs.clone(), rhs)),
        }
        Ok(())
    }

    fn eval(&mut self, e: &CExpr) -> Result<CExpr, EngineError> {
        if self.depth >= self.config.recursion_limit {
            return Err(EngineError::RecursionLimit(self.config.recursion_limit));
        }
        self.depth += 1;
        let out = stacker::maybe_grow(128 * 1024, 8 * 1024 * 1024, || self.eval_inner(e));
        self.depth -= 1;
        out
    }

    fn eval_inner(&mut self, e: &CExpr) -> Result<CExpr, EngineError> {
        let mut cur = e.clone();
        loop {
            self.steps += 1;
            if self.steps > self.config.iteration_limit {
                return Err(EngineError::IterationLimit(self.config.iteration_limit));
            }
            let next = match &cur {
                CExpr::Sym(s) => match self.own_value(s) {
                    Some(v) => v,
                    None => return Ok(cur),
                },
                CExpr::App(h, args) => {
                    let head = self.eval(h)?;
                    let hold = hold_of(&head);
                    let mut evaluated = Vec::with_capacity(args.len());
                    for (i, a) in args.iter().enumerate() {
                        let held = match hold {
                            Hold::None => false,
                            Hold::All => true,
                            Hold::First => i == 0,
                            Hold::Rest => i > 0,
                        };
                        evaluated.push(if held { a.clone() } else { self.eval(a)? });
                    }
                    let app = CExpr::app(head, evaluated);
                    match self.apply(&app)? {
                        Some(r) => r,
                        None => return Ok(app),
                    }
                }
                _ => return Ok(cur),
            };
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
    }

    /// One rewrite at the root, if any applies.
    fn apply(&mut self, e: &CExpr) -> Result<Option<CExpr>, EngineError> {
        let CExpr::App(head, args) = e else { return Ok(None) };
        if head.is_call("Function") {
            return Ok(beta(head.args(), args));
        }
        let Some(h) = head.as_sym() else { return Ok(None) };
        for (lhs, rhs) in self.down_values(h) {
            let mut cond = |test: &CExpr, b: &Bindings| {
                matches!(self.eval(&substitute(test, b)), Ok(CExpr::Sym(ref s)) if s == "True")
            };
            if let Some(b) = match_with(&lhs, e, &mut cond) {
                return Ok(Some(substitute(&rhs, &b)));
            }
        }
        self.builtin(h, args)
    }

    fn builtin(&mut self, h: &str, args: &[CExpr]) -> Result<Option<CExpr>, EngineError> {
        let numbers = || args.iter().map(as_number).collect::<Option<Vec<_>>>();
        Ok(match (h, args) {
            ("Plus", _) => Some(plus(args)),
            ("Times", _) => Some(times(args)),
            ("Power", [b, x]) => Some(power(b, x)),
            ("Subtract", [a, b]) => Some(plus(&[a.clone(), times(&[CExpr::int(-1), b.clone()])])),
            ("Minus", [a]) => Some(times(&[CExpr::int(-1), a.clone()])),
            ("Divide", [a, b]) => Some(times(&[a.clone(), power(b, &CExpr::int(-1))])),
            ("Sqrt", [a]) => Some(power(a, &CExpr::call("Rational", vec![CExpr::int(1), CExpr::int(2)]))),
            ("Rational", [CExpr::Int(_), CExpr::Int(q)]) if !q.is_zero() => as_number(&CExpr::call(h, args.to_vec())).map(|r| number(&r)),
            ("Equal", _) if args.len() >= 2 => match numbers() {
                Some(ns) => Some(truth(ns.windows(2).all(|w| w[0] == w[1]))),
                None if args.windows(2).all(|w| w[0] == w[1]) => Some(truth(true)),
                None => None,
            },
            ("Unequal", [a, b]) => match (as_number(a), as_number(b)) {
                (Some(x), Some(y)) => Some(truth(x != y)),
                _ if a == b => Some(truth(false)),
                _ => None,
            },
            ("Less" | "LessEqual" | "Greater" | "GreaterEqual", _) if args.len() >= 2 => numbers().map(|ns| {
                truth(ns.windows(2).all(|w| match h {
                    "Less" => w[0] < w[1],
                    "LessEqual" => w[0] <= w[1],
                    "Greater" => w[0] > w[1],
                    _ => w[0] >= w[1],
                }))
            }),
            ("Not", [a]) => match a.as_sym() {
                Some("True") => Some(truth(false)),
                Some("False") => Some(truth(true)),
                _ => None,
            },
            ("And" | "Or", _) => Some(self.connective(h == "And", args)?),
            ("If", [c, rest @ ..]) if !rest.is_empty() => {
                let c = self.eval(c)?;
                match c.as_sym() {
                    Some("True") => Some(rest[0].clone()),
                    Some("False") => Some(rest.get(1).cloned().unwrap_or_else(|| CExpr::sym("Null"))),
                    _ => None,
                }
            }
            ("CompoundExpression", _) => {
                let mut last = CExpr::sym("Null");
                for a in args {
                    last = self.eval(a)?;
                }
                Some(last)
            }
            ("Set", [lhs, rhs]) => {
                self.define(lhs, rhs.clone())?;
                Some(rhs.clone())
            }
            ("SetDelayed", [lhs, rhs]) => {
                self.define(lhs, rhs.clone())?;
                Some(CExpr::sym("Null"))
            }
            ("ReplaceAll", [e, rules]) => Some(replace_all(e, &rules_list(rules))),
            ("Activate", [e]) => Some(strip_inactive(e)),
            ("LeanConvert", [e]) => Some(lean_form(e, self.forward)?),
            ("Expand", [e]) => to_poly(e).ok().map(|p| from_poly(&p)),
            ("Factor", [e]) => to_poly(e).ok().map(|p| if p.is_zero() { CExpr::int(0) } else { from_factors(&factor(&p)) }),
            ("Solve", [eqs, vars]) => self.solve(eqs, vars),
            ("FindInstance", [cons, vars, ..]) => self.find_instance(cons, vars)?,
            ("FarkasCertificate", [hyps]) => self.farkas(hyps)?,
            _ => None,
        })
    }

    fn connective(&mut self, and: bool, args: &[CExpr]) -> Result<CExpr, EngineError> {
        let (absorb, unit) = if and { ("False", "True") } else { ("True", "False") };
        let mut kept = Vec::new();
        for a in args {
            let v = self.eval(a)?;
            match v.as_sym() {
                Some(s) if s == absorb => return Ok(CExpr::sym(absorb)),
                Some(s) if s == unit => {}
                _ => kept.push(v),
            }
        }
        Ok(match kept.len() {
            0 => CExpr::sym(unit),
            1 => kept.pop().unwrap(),
            _ => CExpr::call(if and { "And" } else { "Or" }, kept),
        })
    }

    fn solve(&mut self, eqs: &CExpr, vars: &CExpr) -> Option<CExpr> {
        let rels = relation_polys(eqs).ok()?;
        if rels.iter().any(|(_, r)| *r != Relation::Eq) {
            return None;
        }
        let polys: Vec<Poly> = rels.into_iter().map(|(p, _)| p).collect();
        let vs = var_list(vars);
        let pvars: Vec<Var> = vs.iter().map(var_of).collect();
        let sols = solve(&polys, &pvars);
        Some(CExpr::list(sols.iter().map(|a| rules_of(&vs, a)).collect()))
    }

    fn constraints(&self, e: &CExpr) -> Option<Vec<LinConstraint>> {
        relation_polys(e).ok()?.into_iter().map(|(p, r)| LinConstraint::new(p, r).ok()).collect()
    }

    fn find_instance(&mut self, cons: &CExpr, vars: &CExpr) -> Result<Option<CExpr>, EngineError> {
        let Some(cs) = self.constraints(cons) else { return Ok(None) };
        let vs = var_list(vars);
        Ok(Some(match find_instance(&cs, self.config.variable_limit)? {
            Some(a) => CExpr::list(vec![rules_of(&vs, &a)]),
            None => CExpr::list(vec![]),
        }))
    }

    fn farkas(&mut self, hyps: &CExpr) -> Result<Option<CExpr>, EngineError> {
        let Some(cs) = self.constraints(hyps) else { return Ok(None) };
        Ok(Some(match farkas_coefficients(&cs, self.config.variable_limit)? {
            Some(c) => CExpr::list(c.iter().map(number).collect()),
            None => CExpr::list(vec![]),
        }))
    }
}

fn beta(fun: &[CExpr], args: &[CExpr]) -> Option<CExpr> {
    let (params, body) = match fun {
        [body] => return Some(slots(body, args)),
        [params, body] => (params, body),
        _ => return None,
    };
    let names = var_list(params);
    if names.len() != args.len() {
        return None;
    }
    let mut b = Bindings::new();
    for (n, a) in names.iter().zip(args) {
        b.insert(n.as_sym()?.to_string(), a.clone());
    }
    Some(substitute(body, &b))
}

/// `Slot[i]` substitution for one-argument-form pure functions.
fn slots(body: &CExpr, args: &[CExpr]) -> CExpr {
    body.replace(&mut |e| match (e.head_sym(), e.args()) {
        (Some("Slot"), [CExpr::Int(i)]) => {
            let i: usize = i.try_into().ok()?;
            args.get(i.checked_sub(1)?).cloned()
        }
        _ => None,
    })
}

fn replace_all(e: &CExpr, rules: &[CExpr]) -> CExpr {
    for r in rules {
        if let (Some("Rule" | "RuleDelayed"), [lhs, rhs]) = (r.head_sym(), r.args()) {
            if let Some(b) = match_pattern(lhs, e) {
                return substitute(rhs, &b);
            }
        }
    }
    match e {
        CExpr::App(h, args) => CExpr::app(replace_all(h, rules), args.iter().map(|a| replace_all(a, rules)).collect()),
        _ => e.clone(),
    }
}
