use std::collections::HashSet;

use crate::cexpr::{match_with, Bindings, CExpr};

use super::{ForwardRuleSet, ReflectError};

/// What a `LeanVar` refers to: a translated binder's replacement, or a
/// binder kept in the output verbatim.
#[derive(Debug, Clone, PartialEq)]
pub enum EnvEntry {
    Value(CExpr),
    Keep,
}

/// Enclosing binders, innermost last.
pub type BinderEnv = Vec<EnvEntry>;

/// Rewrites a kernel encoding into idiomatic CAS operators. Rules are tried
/// newest first at each node, outermost first; subterms no rule touches are
/// kept verbatim.
pub fn lean_form(e: &CExpr, rules: &ForwardRuleSet) -> Result<CExpr, ReflectError> {
    lean_form_in(e, &mut Vec::new(), rules)
}

/// [`lean_form`] under an existing binder environment.
pub fn lean_form_in(e: &CExpr, env: &mut BinderEnv, rules: &ForwardRuleSet) -> Result<CExpr, ReflectError> {
    let mut taken = HashSet::new();
    e.visit(&mut |n| {
        if let CExpr::Sym(s) = n {
            taken.insert(s.clone());
        }
    });
    for entry in env.iter() {
        if let EnvEntry::Value(v) = entry {
            v.visit(&mut |n| {
                if let CExpr::Sym(s) = n {
                    taken.insert(s.clone());
                }
            });
        }
    }
    let mut lf = LeanForm { rules, taken, counter: 0 };
    lf.go(e, env)
}

struct LeanForm<'a> {
    rules: &'a ForwardRuleSet,
    taken: HashSet<String>,
    counter: u64,
}

/// Whether an encoded binder body is a proposition, judged from its head.
fn prop_like(b: &CExpr) -> bool {
    let mut e = b;
    while let (Some("LeanApp"), [f, _]) = (e.head_sym(), e.args()) {
        e = f;
    }
    match (e.head_sym(), e.args()) {
        (Some("LeanConst"), [CExpr::Str(n), _]) => {
            matches!(n.as_str(), "le" | "lt" | "eq" | "and" | "or" | "not" | "exists" | "false" | "true" | "ne" | "iff")
        }
        (Some("LeanPi"), [_, _, _, body]) => prop_like(body),
        _ => false,
    }
}

/// Adds `amount` to every `LeanVar` at or above `cutoff`, counting the
/// encoded binders passed on the way down.
fn shift_kept(e: &CExpr, amount: usize, cutoff: usize) -> CExpr {
    if amount == 0 {
        return e.clone();
    }
    match (e.head_sym(), e.args()) {
        (Some("LeanVar"), [CExpr::Int(i)]) => match usize::try_from(i.clone()) {
            Ok(i) if i >= cutoff => CExpr::call("LeanVar", vec![CExpr::int(i + amount)]),
            _ => e.clone(),
        },
        (Some(h @ ("LeanLam" | "LeanPi")), [n, bi, d, body]) => CExpr::call(
            h,
            vec![n.clone(), bi.clone(), shift_kept(d, amount, cutoff), shift_kept(body, amount, cutoff + 1)],
        ),
        _ => match e {
            CExpr::App(h, args) => {
                CExpr::app(shift_kept(h, amount, cutoff), args.iter().map(|a| shift_kept(a, amount, cutoff)).collect())
            }
            _ => e.clone(),
        },
    }
}

fn symbol_stem(name: &CExpr) -> String {
    let raw = match name {
        CExpr::Str(s) => s.as_str(),
        CExpr::Sym(s) => s.as_str(),
        _ => "",
    };
    let stem: String = raw.chars().filter(|c| c.is_alphanumeric()).collect();
    match stem.chars().next() {
        Some(c) if c.is_alphabetic() => stem,
        _ => format!("x{stem}"),
    }
}

impl LeanForm<'_> {
    fn fresh(&mut self, name: &CExpr) -> CExpr {
        let stem = symbol_stem(name);
        loop {
            self.counter += 1;
            let s = format!("{stem}${}", self.counter);
            if self.taken.insert(s.clone()) {
                return CExpr::Sym(s);
            }
        }
    }

    fn go(&mut self, e: &CExpr, env: &mut BinderEnv) -> Result<CExpr, ReflectError> {
        if let (Some("LeanVar"), [CExpr::Int(i)]) = (e.head_sym(), e.args()) {
            let i = usize::try_from(i.clone()).map_err(|_| ReflectError::UnboundVariable(usize::MAX))?;
            if i >= env.len() {
                return Err(ReflectError::UnboundVariable(i));
            }
            let entry = &env[env.len() - 1 - i];
            return Ok(match entry {
                // kept binders opened since the value was bound shift its
                // own kept-binder references
                EnvEntry::Value(v) => {
                    let kept = env[env.len() - i..].iter().filter(|x| **x == EnvEntry::Keep).count();
                    shift_kept(v, kept, 0)
                }
                EnvEntry::Keep => {
                    let kept = env[env.len() - i..].iter().filter(|x| **x == EnvEntry::Keep).count();
                    CExpr::call("LeanVar", vec![CExpr::int(kept)])
                }
            });
        }
        for rule in self.rules.iter() {
            let b = match_with(&rule.pattern, e, &mut |test, b| match (test.head_sym(), test.args()) {
                (Some("LeanPropQ"), [CExpr::Sym(v)]) => b.get(v).is_some_and(prop_like),
                _ => false,
            });
            if let Some(b) = b {
                let mut bound = None;
                return self.instantiate(&rule.template, &b, env, &mut bound);
            }
        }
        match (e.head_sym(), e.args()) {
            (Some("LeanLocal" | "LeanConst" | "LeanSort" | "LeanMVar"), _) => Ok(e.clone()),
            (Some(h @ ("LeanLam" | "LeanPi")), [n, bi, d, body]) => {
                let d = self.go(d, env)?;
                env.push(EnvEntry::Keep);
                let body = self.go(body, env);
                env.pop();
                Ok(CExpr::call(h, vec![n.clone(), bi.clone(), d, body?]))
            }
            // zeta-reduce: the CAS has no typed let, so the value is
            // substituted into the body before the body is translated
            (Some("LeanLet"), [_, _, v, body]) => {
                let v = self.go(v, env)?;
                env.push(EnvEntry::Value(v));
                let body = self.go(body, env);
                env.pop();
                body
            }
            _ => match e {
                CExpr::App(h, args) => {
                    let h = self.go(h, env)?;
                    let args = args.iter().map(|a| self.go(a, env)).collect::<Result<_, _>>()?;
                    Ok(CExpr::app(h, args))
                }
                _ => Ok(e.clone()),
            },
        }
    }

    fn instantiate(
        &mut self,
        t: &CExpr,
        b: &Bindings,
        env: &mut BinderEnv,
        bound: &mut Option<CExpr>,
    ) -> Result<CExpr, ReflectError> {
        let var = |a: &CExpr| a.as_sym().and_then(|s| b.get(s)).cloned().expect("slots checked at registration");
        match (t.head_sym(), t.args()) {
            (Some("LeanForm"), [v]) => self.go(&var(v), env),
            (Some("LeanBoundSymbol"), [n]) => {
                if bound.is_none() {
                    *bound = Some(self.fresh(&var(n)));
                }
                Ok(bound.clone().unwrap())
            }
            (Some("LeanFormBody"), [v]) => {
                if bound.is_none() {
                    *bound = Some(self.fresh(&CExpr::str("x")));
                }
                env.push(EnvEntry::Value(bound.clone().unwrap()));
                let r = self.go(&var(v), env);
                env.pop();
                r
            }
            (Some("LeanFormLet"), [v, body]) => {
                let value = self.go(&var(v), env)?;
                env.push(EnvEntry::Value(value));
                let r = self.go(&var(body), env);
                env.pop();
                r
            }
            _ => match t {
                CExpr::Sym(s) => Ok(b.get(s).cloned().unwrap_or_else(|| t.clone())),
                CExpr::App(h, args) => {
                    let h = self.instantiate(h, b, env, bound)?;
                    let args = args.iter().map(|a| self.instantiate(a, b, env, bound)).collect::<Result<_, _>>()?;
                    Ok(CExpr::app(h, args))
                }
                _ => Ok(t.clone()),
            },
        }
    }
}
