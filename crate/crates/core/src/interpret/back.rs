use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use thiserror::Error;

use super::PExpr;
use crate::cexpr::{print_fullform, CExpr};
use crate::kexpr::{fresh_name, BinderInfo, KExpr, LocalConst, Name};
use crate::reflect::{decode_kernel_expr, DecodeError, ENCODING_HEADS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackError {
    #[error("no translation for {0}")]
    NoTranslation(String),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

fn no_translation(e: &CExpr) -> BackError {
    let mut s = print_fullform(e);
    if s.len() > 160 {
        s.truncate(157);
        s.push_str("...");
    }
    BackError::NoTranslation(s)
}

/// Symbol ↦ term for bound variables (placeholder locals), innermost last.
pub type TransEnv = Vec<(String, KExpr)>;

/// Rule for applications with a given head symbol; receives the arguments.
pub type KeyedRule = Arc<dyn Fn(&mut Translator, &[CExpr]) -> Result<PExpr, BackError> + Send + Sync>;
/// Rule for any application; receives head and arguments.
pub type UnkeyedRule = Arc<dyn Fn(&mut Translator, &CExpr, &[CExpr]) -> Result<PExpr, BackError> + Send + Sync>;

/// What a binder head builds around its translated body.
#[derive(Debug, Clone, PartialEq)]
pub enum BinderKind {
    Lam,
    Pi,
    /// `c (fun x, body)`, e.g. for `Exists` or `Sum`.
    Wrap(Name),
}

/// The three rule classes, tried in the fixed order sym → keyed → unkeyed;
/// within a class the newest registration is tried first and the first
/// success wins.
#[derive(Clone)]
pub struct BackRuleSet {
    sym: Vec<(String, PExpr)>,
    keyed: Vec<(String, KeyedRule)>,
    unkeyed: Vec<UnkeyedRule>,
    binders: Vec<(String, BinderKind)>,
}

impl std::fmt::Debug for BackRuleSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BackRuleSet")
            .field("sym", &self.sym.iter().map(|(s, _)| s).collect::<Vec<_>>())
            .field("keyed", &self.keyed.iter().map(|(s, _)| s).collect::<Vec<_>>())
            .field("unkeyed", &self.unkeyed.len())
            .field("binders", &self.binders)
            .finish()
    }
}

fn op(name: &str, args: impl IntoIterator<Item = PExpr>) -> PExpr {
    PExpr::apps(PExpr::constant(name), args)
}

/// Integer as a pre-expression: a numeral, under `neg` when negative.
pub fn int_pexpr(n: &BigInt) -> PExpr {
    let p = PExpr::numeral(&n.magnitude().clone());
    if n.is_negative() {
        op("neg", [p])
    } else {
        p
    }
}

fn rational_pexpr(p: &BigInt, q: &BigInt) -> PExpr {
    if q == &BigInt::from(1) {
        return int_pexpr(p);
    }
    let frac = op("div", [PExpr::numeral(p.magnitude()), PExpr::numeral(q.magnitude())]);
    if p.is_negative() != q.is_negative() {
        op("neg", [frac])
    } else {
        frac
    }
}

fn fold_left(t: &mut Translator, name: &str, args: &[CExpr], unit: u32) -> Result<PExpr, BackError> {
    let mut it = args.iter();
    let Some(first) = it.next() else { return Ok(PExpr::numeral(&BigUint::from(unit))) };
    let mut acc = t.translate(first)?;
    for a in it {
        acc = op(name, [acc, t.translate(a)?]);
    }
    Ok(acc)
}

fn binary(name: &'static str, swap: bool) -> KeyedRule {
    Arc::new(move |t, args| match args {
        [a, b] => {
            let (a, b) = (t.translate(a)?, t.translate(b)?);
            Ok(if swap { op(name, [b, a]) } else { op(name, [a, b]) })
        }
        _ => Err(BackError::NoTranslation(format!("{name} expects two arguments"))),
    })
}

/// `a R b R c` as `a R b ∧ b R c`.
fn relation(name: &'static str, swap: bool) -> KeyedRule {
    Arc::new(move |t, args| {
        if args.len() < 2 {
            return Err(BackError::NoTranslation(format!("{name} expects at least two arguments")));
        }
        let xs = args.iter().map(|a| t.translate(a)).collect::<Result<Vec<_>, _>>()?;
        let mut parts: Vec<PExpr> = xs
            .windows(2)
            .map(|w| if swap { op(name, [w[1].clone(), w[0].clone()]) } else { op(name, [w[0].clone(), w[1].clone()]) })
            .collect();
        let last = parts.pop().unwrap();
        Ok(parts.into_iter().rev().fold(last, |acc, p| op("and", [p, acc])))
    })
}

impl BackRuleSet {
    /// No rules except the application fallback.
    pub fn empty() -> BackRuleSet {
        let fallback: UnkeyedRule = Arc::new(|t, head, args| {
            let mut f = t.translate(head)?;
            for a in args {
                f = PExpr::app(f, t.translate(a)?);
            }
            Ok(f)
        });
        BackRuleSet { sym: Vec::new(), keyed: Vec::new(), unkeyed: vec![fallback], binders: Vec::new() }
    }

    pub fn builtin() -> BackRuleSet {
        let mut rs = BackRuleSet::empty();
        for (s, c) in [("Real", "real"), ("Reals", "real"), ("Integers", "int"), ("False", "false")] {
            rs.register_sym_rule(s, PExpr::constant(c));
        }
        rs.register_keyed_rule("Plus", Arc::new(|t, args| fold_left(t, "add", args, 0)));
        rs.register_keyed_rule("Times", Arc::new(|t, args| fold_left(t, "mul", args, 1)));
        rs.register_keyed_rule(
            "Power",
            Arc::new(|t, args| match args {
                [b, CExpr::Int(n)] => {
                    let base = t.translate(b)?;
                    let pow = op("pow_nat", [base, PExpr::numeral(n.magnitude())]);
                    Ok(if n.is_negative() { op("div", [PExpr::numeral(&BigUint::from(1u8)), pow]) } else { pow })
                }
                _ => Err(BackError::NoTranslation("Power with a non-integer exponent".into())),
            }),
        );
        rs.register_keyed_rule(
            "Rational",
            Arc::new(|_, args| match args {
                [CExpr::Int(p), CExpr::Int(q)] if !q.is_zero() => Ok(rational_pexpr(p, q)),
                _ => Err(BackError::NoTranslation("malformed Rational".into())),
            }),
        );
        rs.register_keyed_rule("Subtract", binary("sub", false));
        rs.register_keyed_rule("Divide", binary("div", false));
        rs.register_keyed_rule(
            "Minus",
            Arc::new(|t, args| match args {
                [a] => Ok(op("neg", [t.translate(a)?])),
                _ => Err(BackError::NoTranslation("Minus expects one argument".into())),
            }),
        );
        rs.register_keyed_rule("LessEqual", relation("le", false));
        rs.register_keyed_rule("Less", relation("lt", false));
        rs.register_keyed_rule("GreaterEqual", relation("le", true));
        rs.register_keyed_rule("Greater", relation("lt", true));
        rs.register_keyed_rule("Equal", relation("eq", false));
        rs.register_keyed_rule(
            "And",
            Arc::new(|t, args| {
                let xs = args.iter().map(|a| t.translate(a)).collect::<Result<Vec<_>, _>>()?;
                let mut it = xs.into_iter().rev();
                let last = it.next().ok_or_else(|| BackError::NoTranslation("empty And".into()))?;
                Ok(it.fold(last, |acc, p| op("and", [p, acc])))
            }),
        );
        for head in ENCODING_HEADS {
            rs.register_keyed_rule(
                head,
                Arc::new(move |t, args| {
                    let e = CExpr::call(head, args.to_vec());
                    Ok(PExpr::Elaborated(t.decode(&e)?))
                }),
            );
        }
        rs.register_binder("Function", BinderKind::Lam);
        rs.register_binder("ForAll", BinderKind::Pi);
        rs
    }

    pub fn register_sym_rule(&mut self, sym: &str, p: PExpr) {
        self.sym.push((sym.to_string(), p));
    }

    pub fn register_keyed_rule(&mut self, key: &str, rule: KeyedRule) {
        assert!(!key.is_empty(), "keyed rules need a key");
        self.keyed.push((key.to_string(), rule));
    }

    pub fn register_unkeyed_rule(&mut self, rule: UnkeyedRule) {
        self.unkeyed.push(rule);
    }

    /// Treats `head[x, body]` as a binder of the given kind.
    pub fn register_binder(&mut self, head: &str, kind: BinderKind) {
        self.binders.push((head.to_string(), kind));
    }

    fn binder(&self, head: &str) -> Option<&BinderKind> {
        self.binders.iter().rev().find(|(h, _)| h == head).map(|(_, k)| k)
    }
}

impl Default for BackRuleSet {
    fn default() -> Self {
        BackRuleSet::builtin()
    }
}

/// Translation state handed to rules.
pub struct Translator<'a> {
    rules: &'a BackRuleSet,
    env: TransEnv,
}

/// Display name for a binder symbol such as `x$3`.
fn pretty_of(sym: &str) -> Name {
    let stem = sym.split('$').next().unwrap_or("");
    Name::parse(stem).unwrap_or_else(|_| Name::from("x"))
}

impl Translator<'_> {
    pub fn decode(&self, e: &CExpr) -> Result<KExpr, DecodeError> {
        let env = &self.env;
        decode_kernel_expr(e, &|s| env.iter().rev().find(|(n, _)| n == s).map(|(_, k)| k.clone()))
    }

    pub fn translate(&mut self, e: &CExpr) -> Result<PExpr, BackError> {
        match e {
            CExpr::Str(s) => Name::parse(s).map(|n| PExpr::Const(n, Vec::new())).map_err(|_| no_translation(e)),
            CExpr::Int(n) => Ok(int_pexpr(n)),
            CExpr::Real(r) => {
                let q = r.to_rational();
                Ok(rational_pexpr(q.numer(), q.denom()))
            }
            CExpr::Sym(s) => {
                if let Some((_, k)) = self.env.iter().rev().find(|(n, _)| n == s) {
                    return Ok(PExpr::Elaborated(k.clone()));
                }
                if let Some((_, p)) = self.rules.sym.iter().rev().find(|(n, _)| n == s) {
                    return Ok(p.clone());
                }
                Err(no_translation(e))
            }
            CExpr::App(head, args) => {
                if let Some(h) = head.as_sym() {
                    if let Some(kind) = self.rules.binder(h).cloned() {
                        if let Some(r) = self.binder(&kind, args) {
                            return r;
                        }
                    }
                    let keyed: Vec<KeyedRule> =
                        self.rules.keyed.iter().rev().filter(|(k, _)| k == h).map(|(_, r)| r.clone()).collect();
                    for rule in keyed {
                        if let Ok(p) = rule(self, args) {
                            return Ok(p);
                        }
                    }
                }
                let unkeyed: Vec<UnkeyedRule> = self.rules.unkeyed.iter().rev().cloned().collect();
                for rule in unkeyed {
                    if let Ok(p) = rule(self, head, args) {
                        return Ok(p);
                    }
                }
                Err(no_translation(e))
            }
        }
    }

    /// `head[x, body]`, `head[{x, y}, body]` or `head[x, cond, body]`;
    /// `None` if the arguments do not have a binder shape.
    fn binder(&mut self, kind: &BinderKind, args: &[CExpr]) -> Option<Result<PExpr, BackError>> {
        let (vars, cond, body) = match args {
            [v, b] => (v, None, b),
            [v, c, b] if *kind == BinderKind::Pi => (v, Some(c), b),
            _ => return None,
        };
        let syms: Vec<String> = match vars {
            CExpr::Sym(s) => vec![s.clone()],
            l if l.is_call("List") && !l.args().is_empty() => {
                l.args().iter().map(|a| a.as_sym().map(str::to_string)).collect::<Option<_>>()?
            }
            _ => return None,
        };
        let locals: Vec<KExpr> = syms
            .iter()
            .map(|s| {
                KExpr::local(LocalConst {
                    unique: fresh_name("_mm"),
                    pretty: pretty_of(s),
                    info: BinderInfo::Default,
                    ty: KExpr::prop(),
                })
            })
            .collect();
        let depth = self.env.len();
        for (s, l) in syms.iter().zip(&locals) {
            self.env.push((s.clone(), l.clone()));
        }
        let translated = (|| {
            let b = self.translate(body)?;
            match cond {
                Some(c) => Ok(PExpr::pi("_".into(), BinderInfo::Default, self.translate(c)?, b)),
                None => Ok(b),
            }
        })();
        self.env.truncate(depth);
        let mut out = match translated {
            Ok(b) => b,
            Err(e) => return Some(Err(e)),
        };
        for l in locals.iter().rev() {
            let KExpr::Local(lc) = l else { unreachable!() };
            let abstracted = out.abstract_local(&lc.unique);
            out = match kind {
                BinderKind::Lam => PExpr::lam(lc.pretty.clone(), BinderInfo::Default, PExpr::Hole, abstracted),
                BinderKind::Pi => PExpr::pi(lc.pretty.clone(), BinderInfo::Default, PExpr::Hole, abstracted),
                BinderKind::Wrap(c) => PExpr::app(
                    PExpr::constant(c.clone()),
                    PExpr::lam(lc.pretty.clone(), BinderInfo::Default, PExpr::Hole, abstracted),
                ),
            };
        }
        Some(Ok(out))
    }
}

/// Back-translates a CAS expression to a pre-expression.
pub fn pexpr_of_mmexpr(env: &TransEnv, e: &CExpr, rules: &BackRuleSet) -> Result<PExpr, BackError> {
    Translator { rules, env: env.clone() }.translate(e)
}

/// Exact inverse of the verbatim encoding.
pub fn expr_of_mmexpr(env: &TransEnv, e: &CExpr) -> Result<KExpr, BackError> {
    Ok(Translator { rules: &BackRuleSet::empty(), env: env.clone() }.decode(e)?)
}
