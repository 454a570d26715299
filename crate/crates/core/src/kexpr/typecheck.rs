//! A small type checker for elaborated terms. Conversion is beta/zeta
//! normalisation followed by alpha-equivalence; constants never unfold.

use thiserror::Error;

use super::{KExpr, Level, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unknown constant {0}")]
    UnknownConstant(String),
    #[error("constant {0} expects {1} universe levels")]
    LevelArity(String, usize),
    #[error("loose bound variable #{0}")]
    LooseVar(u32),
    #[error("function expected, got {0}")]
    NotAFunction(String),
    #[error("type expected, got {0}")]
    NotASort(String),
    #[error("argument mismatch: expected {expected}, got {got}")]
    Mismatch { expected: String, got: String },
}

/// Infers the type of a closed (possibly local-bearing) term.
pub fn infer_type(e: &KExpr, sig: &Signature) -> Result<KExpr, TypeError> {
    Checker { sig, binders: Vec::new() }.infer(e)
}

/// Checks `e : expected` up to conversion.
pub fn check_type(e: &KExpr, expected: &KExpr, sig: &Signature) -> Result<(), TypeError> {
    let t = infer_type(e, sig)?;
    if defeq(&t, expected) {
        Ok(())
    } else {
        Err(TypeError::Mismatch { expected: format!("{expected:?}"), got: format!("{t:?}") })
    }
}

pub fn defeq(a: &KExpr, b: &KExpr) -> bool {
    a.alpha_eq(b) || normalize(a).alpha_eq(&normalize(b))
}

/// Weak head normal form under beta and zeta.
pub fn whnf(e: &KExpr) -> KExpr {
    let mut e = e.clone();
    loop {
        match &e {
            KExpr::Let { value, body, .. } => e = body.instantiate(value),
            KExpr::App(..) => {
                let (head, args) = e.spine();
                if let KExpr::Lam { body, .. } = whnf(head) {
                    let mut r = body.instantiate(args[0]);
                    r = KExpr::apps(r, args[1..].iter().map(|a| (*a).clone()));
                    e = r;
                } else {
                    return e;
                }
            }
            _ => return e,
        }
    }
}

/// Full beta/zeta normal form.
pub fn normalize(e: &KExpr) -> KExpr {
    match whnf(e) {
        KExpr::App(f, a) => KExpr::app(normalize(&f), normalize(&a)),
        KExpr::Lam { name, info, domain, body } => KExpr::lam(name, info, normalize(&domain), normalize(&body)),
        KExpr::Pi { name, info, domain, body } => KExpr::pi(name, info, normalize(&domain), normalize(&body)),
        other => other,
    }
}

/// `imax`: a Pi into Prop is a Prop.
pub fn imax(a: Level, b: Level) -> Level {
    let b = b.normalize();
    if b.is_zero() {
        Level::Zero
    } else {
        Level::max(a, b).normalize()
    }
}

struct Checker<'a> {
    sig: &'a Signature,
    binders: Vec<KExpr>,
}

impl Checker<'_> {
    fn infer(&mut self, e: &KExpr) -> Result<KExpr, TypeError> {
        match e {
            KExpr::Var(i) => {
                let n = self.binders.len();
                if (*i as usize) >= n {
                    return Err(TypeError::LooseVar(*i));
                }
                Ok(self.binders[n - 1 - *i as usize].lift(0, i + 1))
            }
            KExpr::Sort(l) => Ok(KExpr::Sort(l.clone().succ())),
            KExpr::Const(n, ls) => {
                let d = self.sig.get(n).ok_or_else(|| TypeError::UnknownConstant(n.to_string()))?;
                if d.univ_params.len() != ls.len() {
                    return Err(TypeError::LevelArity(n.to_string(), d.univ_params.len()));
                }
                let subst = d.univ_params.iter().cloned().zip(ls.iter().cloned()).collect();
                Ok(d.ty.instantiate_level_params(&subst))
            }
            KExpr::MVar(_, t) => Ok((**t).clone()),
            KExpr::Local(l) => Ok(l.ty.clone()),
            KExpr::App(f, a) => {
                let ft = whnf(&self.infer(f)?);
                let KExpr::Pi { domain, body, .. } = ft else {
                    return Err(TypeError::NotAFunction(format!("{f:?}")));
                };
                let at = self.infer(a)?;
                if !defeq(&at, &domain) {
                    return Err(TypeError::Mismatch { expected: format!("{domain:?}"), got: format!("{at:?}") });
                }
                Ok(body.instantiate(a))
            }
            KExpr::Lam { name, info, domain, body } => {
                self.sort_of(domain)?;
                self.binders.push((**domain).clone());
                let bt = self.infer(body);
                self.binders.pop();
                Ok(KExpr::pi(name.clone(), *info, (**domain).clone(), bt?))
            }
            KExpr::Pi { domain, body, .. } => {
                let l1 = self.sort_of(domain)?;
                self.binders.push((**domain).clone());
                let l2 = self.sort_of(body);
                self.binders.pop();
                Ok(KExpr::Sort(imax(l1, l2?)))
            }
            KExpr::Let { ty, value, body, .. } => {
                self.sort_of(ty)?;
                let vt = self.infer(value)?;
                if !defeq(&vt, ty) {
                    return Err(TypeError::Mismatch { expected: format!("{ty:?}"), got: format!("{vt:?}") });
                }
                self.infer(&body.instantiate(value))
            }
        }
    }

    fn sort_of(&mut self, e: &KExpr) -> Result<Level, TypeError> {
        match whnf(&self.infer(e)?) {
            KExpr::Sort(l) => Ok(l),
            other => Err(TypeError::NotASort(format!("{other:?}"))),
        }
    }
}
