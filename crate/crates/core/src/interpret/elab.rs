//! Elaboration of pre-expressions against the fixed signature.
//!
//! Omitted arguments become metavariables solved by first-order unification.
//! Instance arguments and untyped numerals are postponed until their carrier
//! type is known, then filled from the [`InstanceTable`].

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use super::{InstanceTable, PExpr};
use crate::kexpr::typecheck::{self, imax};
use crate::kexpr::{fresh_name, print_kexpr_in, BinderInfo, KExpr, Level, LocalConst, Name, NamePart, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElabError {
    #[error("unknown constant {0}")]
    UnknownConstant(Name),
    #[error("elaboration failed at {location}: {reason}")]
    ElaborationFailed { location: String, reason: String },
    #[error("ambiguous type: {0}")]
    AmbiguousType(String),
}

fn failed(location: impl Into<String>, reason: impl Into<String>) -> ElabError {
    ElabError::ElaborationFailed { location: location.into(), reason: reason.into() }
}

/// Fills the holes of `p`, returning a term that passes the simple type
/// checker (and has type `expected`, when given).
pub fn elaborate(
    p: &PExpr,
    sig: &Signature,
    inst: &InstanceTable,
    expected: Option<&KExpr>,
) -> Result<KExpr, ElabError> {
    let mut el = Elaborator::new(sig, inst);
    let e = match expected {
        Some(t) => el.check(p, t)?,
        None => el.infer(p)?.0,
    };
    el.resolve_pending()?;
    let e = el.instantiate(&e);
    if has_metas(&e) {
        return Err(ElabError::AmbiguousType(format!("cannot determine all implicit arguments of {}", el.show(&e))));
    }
    let ty = typecheck::infer_type(&e, sig).map_err(|err| failed(el.show(&e), err.to_string()))?;
    if let Some(t) = expected {
        if !typecheck::defeq(&ty, t) {
            return Err(failed(el.show(&e), format!("has type {}, expected {}", el.show(&ty), el.show(t))));
        }
    }
    Ok(e)
}

fn is_level_meta(n: &Name) -> bool {
    matches!(n.parts().first(), Some(NamePart::Str(s)) if s == "?u")
}

fn level_has_meta(l: &Level) -> bool {
    let mut ps = Vec::new();
    l.params(&mut ps);
    ps.iter().any(is_level_meta)
}

fn has_metas(e: &KExpr) -> bool {
    let mut found = false;
    e.visit(&mut |n| match n {
        KExpr::MVar(..) => found = true,
        KExpr::Sort(l) => found |= level_has_meta(l),
        KExpr::Const(_, ls) => found |= ls.iter().any(level_has_meta),
        _ => {}
    });
    found
}

/// A postponed instance argument: metavariable and its class type.
struct Pending(Name, KExpr);

struct Elaborator<'a> {
    sig: &'a Signature,
    inst: &'a InstanceTable,
    assigned: HashMap<Name, KExpr>,
    levels: HashMap<Name, Level>,
    pending: Vec<Pending>,
    next: u64,
}

impl<'a> Elaborator<'a> {
    fn new(sig: &'a Signature, inst: &'a InstanceTable) -> Self {
        Elaborator { sig, inst, assigned: HashMap::new(), levels: HashMap::new(), pending: Vec::new(), next: 0 }
    }

    fn show(&self, e: &KExpr) -> String {
        print_kexpr_in(&self.instantiate(e), self.sig)
    }

    fn new_meta(&mut self, ty: KExpr) -> KExpr {
        self.next += 1;
        KExpr::MVar(Name::from("?m").with_num(self.next), Arc::new(ty))
    }

    fn new_level(&mut self) -> Level {
        self.next += 1;
        Level::Param(Name::from("?u").with_num(self.next))
    }

    fn new_type_meta(&mut self) -> KExpr {
        let l = self.new_level();
        self.new_meta(KExpr::Sort(l))
    }

    fn inst_level(&self, l: &Level) -> Level {
        match l {
            Level::Zero => Level::Zero,
            Level::Succ(x) => self.inst_level(x).succ(),
            Level::Max(a, b) => Level::max(self.inst_level(a), self.inst_level(b)),
            Level::Param(n) => match self.levels.get(n) {
                Some(v) => self.inst_level(v),
                None => l.clone(),
            },
        }
        .normalize()
    }

    fn instantiate(&self, e: &KExpr) -> KExpr {
        e.replace(&mut |n, _| match n {
            KExpr::MVar(name, ty) => Some(match self.assigned.get(name) {
                Some(v) => self.instantiate(v),
                None => KExpr::MVar(name.clone(), Arc::new(self.instantiate(ty))),
            }),
            KExpr::Sort(l) => Some(KExpr::Sort(self.inst_level(l))),
            KExpr::Const(c, ls) => Some(KExpr::Const(c.clone(), ls.iter().map(|l| self.inst_level(l)).collect())),
            KExpr::Local(l) => Some(KExpr::Local(Arc::new(LocalConst { ty: self.instantiate(&l.ty), ..(**l).clone() }))),
            _ => None,
        })
    }

    fn whnf(&self, e: &KExpr) -> KExpr {
        typecheck::whnf(&self.instantiate(e))
    }

    // ---- unification ----

    fn unify_level(&mut self, a: &Level, b: &Level) -> bool {
        let (a, b) = (self.inst_level(a), self.inst_level(b));
        if a == b {
            return true;
        }
        match (&a, &b) {
            (Level::Param(n), other) | (other, Level::Param(n)) if is_level_meta(n) => {
                let mut ps = Vec::new();
                other.params(&mut ps);
                if ps.contains(n) {
                    return false;
                }
                self.levels.insert(n.clone(), other.clone());
                true
            }
            (Level::Succ(x), Level::Succ(y)) => self.unify_level(&x.clone(), &y.clone()),
            _ => a.equiv(&b),
        }
    }

    fn unify(&mut self, a: &KExpr, b: &KExpr) -> bool {
        let (a, b) = (self.whnf(a), self.whnf(b));
        match (&a, &b) {
            (KExpr::MVar(n, _), KExpr::MVar(m, _)) if n == m => true,
            (KExpr::MVar(n, t), other) | (other, KExpr::MVar(n, t)) => self.assign(n, t, other),
            (KExpr::Sort(l1), KExpr::Sort(l2)) => self.unify_level(l1, l2),
            (KExpr::Const(n, ls), KExpr::Const(m, ms)) => {
                n == m && ls.len() == ms.len() && ls.iter().zip(ms).all(|(x, y)| self.unify_level(x, y))
            }
            (KExpr::Local(x), KExpr::Local(y)) => x.unique == y.unique,
            (KExpr::Var(i), KExpr::Var(j)) => i == j,
            (KExpr::App(f, x), KExpr::App(g, y)) => self.unify(f, g) && self.unify(x, y),
            (KExpr::Pi { domain: d1, body: b1, .. }, KExpr::Pi { domain: d2, body: b2, .. })
            | (KExpr::Lam { domain: d1, body: b1, .. }, KExpr::Lam { domain: d2, body: b2, .. }) => {
                self.unify(d1, d2) && self.unify(b1, b2)
            }
            _ => false,
        }
    }

    fn assign(&mut self, n: &Name, ty: &KExpr, v: &KExpr) -> bool {
        if !v.is_closed() {
            return false;
        }
        let mut occurs = false;
        v.visit(&mut |x| {
            if matches!(x, KExpr::MVar(m, _) if m == n) {
                occurs = true
            }
        });
        if occurs {
            return false;
        }
        self.assigned.insert(n.clone(), v.clone());
        match self.infer_term(v) {
            Some(vt) => self.unify(ty, &vt),
            None => true,
        }
    }

    /// Type of an already elaborated (possibly meta-bearing) term.
    fn infer_term(&mut self, e: &KExpr) -> Option<KExpr> {
        match e {
            KExpr::Var(_) => None,
            KExpr::Sort(l) => Some(KExpr::Sort(l.clone().succ())),
            KExpr::Const(n, ls) => {
                let d = self.sig.get(n)?;
                if d.univ_params.len() != ls.len() {
                    return None;
                }
                let subst = d.univ_params.iter().cloned().zip(ls.iter().cloned()).collect();
                Some(d.ty.instantiate_level_params(&subst))
            }
            KExpr::MVar(_, t) => Some((**t).clone()),
            KExpr::Local(l) => Some(l.ty.clone()),
            KExpr::App(f, a) => match {
                let ft = self.infer_term(f)?;
                self.whnf(&ft)
            } {
                KExpr::Pi { body, .. } => Some(body.instantiate(a)),
                _ => None,
            },
            KExpr::Lam { name, info, domain, body } => {
                let l = self.scratch_local(name, *info, domain);
                let bt = self.infer_term(&body.instantiate(&l))?;
                Some(KExpr::pi(name.clone(), *info, (**domain).clone(), bt.abstract_local(local_unique(&l))))
            }
            KExpr::Pi { name, info, domain, body } => {
                let l1 = self.sort_level(domain)?;
                let l = self.scratch_local(name, *info, domain);
                let l2 = self.sort_level(&body.instantiate(&l))?;
                Some(KExpr::Sort(imax(l1, l2)))
            }
            KExpr::Let { value, body, .. } => self.infer_term(&body.instantiate(value)),
        }
    }

    fn sort_level(&mut self, ty: &KExpr) -> Option<Level> {
        let t = self.infer_term(ty)?;
        match self.whnf(&t) {
            KExpr::Sort(l) => Some(l),
            _ => None,
        }
    }

    fn scratch_local(&self, name: &Name, info: BinderInfo, ty: &KExpr) -> KExpr {
        KExpr::local(LocalConst { unique: fresh_name("_elab"), pretty: name.clone(), info, ty: ty.clone() })
    }

    // ---- elaboration proper ----

    fn check(&mut self, p: &PExpr, expected: &KExpr) -> Result<KExpr, ElabError> {
        let (e, t) = self.elab(p, Some(expected))?;
        if !self.unify(&t, expected) {
            return Err(failed(
                self.show(&e),
                format!("type mismatch: has type {}, expected {}", self.show(&t), self.show(expected)),
            ));
        }
        Ok(e)
    }

    fn infer(&mut self, p: &PExpr) -> Result<(KExpr, KExpr), ElabError> {
        self.elab(p, None)
    }

    /// Elaborates a type, returning it with its universe level.
    fn elab_type(&mut self, p: &PExpr) -> Result<(KExpr, Level), ElabError> {
        if matches!(p, PExpr::Hole) {
            let l = self.new_level();
            let m = self.new_meta(KExpr::Sort(l.clone()));
            return Ok((m, l));
        }
        let (e, t) = self.infer(p)?;
        let l = match self.whnf(&t) {
            KExpr::Sort(l) => l,
            t @ KExpr::MVar(..) => {
                let l = self.new_level();
                self.unify(&t, &KExpr::Sort(l.clone()));
                l
            }
            t => return Err(failed(self.show(&e), format!("type expected, got a term of type {}", self.show(&t)))),
        };
        Ok((e, l))
    }

    fn elab(&mut self, p: &PExpr, expected: Option<&KExpr>) -> Result<(KExpr, KExpr), ElabError> {
        match p {
            PExpr::Var(i) => Err(failed(format!("#{i}"), "loose bound variable")),
            PExpr::Sort(l) => Ok((KExpr::Sort(l.clone()), KExpr::Sort(l.clone().succ()))),
            PExpr::Local(l) => Ok((KExpr::Local(l.clone()), l.ty.clone())),
            PExpr::Const(..) | PExpr::App(..) | PExpr::Explicit(_) => self.elab_app(p),
            PExpr::Elaborated(k) => {
                let t = self.infer_term(k).ok_or_else(|| failed(self.show(k), "ill-typed embedded term"))?;
                Ok((k.clone(), t))
            }
            PExpr::Hole => {
                let t = match expected {
                    Some(t) => t.clone(),
                    None => self.new_type_meta(),
                };
                Ok((self.new_meta(t.clone()), t))
            }
            PExpr::Typed(e, t) => {
                let (t, _) = self.elab_type(t)?;
                let e = self.check(e, &t)?;
                Ok((e, t))
            }
            PExpr::Lam { name, info, domain, body } => {
                let (d, _) = self.elab_type(domain)?;
                let l = self.scratch_local(name, *info, &d);
                let body_expected = match expected.map(|t| self.whnf(t)) {
                    Some(KExpr::Pi { domain: ed, body: eb, .. }) => {
                        self.unify(&d, &ed);
                        Some(eb.instantiate(&l))
                    }
                    _ => None,
                };
                let (b, bt) = self.elab(&body.instantiate(&l), body_expected.as_ref())?;
                let (b, bt) = (self.instantiate(&b), self.instantiate(&bt));
                let u = local_unique(&l);
                Ok((
                    KExpr::lam(name.clone(), *info, d.clone(), b.abstract_local(u)),
                    KExpr::pi(name.clone(), *info, d, bt.abstract_local(u)),
                ))
            }
            PExpr::Pi { name, info, domain, body } => {
                let (d, l1) = self.elab_type(domain)?;
                let l = self.scratch_local(name, *info, &d);
                let (b, l2) = self.elab_type(&body.instantiate(&l))?;
                let (b, l2) = (self.instantiate(&b), self.inst_level(&l2));
                Ok((
                    KExpr::pi(name.clone(), *info, d, b.abstract_local(local_unique(&l))),
                    KExpr::Sort(imax(l1, l2)),
                ))
            }
            PExpr::Let { name, ty, value, body } => {
                let (t, _) = self.elab_type(ty)?;
                let v = self.check(value, &t)?;
                let l = self.scratch_local(name, BinderInfo::Default, &t);
                let (b, bt) = self.elab(&body.instantiate(&l), expected)?;
                let (b, bt) = (self.instantiate(&b), self.instantiate(&bt));
                let u = local_unique(&l);
                let bt = bt.abstract_local(u).instantiate(&v);
                Ok((KExpr::elet(name.clone(), t, v, b.abstract_local(u)), bt))
            }
        }
    }

    fn elab_app(&mut self, p: &PExpr) -> Result<(KExpr, KExpr), ElabError> {
        let (head, args) = p.spine();
        let (head, explicit) = match head {
            PExpr::Explicit(h) => (h.as_ref(), true),
            h => (h, false),
        };
        let (mut f, mut fty) = match head {
            PExpr::Const(n, ls) => {
                let d = self.sig.get(n).ok_or_else(|| ElabError::UnknownConstant(n.clone()))?;
                let ls: Vec<Level> = if ls.is_empty() {
                    let k = d.univ_params.len();
                    (0..k).map(|_| self.new_level()).collect()
                } else {
                    ls.clone()
                };
                if ls.len() != d.univ_params.len() {
                    return Err(failed(n.to_string(), "wrong number of universe levels"));
                }
                let subst = d.univ_params.iter().cloned().zip(ls.iter().cloned()).collect();
                (KExpr::Const(n.clone(), ls), d.ty.instantiate_level_params(&subst))
            }
            PExpr::App(..) => unreachable!("spine head is never an application"),
            h => self.infer(h)?,
        };
        for arg in args {
            if !explicit {
                (f, fty) = self.insert_implicits(f, fty);
            }
            match self.whnf(&fty) {
                KExpr::Pi { domain, body, .. } => {
                    let a = self.check(arg, &domain)?;
                    fty = body.instantiate(&a);
                    f = KExpr::app(f, a);
                }
                other => {
                    return Err(failed(
                        self.show(&f),
                        format!("function expected, but it has type {}", self.show(&other)),
                    ))
                }
            }
        }
        if !explicit {
            (f, fty) = self.insert_implicits(f, fty);
        }
        Ok((f, fty))
    }

    fn insert_implicits(&mut self, mut f: KExpr, mut fty: KExpr) -> (KExpr, KExpr) {
        loop {
            match self.whnf(&fty) {
                KExpr::Pi { info, domain, body, .. } if info != BinderInfo::Default => {
                    let m = self.new_meta((*domain).clone());
                    if info == BinderInfo::InstImplicit {
                        let KExpr::MVar(name, _) = &m else { unreachable!() };
                        self.pending.push(Pending(name.clone(), (*domain).clone()));
                    }
                    fty = body.instantiate(&m);
                    f = KExpr::app(f, m);
                }
                _ => return (f, fty),
            }
        }
    }

    /// Carrier constant of `ty` if it is already known.
    fn carrier(&self, ty: &KExpr) -> Option<Name> {
        match self.whnf(ty) {
            KExpr::Const(c, ls) if ls.is_empty() => Some(c),
            _ => None,
        }
    }

    fn resolve_pending(&mut self) -> Result<(), ElabError> {
        loop {
            let mut progress = false;
            for Pending(m, ty) in std::mem::take(&mut self.pending) {
                let ty = self.whnf(&ty);
                let (head, args) = ty.spine();
                let found = match (head.const_name(), args.as_slice()) {
                    (Some(class), [carrier]) => {
                        self.carrier(carrier).and_then(|c| self.inst.lookup(class, &c).cloned())
                    }
                    _ => None,
                };
                match found {
                    Some(i) => {
                        let mv = KExpr::MVar(m.clone(), Arc::new(ty.clone()));
                        if !self.unify(&mv, &KExpr::constant(i.clone())) {
                            return Err(failed(i.to_string(), format!("instance does not fit {}", self.show(&ty))));
                        }
                        progress = true;
                    }
                    None => self.pending.push(Pending(m, ty)),
                }
            }
            if self.pending.is_empty() {
                return Ok(());
            }
            if !progress {
                break;
            }
        }
        let Pending(_, ty) = &self.pending[0];
        let ty = self.instantiate(ty);
        let (_, args) = ty.spine();
        let carrier_open = args.first().map_or(true, |a| matches!(self.whnf(a), KExpr::MVar(..)));
        if carrier_open {
            Err(ElabError::AmbiguousType(format!("cannot infer the carrier type of {}", self.show(&ty))))
        } else {
            Err(failed("instance argument", format!("no instance for {}", self.show(&ty))))
        }
    }
}

fn local_unique(e: &KExpr) -> &Name {
    match e {
        KExpr::Local(l) => &l.unique,
        _ => unreachable!("scratch locals are locals"),
    }
}
