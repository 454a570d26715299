use std::sync::Arc;

use num_bigint::BigUint;

use crate::kexpr::{encode_numeral, BinderInfo, KExpr, Level, LocalConst, Name};

/// Pre-expressions: kernel terms with holes where implicit, type or instance
/// arguments were left out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PExpr {
    Var(u32),
    Sort(Level),
    /// An empty level list on a universe-polymorphic constant means "infer".
    Const(Name, Vec<Level>),
    Local(Arc<LocalConst>),
    App(Box<PExpr>, Box<PExpr>),
    Lam {
        name: Name,
        info: BinderInfo,
        domain: Box<PExpr>,
        body: Box<PExpr>,
    },
    Pi {
        name: Name,
        info: BinderInfo,
        domain: Box<PExpr>,
        body: Box<PExpr>,
    },
    Let {
        name: Name,
        ty: Box<PExpr>,
        value: Box<PExpr>,
        body: Box<PExpr>,
    },
    Hole,
    /// Type ascription `(e : T)`.
    Typed(Box<PExpr>, Box<PExpr>),
    /// Application head written with `@`: no implicit arguments are inserted.
    Explicit(Box<PExpr>),
    /// An already elaborated term, passed through unchanged.
    Elaborated(KExpr),
}

impl PExpr {
    pub fn constant(name: impl Into<Name>) -> PExpr {
        PExpr::Const(name.into(), Vec::new())
    }

    pub fn app(f: PExpr, a: PExpr) -> PExpr {
        PExpr::App(Box::new(f), Box::new(a))
    }

    pub fn apps(f: PExpr, args: impl IntoIterator<Item = PExpr>) -> PExpr {
        args.into_iter().fold(f, PExpr::app)
    }

    /// Untyped numeral: the bare `zero`/`one`/`bit0`/`bit1` spine, whose
    /// carrier is decided by elaboration.
    pub fn numeral(n: &BigUint) -> PExpr {
        PExpr::from_bare(&encode_numeral(n))
    }

    /// Converts a term made of constants and applications, leaving all
    /// implicit arguments to elaboration.
    fn from_bare(k: &KExpr) -> PExpr {
        match k {
            KExpr::App(f, a) => PExpr::app(PExpr::from_bare(f), PExpr::from_bare(a)),
            KExpr::Const(n, _) => PExpr::constant(n.clone()),
            other => PExpr::Elaborated(other.clone()),
        }
    }

    pub fn lam(name: Name, info: BinderInfo, domain: PExpr, body: PExpr) -> PExpr {
        PExpr::Lam { name, info, domain: Box::new(domain), body: Box::new(body) }
    }

    pub fn pi(name: Name, info: BinderInfo, domain: PExpr, body: PExpr) -> PExpr {
        PExpr::Pi { name, info, domain: Box::new(domain), body: Box::new(body) }
    }

    pub fn spine(&self) -> (&PExpr, Vec<&PExpr>) {
        let mut args = Vec::new();
        let mut e = self;
        while let PExpr::App(f, a) = e {
            args.push(a.as_ref());
            e = f;
        }
        args.reverse();
        (e, args)
    }

    fn replace_at(&self, depth: u32, f: &mut impl FnMut(&PExpr, u32) -> Option<PExpr>) -> PExpr {
        if let Some(r) = f(self, depth) {
            return r;
        }
        let b = |e: PExpr| Box::new(e);
        match self {
            PExpr::App(g, a) => PExpr::App(b(g.replace_at(depth, f)), b(a.replace_at(depth, f))),
            PExpr::Lam { name, info, domain, body } => PExpr::Lam {
                name: name.clone(),
                info: *info,
                domain: b(domain.replace_at(depth, f)),
                body: b(body.replace_at(depth + 1, f)),
            },
            PExpr::Pi { name, info, domain, body } => PExpr::Pi {
                name: name.clone(),
                info: *info,
                domain: b(domain.replace_at(depth, f)),
                body: b(body.replace_at(depth + 1, f)),
            },
            PExpr::Let { name, ty, value, body } => PExpr::Let {
                name: name.clone(),
                ty: b(ty.replace_at(depth, f)),
                value: b(value.replace_at(depth, f)),
                body: b(body.replace_at(depth + 1, f)),
            },
            PExpr::Typed(e, t) => PExpr::Typed(b(e.replace_at(depth, f)), b(t.replace_at(depth, f))),
            PExpr::Explicit(e) => PExpr::Explicit(b(e.replace_at(depth, f))),
            _ => self.clone(),
        }
    }

    /// Replaces the local `unique` by a bound variable (see
    /// [`KExpr::abstract_local`]).
    pub fn abstract_local(&self, unique: &Name) -> PExpr {
        self.replace_at(0, &mut |e, d| match e {
            PExpr::Local(l) if &l.unique == unique => Some(PExpr::Var(d)),
            PExpr::Var(i) if *i >= d => Some(PExpr::Var(i + 1)),
            PExpr::Elaborated(k) => Some(PExpr::Elaborated(k.abstract_local_at(unique, d))),
            _ => None,
        })
    }

    /// Substitutes `value` for the outermost loose variable.
    pub fn instantiate(&self, value: &KExpr) -> PExpr {
        self.replace_at(0, &mut |e, d| match e {
            PExpr::Var(i) if *i == d => Some(PExpr::Elaborated(value.lift(0, d))),
            PExpr::Var(i) if *i > d => Some(PExpr::Var(i - 1)),
            PExpr::Elaborated(k) => Some(PExpr::Elaborated(k.instantiate_at(value, d))),
            _ => None,
        })
    }
}

impl From<KExpr> for PExpr {
    fn from(k: KExpr) -> PExpr {
        PExpr::Elaborated(k)
    }
}
