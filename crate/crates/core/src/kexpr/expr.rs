use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use super::{Level, Name};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinderInfo {
    Default,
    Implicit,
    InstImplicit,
}

/// A free variable of the local context: unique name, display name, binder
/// info and type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalConst {
    pub unique: Name,
    pub pretty: Name,
    pub info: BinderInfo,
    pub ty: KExpr,
}

/// Kernel expressions. Bound variables are de Bruijn indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum KExpr {
    Var(u32),
    Sort(Level),
    Const(Name, Vec<Level>),
    MVar(Name, Arc<KExpr>),
    Local(Arc<LocalConst>),
    App(Arc<KExpr>, Arc<KExpr>),
    Lam {
        name: Name,
        info: BinderInfo,
        domain: Arc<KExpr>,
        body: Arc<KExpr>,
    },
    Pi {
        name: Name,
        info: BinderInfo,
        domain: Arc<KExpr>,
        body: Arc<KExpr>,
    },
    Let {
        name: Name,
        ty: Arc<KExpr>,
        value: Arc<KExpr>,
        body: Arc<KExpr>,
    },
}

static FRESH: AtomicU64 = AtomicU64::new(1);

/// Process-wide fresh name under `prefix`; used for internal placeholders.
pub fn fresh_name(prefix: &str) -> Name {
    Name::from(prefix).with_num(FRESH.fetch_add(1, Ordering::Relaxed))
}

impl KExpr {
    pub fn constant(name: impl Into<Name>) -> KExpr {
        KExpr::Const(name.into(), Vec::new())
    }

    pub fn app(f: KExpr, a: KExpr) -> KExpr {
        KExpr::App(Arc::new(f), Arc::new(a))
    }

    pub fn apps(f: KExpr, args: impl IntoIterator<Item = KExpr>) -> KExpr {
        args.into_iter().fold(f, KExpr::app)
    }

    pub fn local(l: LocalConst) -> KExpr {
        KExpr::Local(Arc::new(l))
    }

    pub fn lam(name: Name, info: BinderInfo, domain: KExpr, body: KExpr) -> KExpr {
        KExpr::Lam { name, info, domain: Arc::new(domain), body: Arc::new(body) }
    }

    pub fn pi(name: Name, info: BinderInfo, domain: KExpr, body: KExpr) -> KExpr {
        KExpr::Pi { name, info, domain: Arc::new(domain), body: Arc::new(body) }
    }

    pub fn elet(name: Name, ty: KExpr, value: KExpr, body: KExpr) -> KExpr {
        KExpr::Let { name, ty: Arc::new(ty), value: Arc::new(value), body: Arc::new(body) }
    }

    pub fn prop() -> KExpr {
        KExpr::Sort(Level::Zero)
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&KExpr, Vec<&KExpr>) {
        let mut args = Vec::new();
        let mut e = self;
        while let KExpr::App(f, a) = e {
            args.push(a.as_ref());
            e = f;
        }
        args.reverse();
        (e, args)
    }

    pub fn const_name(&self) -> Option<&Name> {
        match self {
            KExpr::Const(n, _) => Some(n),
            _ => None,
        }
    }

    pub fn is_const_named(&self, s: &str) -> bool {
        matches!(self, KExpr::Const(n, _) if n.is_str(s))
    }

    /// One past the largest loose de Bruijn index, 0 for closed terms.
    pub fn loose_bvar_range(&self) -> u32 {
        match self {
            KExpr::Var(i) => i + 1,
            KExpr::Sort(_) | KExpr::Const(..) => 0,
            KExpr::MVar(_, t) => t.loose_bvar_range(),
            KExpr::Local(l) => l.ty.loose_bvar_range(),
            KExpr::App(f, a) => f.loose_bvar_range().max(a.loose_bvar_range()),
            KExpr::Lam { domain, body, .. } | KExpr::Pi { domain, body, .. } => {
                domain.loose_bvar_range().max(body.loose_bvar_range().saturating_sub(1))
            }
            KExpr::Let { ty, value, body, .. } => ty
                .loose_bvar_range()
                .max(value.loose_bvar_range())
                .max(body.loose_bvar_range().saturating_sub(1)),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.loose_bvar_range() == 0
    }

    pub fn has_loose_bvar(&self, idx: u32) -> bool {
        match self {
            KExpr::Var(i) => *i == idx,
            KExpr::Sort(_) | KExpr::Const(..) => false,
            KExpr::MVar(_, t) => t.has_loose_bvar(idx),
            KExpr::Local(l) => l.ty.has_loose_bvar(idx),
            KExpr::App(f, a) => f.has_loose_bvar(idx) || a.has_loose_bvar(idx),
            KExpr::Lam { domain, body, .. } | KExpr::Pi { domain, body, .. } => {
                domain.has_loose_bvar(idx) || body.has_loose_bvar(idx + 1)
            }
            KExpr::Let { ty, value, body, .. } => {
                ty.has_loose_bvar(idx) || value.has_loose_bvar(idx) || body.has_loose_bvar(idx + 1)
            }
        }
    }

    /// Rebuilds the tree bottom-up. `f` sees each node with its binder depth
    /// and may replace it outright by returning `Some`.
    pub fn replace(&self, f: &mut impl FnMut(&KExpr, u32) -> Option<KExpr>) -> KExpr {
        self.replace_at(0, f)
    }

    fn replace_at(&self, depth: u32, f: &mut impl FnMut(&KExpr, u32) -> Option<KExpr>) -> KExpr {
        if let Some(r) = f(self, depth) {
            return r;
        }
        match self {
            KExpr::Var(_) | KExpr::Sort(_) | KExpr::Const(..) => self.clone(),
            KExpr::MVar(n, t) => KExpr::MVar(n.clone(), Arc::new(t.replace_at(depth, f))),
            KExpr::Local(_) => self.clone(),
            KExpr::App(g, a) => KExpr::app(g.replace_at(depth, f), a.replace_at(depth, f)),
            KExpr::Lam { name, info, domain, body } => KExpr::lam(
                name.clone(),
                *info,
                domain.replace_at(depth, f),
                body.replace_at(depth + 1, f),
            ),
            KExpr::Pi { name, info, domain, body } => KExpr::pi(
                name.clone(),
                *info,
                domain.replace_at(depth, f),
                body.replace_at(depth + 1, f),
            ),
            KExpr::Let { name, ty, value, body } => KExpr::elet(
                name.clone(),
                ty.replace_at(depth, f),
                value.replace_at(depth, f),
                body.replace_at(depth + 1, f),
            ),
        }
    }

    /// Shifts loose variables at or above `cutoff` by `amount`.
    pub fn lift(&self, cutoff: u32, amount: u32) -> KExpr {
        if amount == 0 || self.loose_bvar_range() <= cutoff {
            return self.clone();
        }
        self.replace(&mut |e, d| match e {
            KExpr::Var(i) if *i >= cutoff + d => Some(KExpr::Var(i + amount)),
            _ => None,
        })
    }

    /// Substitutes `value` for `Var(0)` in a binder body, lowering deeper
    /// indices by one.
    pub fn instantiate(&self, value: &KExpr) -> KExpr {
        self.instantiate_at(value, 0)
    }

    /// [`KExpr::instantiate`] for a body sitting under `offset` further
    /// binders.
    pub fn instantiate_at(&self, value: &KExpr, offset: u32) -> KExpr {
        if self.loose_bvar_range() <= offset {
            return self.clone();
        }
        self.replace(&mut |e, d| match e {
            KExpr::Var(i) if *i == d + offset => Some(value.lift(0, d + offset)),
            KExpr::Var(i) if *i > d + offset => Some(KExpr::Var(i - 1)),
            _ => None,
        })
    }

    /// Replaces the local with unique name `unique` by a fresh `Var(0)`,
    /// shifting existing loose variables up by one.
    pub fn abstract_local(&self, unique: &Name) -> KExpr {
        self.abstract_local_at(unique, 0)
    }

    pub fn abstract_local_at(&self, unique: &Name, offset: u32) -> KExpr {
        self.replace(&mut |e, d| match e {
            KExpr::Local(l) if &l.unique == unique => Some(KExpr::Var(d + offset)),
            KExpr::Var(i) if *i >= d + offset => Some(KExpr::Var(i + 1)),
            _ => None,
        })
    }

    pub fn instantiate_level_params(&self, subst: &HashMap<Name, Level>) -> KExpr {
        if subst.is_empty() {
            return self.clone();
        }
        self.replace(&mut |e, _| match e {
            KExpr::Sort(l) => Some(KExpr::Sort(l.instantiate(subst))),
            KExpr::Const(n, ls) => {
                Some(KExpr::Const(n.clone(), ls.iter().map(|l| l.instantiate(subst)).collect()))
            }
            KExpr::Local(l) => Some(KExpr::local(LocalConst {
                ty: l.ty.instantiate_level_params(subst),
                ..(**l).clone()
            })),
            _ => None,
        })
    }

    /// Locals occurring in the term, in first-occurrence order.
    pub fn locals(&self) -> Vec<Arc<LocalConst>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let KExpr::Local(l) = e {
                if seen.insert(l.unique.clone()) {
                    out.push(l.clone());
                }
            }
        });
        out
    }

    pub fn visit(&self, f: &mut impl FnMut(&KExpr)) {
        f(self);
        match self {
            KExpr::Var(_) | KExpr::Sort(_) | KExpr::Const(..) => {}
            KExpr::MVar(_, t) => t.visit(f),
            KExpr::Local(l) => l.ty.visit(f),
            KExpr::App(g, a) => {
                g.visit(f);
                a.visit(f);
            }
            KExpr::Lam { domain, body, .. } | KExpr::Pi { domain, body, .. } => {
                domain.visit(f);
                body.visit(f);
            }
            KExpr::Let { ty, value, body, .. } => {
                ty.visit(f);
                value.visit(f);
                body.visit(f);
            }
        }
    }

    /// Structural equality that ignores binder names and binder info.
    pub fn alpha_eq(&self, other: &KExpr) -> bool {
        match (self, other) {
            (KExpr::Sort(a), KExpr::Sort(b)) => a.equiv(b),
            (KExpr::Const(n, ls), KExpr::Const(m, ms)) => {
                n == m && ls.len() == ms.len() && ls.iter().zip(ms).all(|(a, b)| a.equiv(b))
            }
            (KExpr::Local(a), KExpr::Local(b)) => a.unique == b.unique,
            (KExpr::App(f, a), KExpr::App(g, b)) => f.alpha_eq(g) && a.alpha_eq(b),
            (
                KExpr::Lam { domain: d1, body: b1, .. },
                KExpr::Lam { domain: d2, body: b2, .. },
            )
            | (KExpr::Pi { domain: d1, body: b1, .. }, KExpr::Pi { domain: d2, body: b2, .. }) => {
                d1.alpha_eq(d2) && b1.alpha_eq(b2)
            }
            (
                KExpr::Let { ty: t1, value: v1, body: b1, .. },
                KExpr::Let { ty: t2, value: v2, body: b2, .. },
            ) => t1.alpha_eq(t2) && v1.alpha_eq(v2) && b1.alpha_eq(b2),
            _ => self == other,
        }
    }
}

/// Checks that every `Var(i)` sits under at least `i + 1` binders (given
/// `depth` enclosing binders) and that locals sharing a unique name agree.
pub fn check_scoping(e: &KExpr, depth: u32) -> Result<(), String> {
    if e.loose_bvar_range() > depth {
        return Err(format!("loose bound variable in {e:?}"));
    }
    let mut seen: HashMap<Name, Arc<LocalConst>> = HashMap::new();
    let mut err = None;
    e.visit(&mut |n| {
        if let KExpr::Local(l) = n {
            match seen.get(&l.unique) {
                Some(prev) if prev != l => {
                    err.get_or_insert_with(|| format!("conflicting locals named {}", l.unique));
                }
                Some(_) => {}
                None => {
                    seen.insert(l.unique.clone(), l.clone());
                }
            }
        }
    });
    err.map_or(Ok(()), Err)
}
