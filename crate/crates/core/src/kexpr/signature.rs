use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{BinderInfo, KExpr, Level, Name};

#[derive(Debug, Clone, PartialEq)]
pub struct Declaration {
    pub name: Name,
    pub univ_params: Vec<Name>,
    pub ty: KExpr,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("type of {0} is not closed")]
    OpenType(Name),
    #[error("{0} is a built-in and cannot be redeclared")]
    Builtin(Name),
}

/// Carrier types that every arithmetic class has instances for.
pub const BASE_TYPES: [&str; 3] = ["real", "int", "nat"];

/// Type classes of the built-in arithmetic, paired with the operation they
/// serve.
pub const CLASSES: [&str; 10] = [
    "has_add",
    "has_mul",
    "has_sub",
    "has_div",
    "has_neg",
    "has_pow_nat",
    "has_le",
    "has_lt",
    "has_zero",
    "has_one",
];

/// The global environment: constant names with their types.
#[derive(Debug, Clone)]
pub struct Signature {
    decls: BTreeMap<Name, Declaration>,
    builtin: BTreeSet<Name>,
}

fn ty_u() -> KExpr {
    KExpr::Sort(Level::Param("u".into()).succ())
}

fn sort_u() -> KExpr {
    KExpr::Sort(Level::Param("u".into()))
}

fn class_app(class: &str, arg: KExpr) -> KExpr {
    KExpr::app(KExpr::Const(class.into(), vec![Level::Param("u".into())]), arg)
}

fn arrow(a: KExpr, b: KExpr) -> KExpr {
    KExpr::pi("_".into(), BinderInfo::Default, a, b.lift(0, 1))
}

/// `Π {A : Type u} [s : class A], rest` where `rest` is built with `Var(0)`
/// standing for `A` (the instance binder is accounted for here).
fn generic_op(classes: &[&str], rest: impl Fn(KExpr) -> KExpr) -> KExpr {
    // inside the instance binders A is Var(classes.len())
    let a = KExpr::Var(classes.len() as u32);
    let mut body = rest(a);
    for (i, class) in classes.iter().enumerate().rev() {
        body = KExpr::pi("s".into(), BinderInfo::InstImplicit, class_app(class, KExpr::Var(i as u32)), body);
    }
    KExpr::pi("A".into(), BinderInfo::Implicit, ty_u(), body)
}

impl Signature {
    pub fn builtin() -> Signature {
        let mut sig = Signature { decls: BTreeMap::new(), builtin: BTreeSet::new() };
        let u = vec![Name::from("u")];
        let type0 = KExpr::Sort(Level::of_nat(1));
        let prop = KExpr::prop();

        for t in BASE_TYPES {
            sig.insert(t, vec![], type0.clone());
        }
        sig.insert("Prop", vec![], type0.clone());

        for class in CLASSES {
            sig.insert(
                class,
                u.clone(),
                KExpr::pi("A".into(), BinderInfo::Default, ty_u(), ty_u()),
            );
            for t in BASE_TYPES {
                sig.insert(
                    &format!("{t}.{class}"),
                    vec![],
                    KExpr::app(KExpr::Const(class.into(), vec![Level::Zero]), KExpr::constant(t)),
                );
            }
        }

        let binop = |a: KExpr| arrow(a.clone(), arrow(a.clone(), a));
        for (op, class) in [("add", "has_add"), ("mul", "has_mul"), ("sub", "has_sub"), ("div", "has_div")] {
            sig.insert(op, u.clone(), generic_op(&[class], binop));
        }
        sig.insert("neg", u.clone(), generic_op(&["has_neg"], |a| arrow(a.clone(), a)));
        sig.insert(
            "pow_nat",
            u.clone(),
            generic_op(&["has_pow_nat"], |a| arrow(a.clone(), arrow(KExpr::constant("nat"), a))),
        );
        for (op, class) in [("le", "has_le"), ("lt", "has_lt")] {
            sig.insert(op, u.clone(), generic_op(&[class], |a| arrow(a.clone(), arrow(a, KExpr::prop()))));
        }
        sig.insert("zero", u.clone(), generic_op(&["has_zero"], |a| a));
        sig.insert("one", u.clone(), generic_op(&["has_one"], |a| a));
        sig.insert("bit0", u.clone(), generic_op(&["has_add"], |a| arrow(a.clone(), a)));
        sig.insert("bit1", u.clone(), generic_op(&["has_add", "has_one"], |a| arrow(a.clone(), a)));

        // eq.{u} : Π {A : Sort u}, A → A → Prop
        sig.insert(
            "eq",
            u.clone(),
            KExpr::pi(
                "A".into(),
                BinderInfo::Implicit,
                sort_u(),
                arrow(KExpr::Var(0), arrow(KExpr::Var(0), prop.clone())),
            ),
        );
        // exists.{u} : Π {A : Sort u}, (A → Prop) → Prop
        sig.insert(
            "exists",
            u.clone(),
            KExpr::pi(
                "A".into(),
                BinderInfo::Implicit,
                sort_u(),
                arrow(arrow(KExpr::Var(0), prop.clone()), prop.clone()),
            ),
        );
        sig.insert("and", vec![], arrow(prop.clone(), arrow(prop.clone(), prop.clone())));
        sig.insert("false", vec![], prop);
        sig.builtin = sig.decls.keys().cloned().collect();
        sig
    }

    fn insert(&mut self, name: &str, univ_params: Vec<Name>, ty: KExpr) {
        let name = Name::from(name);
        debug_assert!(ty.is_closed(), "open built-in type for {name}");
        self.decls.insert(name.clone(), Declaration { name, univ_params, ty });
    }

    pub fn is_builtin(&self, name: &Name) -> bool {
        self.builtin.contains(name)
    }

    /// Adds a user constant. Built-in names cannot be shadowed.
    pub fn declare(&mut self, name: Name, univ_params: Vec<Name>, ty: KExpr) -> Result<(), SignatureError> {
        if !ty.is_closed() {
            return Err(SignatureError::OpenType(name));
        }
        if self.is_builtin(&name) {
            return Err(SignatureError::Builtin(name));
        }
        self.decls.insert(name.clone(), Declaration { name, univ_params, ty });
        Ok(())
    }

    pub fn get(&self, name: &Name) -> Option<&Declaration> {
        self.decls.get(name)
    }

    pub fn contains(&self, name: &Name) -> bool {
        self.decls.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Declaration> {
        self.decls.values()
    }

    /// Binder infos of the leading Pi binders of a constant's type.
    pub fn binder_infos(&self, name: &Name) -> Vec<BinderInfo> {
        let mut out = Vec::new();
        if let Some(d) = self.get(name) {
            let mut t = &d.ty;
            while let KExpr::Pi { info, body, .. } = t {
                out.push(*info);
                t = body;
            }
        }
        out
    }

    /// Number of leading implicit or instance binders.
    pub fn implicit_prefix(&self, name: &Name) -> usize {
        self.binder_infos(name)
            .iter()
            .take_while(|i| **i != BinderInfo::Default)
            .count()
    }
}

impl Default for Signature {
    fn default() -> Self {
        Signature::builtin()
    }
}

/// Shorthand for building non-dependent function types in user declarations.
pub fn arrow_type(domains: impl IntoIterator<Item = KExpr>, codomain: KExpr) -> KExpr {
    let domains: Vec<KExpr> = domains.into_iter().collect();
    domains.into_iter().rev().fold(codomain, |acc, d| arrow(d, acc))
}
