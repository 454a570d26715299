use std::collections::HashSet;
use std::sync::OnceLock;

use super::{decode_numeral, BinderInfo, KExpr, Level, NamePart, Signature};

const BINDER: u8 = 0;
const ARROW: u8 = 1;
const AND: u8 = 2;
const REL: u8 = 3;
const ADD: u8 = 4;
const MUL: u8 = 5;
const NEG: u8 = 6;
const POW: u8 = 7;
const APP: u8 = 8;
const ATOM: u8 = 9;

fn builtin() -> &'static Signature {
    static SIG: OnceLock<Signature> = OnceLock::new();
    SIG.get_or_init(Signature::builtin)
}

/// Surface syntax against the built-in signature.
pub fn print_kexpr(e: &KExpr) -> String {
    print_kexpr_in(e, builtin())
}

/// Surface syntax; implicit arguments of constants declared in `sig` are
/// hidden and arithmetic is shown with infix notation. Loose bound
/// variables print as `#i`.
pub fn print_kexpr_in(e: &KExpr, sig: &Signature) -> String {
    Printer { sig, names: Vec::new() }.pp(e, BINDER)
}

struct Printer<'a> {
    sig: &'a Signature,
    names: Vec<String>,
}

const RESERVED: [&str; 12] = ["fun", "Pi", "forall", "exists", "let", "in", "Prop", "Type", "Sort", "max", "λ", "_"];

impl Printer<'_> {
    fn pp(&mut self, e: &KExpr, prec: u8) -> String {
        let (s, level) = self.render(e);
        if level < prec {
            format!("({s})")
        } else {
            s
        }
    }

    fn fresh(&self, hint: &super::Name, body: &KExpr) -> String {
        let base = match hint.parts().first() {
            Some(NamePart::Str(_)) if !RESERVED.contains(&hint.to_string().as_str()) => hint.to_string(),
            _ => "x".to_string(),
        };
        let taken: HashSet<String> = body.locals().iter().map(|l| l.pretty.to_string()).collect();
        let clash = |n: &str| {
            self.names.iter().any(|m| m == n)
                || taken.contains(n)
                || super::Name::parse(n).is_ok_and(|n| self.sig.contains(&n))
        };
        if !clash(&base) {
            return base;
        }
        (1..).map(|k| format!("{base}{k}")).find(|n| !clash(n)).unwrap()
    }

    fn render(&mut self, e: &KExpr) -> (String, u8) {
        match e {
            KExpr::Var(i) => {
                let n = self.names.len();
                match self.names.get(n.wrapping_sub(1 + *i as usize)) {
                    Some(s) if (*i as usize) < n => (s.clone(), ATOM),
                    _ => (format!("#{i}"), ATOM),
                }
            }
            KExpr::Sort(l) => match l.as_numeral() {
                Some(0) => ("Prop".into(), ATOM),
                Some(1) => ("Type".into(), ATOM),
                Some(n) => (format!("Sort {n}"), APP),
                None => match l {
                    Level::Param(p) => (format!("Sort {p}"), APP),
                    _ => (format!("Sort ({l})"), APP),
                },
            },
            KExpr::Const(n, _) => {
                if self.sig.implicit_prefix(n) > 0 && decode_numeral(e).is_err() {
                    (format!("@{n}"), ATOM)
                } else if decode_numeral(e).is_ok() {
                    (decode_numeral(e).unwrap().to_string(), ATOM)
                } else {
                    (n.to_string(), ATOM)
                }
            }
            KExpr::MVar(n, _) => (format!("?{n}"), ATOM),
            KExpr::Local(l) => (l.pretty.to_string(), ATOM),
            KExpr::App(..) => self.render_app(e),
            KExpr::Lam { name, info, domain, body } => {
                let x = self.fresh(name, body);
                let d = self.pp(domain, ARROW);
                self.names.push(x.clone());
                let b = self.pp(body, BINDER);
                self.names.pop();
                (format!("fun {}, {b}", group(&x, *info, &d)), BINDER)
            }
            KExpr::Pi { name, info, domain, body } => {
                if name.is_str("_") && *info == BinderInfo::Default && !body.has_loose_bvar(0) {
                    let d = self.pp(domain, AND);
                    self.names.push("_".into());
                    let b = self.pp(body, ARROW);
                    self.names.pop();
                    return (format!("{d} -> {b}"), ARROW);
                }
                let x = self.fresh(name, body);
                let d = self.pp(domain, ARROW);
                self.names.push(x.clone());
                let b = self.pp(body, BINDER);
                self.names.pop();
                (format!("Pi {}, {b}", group(&x, *info, &d)), BINDER)
            }
            KExpr::Let { name, ty, value, body } => {
                let x = self.fresh(name, body);
                let t = self.pp(ty, ARROW);
                let v = self.pp(value, ARROW);
                self.names.push(x.clone());
                let b = self.pp(body, BINDER);
                self.names.pop();
                (format!("let {x} : {t} := {v} in {b}"), BINDER)
            }
        }
    }

    fn render_app(&mut self, e: &KExpr) -> (String, u8) {
        if let Ok(n) = decode_numeral(e) {
            return (n.to_string(), ATOM);
        }
        let (head, args) = e.spine();
        let KExpr::Const(c, _) = head else {
            let mut s = self.pp(head, APP);
            for a in args {
                s.push(' ');
                s.push_str(&self.pp(a, ATOM));
            }
            return (s, APP);
        };
        let k = self.sig.implicit_prefix(c);
        if args.len() < k {
            let mut s = format!("@{c}");
            for a in args {
                s.push(' ');
                s.push_str(&self.pp(a, ATOM));
            }
            return (s, APP);
        }
        let explicit = &args[k..];
        let op = match c.parts() {
            [NamePart::Str(s)] => s.as_str(),
            _ => "",
        };
        let infix = |this: &mut Self, sym: &str, l: u8, r: u8, level: u8| {
            let a = this.pp(explicit[0], l);
            let b = this.pp(explicit[1], r);
            (format!("{a} {sym} {b}"), level)
        };
        match (op, explicit.len()) {
            ("add", 2) => infix(self, "+", ADD, MUL, ADD),
            ("sub", 2) => infix(self, "-", ADD, MUL, ADD),
            ("mul", 2) => infix(self, "*", MUL, NEG, MUL),
            ("div", 2) => infix(self, "/", MUL, NEG, MUL),
            ("le", 2) => infix(self, "<=", ADD, ADD, REL),
            ("lt", 2) => infix(self, "<", ADD, ADD, REL),
            ("eq", 2) => infix(self, "=", ADD, ADD, REL),
            ("and", 2) => infix(self, "/\\", REL, AND, AND),
            ("neg", 1) => (format!("-{}", self.pp(explicit[0], POW)), NEG),
            ("pow_nat", 2) => {
                let a = self.pp(explicit[0], APP);
                let b = self.pp(explicit[1], POW);
                (format!("{a}^{b}"), POW)
            }
            ("exists", 1) if matches!(explicit[0], KExpr::Lam { info: BinderInfo::Default, .. }) => {
                let KExpr::Lam { name, domain, body, .. } = explicit[0] else { unreachable!() };
                let x = self.fresh(name, body);
                let d = self.pp(domain, ARROW);
                self.names.push(x.clone());
                let b = self.pp(body, BINDER);
                self.names.pop();
                (format!("exists {x} : {d}, {b}"), BINDER)
            }
            (_, 0) => (c.to_string(), ATOM),
            _ => {
                let mut s = c.to_string();
                for a in explicit {
                    s.push(' ');
                    s.push_str(&self.pp(a, ATOM));
                }
                (s, APP)
            }
        }
    }
}

fn group(x: &str, info: BinderInfo, d: &str) -> String {
    match info {
        BinderInfo::Default => format!("{x} : {d}"),
        BinderInfo::Implicit => format!("{{{x} : {d}}}"),
        BinderInfo::InstImplicit => format!("[{x} : {d}]"),
    }
}
