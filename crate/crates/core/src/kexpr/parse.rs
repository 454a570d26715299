//! Surface syntax for kernel terms.
//!
//! ```text
//! expr    ::= binder | arrow
//! binder  ::= ("fun" | "λ" | "Pi" | "forall" | "∀" | "exists" | "∃") group+ "," expr
//!           | "let" ident ":" expr ":=" expr "in" expr
//! group   ::= ident+ ":" expr                      -- only as the sole group
//!           | "(" ident+ ":" expr ")" | "{" ident+ ":" expr "}" | "[" ident+ ":" expr "]"
//! arrow   ::= and ("->" | "→") expr | and
//! and     ::= rel ("/\" | "∧") and | rel
//! rel     ::= sum (("<=" | "≤" | "<" | "=" | ">=" | "≥" | ">") sum)?
//! sum     ::= prod (("+" | "-") prod)*
//! prod    ::= unary (("*" | "/") unary)*
//! unary   ::= "-" unary | pow
//! pow     ::= app ("^" pow)?
//! app     ::= atom atom*
//! atom    ::= ident | "@" ident | numeral | decimal | "Prop" | "Type" | "Sort" level
//!           | "(" expr ")" | "(" expr ":" expr ")"
//! ```
//!
//! `a >= b` and `a > b` are read as `le b a` and `lt b a`; a decimal `d.ddd`
//! is read as the quotient of two numerals. Binder domains are mandatory.

use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use super::{BinderInfo, KExpr, Level, LocalContext, Name, Signature};
use crate::interpret::{elaborate, ElabError, InstanceTable, PExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier {name} at {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error(transparent)]
    Elab(#[from] ElabError),
}

/// Parses and elaborates `text`. Identifiers resolve to bound variables,
/// then signature constants, then locals of `ctx`.
pub fn parse_kexpr(
    text: &str,
    sig: &Signature,
    ctx: &LocalContext,
    expected: Option<&KExpr>,
) -> Result<KExpr, ParseError> {
    let p = parse_pexpr(text, sig, ctx)?;
    Ok(elaborate(&p, sig, &InstanceTable::builtin(), expected)?)
}

/// Parses without elaborating; implicit arguments are left out.
pub fn parse_pexpr(text: &str, sig: &Signature, ctx: &LocalContext) -> Result<PExpr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, sig, ctx, bound: Vec::new(), end: text.len() };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    Sym(&'static str),
}

const SYMBOLS: [(&str, &str); 30] = [
    ("->", "->"),
    ("→", "->"),
    ("/\\", "/\\"),
    ("∧", "/\\"),
    ("<=", "<="),
    ("≤", "<="),
    (">=", ">="),
    ("≥", ">="),
    (":=", ":="),
    ("λ", "fun"),
    ("∀", "forall"),
    ("Π", "Pi"),
    ("∃", "exists"),
    ("<", "<"),
    (">", ">"),
    ("=", "="),
    ("+", "+"),
    ("-", "-"),
    ("*", "*"),
    ("/", "/"),
    ("^", "^"),
    ("(", "("),
    (")", ")"),
    ("{", "{"),
    ("}", "}"),
    ("[", "["),
    ("]", "]"),
    (",", ","),
    (":", ":"),
    ("@", "@"),
];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut i = 0;
    let bytes = text.as_bytes();
    'outer: while i < text.len() {
        let rest = &text[i..];
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = i;
            while j < text.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j + 1 < text.len() && bytes[j] == b'.' && bytes[j + 1].is_ascii_digit() {
                j += 1;
                while j < text.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
            }
            out.push((i, Tok::Num(text[i..j].to_string())));
            i = j;
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut j = i;
            for ch in rest.chars() {
                if ch.is_alphanumeric() || ch == '_' || ch == '\'' || ch == '.' {
                    j += ch.len_utf8();
                } else {
                    break;
                }
            }
            let word = text[i..j].trim_end_matches('.');
            let j = i + word.len();
            // unicode letters that are also notation
            match word {
                "λ" | "Π" => {}
                _ => {
                    let word = match word {
                        "ℝ" => "real",
                        "ℤ" => "int",
                        "ℕ" => "nat",
                        w => w,
                    };
                    out.push((i, Tok::Ident(word.to_string())));
                    i = j;
                    continue;
                }
            }
        }
        for (s, canon) in SYMBOLS {
            if rest.starts_with(s) {
                out.push((i, if canon.chars().all(char::is_alphabetic) { Tok::Ident(canon.into()) } else { Tok::Sym(canon) }));
                i += s.len();
                continue 'outer;
            }
        }
        return Err(ParseError::Syntax { pos: i, msg: format!("unexpected character {c:?}") });
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    sig: &'a Signature,
    ctx: &'a LocalContext,
    /// Names of enclosing binders, innermost last.
    bound: Vec<Option<String>>,
    end: usize,
}

fn op(name: &str, args: impl IntoIterator<Item = PExpr>) -> PExpr {
    PExpr::apps(PExpr::constant(name), args)
}

const KEYWORDS: [&str; 12] = ["fun", "Pi", "forall", "exists", "let", "in", "Prop", "Type", "Sort", "max", "λ", "∀"];

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { pos: self.here(), msg: msg.into() }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn is_kw(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err("expected identifier")),
        }
    }

    fn expr(&mut self) -> Result<PExpr, ParseError> {
        for kw in ["fun", "Pi", "forall", "exists"] {
            if self.is_kw(kw) {
                self.pos += 1;
                return self.binder(kw);
            }
        }
        if self.is_kw("let") {
            self.pos += 1;
            let name = self.ident()?;
            self.expect_sym(":")?;
            let ty = self.expr()?;
            self.expect_sym(":=")?;
            let value = self.expr()?;
            if !self.is_kw("in") {
                return Err(self.err("expected `in`"));
            }
            self.pos += 1;
            self.bound.push(Some(name.clone()));
            let body = self.expr();
            self.bound.pop();
            return Ok(PExpr::Let {
                name: Name::parse(&name).map_err(|e| self.err(e.to_string()))?,
                ty: Box::new(ty),
                value: Box::new(value),
                body: Box::new(body?),
            });
        }
        self.arrow()
    }

    fn binder(&mut self, kw: &str) -> Result<PExpr, ParseError> {
        // collect (name, info, domain) triples, domains parsed in scope
        let mut groups: Vec<(Vec<String>, BinderInfo, PExpr)> = Vec::new();
        let start = self.bound.len();
        let mut fail = None;
        loop {
            let (close, info) = if self.eat_sym("(") {
                (Some(")"), BinderInfo::Default)
            } else if self.eat_sym("{") {
                (Some("}"), BinderInfo::Implicit)
            } else if self.eat_sym("[") {
                (Some("]"), BinderInfo::InstImplicit)
            } else {
                (None, BinderInfo::Default)
            };
            let mut names = Vec::new();
            while let Some(Tok::Ident(s)) = self.peek() {
                if KEYWORDS.contains(&s.as_str()) {
                    break;
                }
                names.push(self.ident()?);
            }
            if names.is_empty() {
                fail = Some(self.err("expected binder name"));
                break;
            }
            if !self.eat_sym(":") {
                fail = Some(self.err("binder needs a type annotation `x : T`"));
                break;
            }
            let dom = match self.expr() {
                Ok(d) => d,
                Err(e) => {
                    fail = Some(e);
                    break;
                }
            };
            for n in &names {
                self.bound.push(Some(n.clone()));
            }
            groups.push((names, info, dom));
            match close {
                Some(c) => {
                    if let Err(e) = self.expect_sym(c) {
                        fail = Some(e);
                        break;
                    }
                    if self.is_sym("(") || self.is_sym("{") || self.is_sym("[") {
                        continue;
                    }
                    break;
                }
                None => break,
            }
        }
        let body = match fail {
            Some(e) => Err(e),
            None => self.expect_sym(",").and_then(|_| self.expr()),
        };
        self.bound.truncate(start);
        let mut body = body?;
        // Each name in a group shares the group's domain; later names see
        // earlier ones, so the domain is lifted per position.
        let mut binders = Vec::new();
        for (names, info, dom) in groups {
            for (k, n) in names.into_iter().enumerate() {
                binders.push((n, info, lift_p(&dom, k as u32)));
            }
        }
        for (n, info, dom) in binders.into_iter().rev() {
            let name = Name::parse(&n).map_err(|e| self.err(e.to_string()))?;
            body = match kw {
                "fun" => PExpr::lam(name, info, dom, body),
                "exists" => op("exists", [PExpr::lam(name, info, dom, body)]),
                _ => PExpr::pi(name, info, dom, body),
            };
        }
        Ok(body)
    }

    fn arrow(&mut self) -> Result<PExpr, ParseError> {
        let lhs = self.and()?;
        if self.eat_sym("->") {
            self.bound.push(None);
            let rhs = self.expr();
            self.bound.pop();
            return Ok(PExpr::pi("_".into(), BinderInfo::Default, lhs, rhs?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<PExpr, ParseError> {
        let lhs = self.rel()?;
        if self.eat_sym("/\\") {
            let rhs = self.and()?;
            return Ok(op("and", [lhs, rhs]));
        }
        Ok(lhs)
    }

    fn rel(&mut self) -> Result<PExpr, ParseError> {
        let lhs = self.sum()?;
        for (s, name, flip) in [("<=", "le", false), ("<", "lt", false), ("=", "eq", false), (">=", "le", true), (">", "lt", true)] {
            if self.eat_sym(s) {
                let rhs = self.sum()?;
                let (a, b) = if flip { (rhs, lhs) } else { (lhs, rhs) };
                return Ok(op(name, [a, b]));
            }
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> Result<PExpr, ParseError> {
        let mut lhs = self.prod()?;
        loop {
            if self.eat_sym("+") {
                lhs = op("add", [lhs, self.prod()?]);
            } else if self.eat_sym("-") {
                lhs = op("sub", [lhs, self.prod()?]);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn prod(&mut self) -> Result<PExpr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat_sym("*") {
                lhs = op("mul", [lhs, self.unary()?]);
            } else if self.eat_sym("/") {
                lhs = op("div", [lhs, self.unary()?]);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<PExpr, ParseError> {
        if self.eat_sym("-") {
            return Ok(op("neg", [self.unary()?]));
        }
        self.pow()
    }

    fn pow(&mut self) -> Result<PExpr, ParseError> {
        let base = self.app()?;
        if self.eat_sym("^") {
            let exp = self.pow()?;
            return Ok(op("pow_nat", [base, exp]));
        }
        Ok(base)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Some(Tok::Num(_)) => true,
            Some(Tok::Ident(s)) => !matches!(s.as_str(), "fun" | "Pi" | "forall" | "exists" | "let" | "in" | "max"),
            Some(Tok::Sym(s)) => matches!(*s, "(" | "@"),
            None => false,
        }
    }

    fn app(&mut self) -> Result<PExpr, ParseError> {
        let mut f = self.atom()?;
        while self.starts_atom() {
            f = PExpr::app(f, self.atom()?);
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<PExpr, ParseError> {
        let pos = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                Ok(numeral_text(&s))
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.eat_sym(":") {
                    let t = self.expr()?;
                    self.expect_sym(")")?;
                    return Ok(PExpr::Typed(Box::new(e), Box::new(t)));
                }
                self.expect_sym(")")?;
                Ok(e)
            }
            Some(Tok::Sym("@")) => {
                self.pos += 1;
                let name = self.ident()?;
                let c = self.resolve(&name, pos)?;
                Ok(PExpr::Explicit(Box::new(c)))
            }
            Some(Tok::Ident(s)) if s == "Prop" => {
                self.pos += 1;
                Ok(PExpr::Sort(Level::Zero))
            }
            Some(Tok::Ident(s)) if s == "Type" => {
                self.pos += 1;
                Ok(PExpr::Sort(Level::of_nat(1)))
            }
            Some(Tok::Ident(s)) if s == "Sort" => {
                self.pos += 1;
                Ok(PExpr::Sort(self.level_atom()?))
            }
            Some(Tok::Ident(_)) => {
                let name = self.ident()?;
                self.resolve(&name, pos)
            }
            _ => Err(self.err("expected an expression")),
        }
    }

    fn level_atom(&mut self) -> Result<Level, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                s.parse::<u32>().map(Level::of_nat).map_err(|_| self.err("bad universe level"))
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let l = self.level()?;
                self.expect_sym(")")?;
                Ok(l)
            }
            Some(Tok::Ident(s)) if s == "max" => {
                self.pos += 1;
                self.expect_sym("(")?;
                let a = self.level()?;
                self.expect_sym(",")?;
                let b = self.level()?;
                self.expect_sym(")")?;
                Ok(Level::max(a, b))
            }
            Some(Tok::Ident(_)) => {
                let n = self.ident()?;
                Ok(Level::Param(Name::parse(&n).map_err(|e| self.err(e.to_string()))?))
            }
            _ => Err(self.err("expected a universe level")),
        }
    }

    fn level(&mut self) -> Result<Level, ParseError> {
        let mut l = self.level_atom()?;
        while self.eat_sym("+") {
            match self.peek().cloned() {
                Some(Tok::Num(s)) => {
                    self.pos += 1;
                    let k: u32 = s.parse().map_err(|_| self.err("bad universe level"))?;
                    for _ in 0..k {
                        l = l.succ();
                    }
                }
                _ => return Err(self.err("expected a numeral after `+`")),
            }
        }
        Ok(l)
    }

    fn resolve(&self, name: &str, pos: usize) -> Result<PExpr, ParseError> {
        if let Some(i) = self.bound.iter().rev().position(|b| b.as_deref() == Some(name)) {
            return Ok(PExpr::Var(i as u32));
        }
        let unknown = || ParseError::UnknownIdentifier { pos, name: name.to_string() };
        let n = Name::parse(name).map_err(|_| unknown())?;
        if self.sig.contains(&n) {
            return Ok(PExpr::Const(n, Vec::new()));
        }
        if let Some(l) = self.ctx.lookup(name) {
            return Ok(PExpr::Local(Arc::clone(l)));
        }
        Err(unknown())
    }
}

fn numeral_text(s: &str) -> PExpr {
    match s.split_once('.') {
        None => PExpr::numeral(&s.parse::<BigUint>().expect("lexer yields digits")),
        Some((int, frac)) => {
            let num: BigUint = format!("{int}{frac}").parse().expect("lexer yields digits");
            let den = BigUint::from(10u8).pow(frac.len() as u32);
            op("div", [PExpr::numeral(&num), PExpr::numeral(&den)])
        }
    }
}

fn lift_p(p: &PExpr, k: u32) -> PExpr {
    if k == 0 {
        return p.clone();
    }
    // shift loose variables; binder-group domains only mention outer scope
    fn go(p: &PExpr, depth: u32, k: u32) -> PExpr {
        let b = |e: PExpr| Box::new(e);
        match p {
            PExpr::Var(i) if *i >= depth => PExpr::Var(i + k),
            PExpr::App(f, a) => PExpr::App(b(go(f, depth, k)), b(go(a, depth, k))),
            PExpr::Lam { name, info, domain, body } => PExpr::Lam {
                name: name.clone(),
                info: *info,
                domain: b(go(domain, depth, k)),
                body: b(go(body, depth + 1, k)),
            },
            PExpr::Pi { name, info, domain, body } => PExpr::Pi {
                name: name.clone(),
                info: *info,
                domain: b(go(domain, depth, k)),
                body: b(go(body, depth + 1, k)),
            },
            PExpr::Let { name, ty, value, body } => PExpr::Let {
                name: name.clone(),
                ty: b(go(ty, depth, k)),
                value: b(go(value, depth, k)),
                body: b(go(body, depth + 1, k)),
            },
            PExpr::Typed(e, t) => PExpr::Typed(b(go(e, depth, k)), b(go(t, depth, k))),
            PExpr::Explicit(e) => PExpr::Explicit(b(go(e, depth, k))),
            PExpr::Elaborated(e) => PExpr::Elaborated(e.lift(depth, k)),
            other => other.clone(),
        }
    }
    go(p, 0, k)
}
