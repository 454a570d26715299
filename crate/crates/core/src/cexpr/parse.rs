//! FullForm reader.
//!
//! Besides `head[args]`, strings, integers and decimals it accepts `{a, b}`
//! for `List`, blanks (`x_`, `x_h`, `_`), a leading `-` on literals, and the
//! infix forms needed for definitions and commands, loosest first:
//! `;` `=` `:=` `//` `/.` `->` `:>` `/;`. Comments are `(* ... *)`.

use num_bigint::BigInt;
use thiserror::Error;

use super::{CExpr, MReal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("FullForm syntax error at {pos}: {msg}")]
pub struct FullFormError {
    pub pos: usize,
    pub msg: String,
}

pub fn parse_fullform(text: &str) -> Result<CExpr, FullFormError> {
    let mut p = Reader { src: text, pos: 0 };
    let e = p.compound()?;
    p.skip_ws()?;
    if p.pos < text.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// A sequence of top-level expressions, e.g. a rule file.
pub fn parse_fullform_many(text: &str) -> Result<Vec<CExpr>, FullFormError> {
    let mut p = Reader { src: text, pos: 0 };
    let mut out = Vec::new();
    loop {
        p.skip_ws()?;
        if p.pos >= text.len() {
            return Ok(out);
        }
        out.push(p.compound()?);
    }
}

struct Reader<'a> {
    src: &'a str,
    pos: usize,
}

fn is_sym_start(c: char) -> bool {
    c.is_alphabetic() || c == '$'
}

fn is_sym_char(c: char) -> bool {
    c.is_alphanumeric() || c == '$'
}

impl Reader<'_> {
    fn err(&self, msg: impl Into<String>) -> FullFormError {
        FullFormError { pos: self.pos, msg: msg.into() }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) -> Result<(), FullFormError> {
        loop {
            let r = self.rest();
            let trimmed = r.trim_start();
            self.pos += r.len() - trimmed.len();
            if self.rest().starts_with("(*") {
                let start = self.pos;
                match self.rest()[2..].find("*)") {
                    Some(i) => self.pos += i + 4,
                    None => return Err(FullFormError { pos: start, msg: "unterminated comment".into() }),
                }
            } else {
                return Ok(());
            }
        }
    }

    fn eat(&mut self, s: &str) -> Result<bool, FullFormError> {
        self.skip_ws()?;
        if self.rest().starts_with(s) {
            self.pos += s.len();
            Ok(true)
        } else {
            Ok(false)
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), FullFormError> {
        if self.eat(s)? {
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`")))
        }
    }

    fn at_end_of_expr(&mut self) -> Result<bool, FullFormError> {
        self.skip_ws()?;
        Ok(matches!(self.peek(), None | Some(')' | ']' | '}' | ',')))
    }

    fn compound(&mut self) -> Result<CExpr, FullFormError> {
        let first = self.set()?;
        let mut items = vec![first];
        while self.eat(";")? {
            if self.at_end_of_expr()? {
                items.push(CExpr::sym("Null"));
                break;
            }
            items.push(self.set()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { CExpr::call("CompoundExpression", items) })
    }

    fn set(&mut self) -> Result<CExpr, FullFormError> {
        let lhs = self.postfix()?;
        if self.eat(":=")? {
            return Ok(CExpr::call("SetDelayed", vec![lhs, self.set()?]));
        }
        self.skip_ws()?;
        if self.rest().starts_with('=') && !self.rest().starts_with("==") {
            self.pos += 1;
            return Ok(CExpr::call("Set", vec![lhs, self.set()?]));
        }
        Ok(lhs)
    }

    fn postfix(&mut self) -> Result<CExpr, FullFormError> {
        let mut e = self.replace_all()?;
        while self.eat("//")? {
            let f = self.replace_all()?;
            e = CExpr::app(f, vec![e]);
        }
        Ok(e)
    }

    fn replace_all(&mut self) -> Result<CExpr, FullFormError> {
        let mut e = self.rule()?;
        while self.eat("/.")? {
            e = CExpr::call("ReplaceAll", vec![e, self.rule()?]);
        }
        Ok(e)
    }

    fn rule(&mut self) -> Result<CExpr, FullFormError> {
        let lhs = self.condition()?;
        if self.eat("->")? {
            return Ok(CExpr::call("Rule", vec![lhs, self.rule()?]));
        }
        if self.eat(":>")? {
            return Ok(CExpr::call("RuleDelayed", vec![lhs, self.rule()?]));
        }
        Ok(lhs)
    }

    fn condition(&mut self) -> Result<CExpr, FullFormError> {
        let mut e = self.primary()?;
        while self.eat("/;")? {
            e = CExpr::call("Condition", vec![e, self.primary()?]);
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<CExpr, FullFormError> {
        let mut e = self.atom()?;
        loop {
            // `f[` must be adjacent-or-spaced; `[[` (Part) is not supported
            self.skip_ws()?;
            if self.peek() == Some('[') {
                self.pos += 1;
                let args = self.args("]")?;
                e = CExpr::app(e, args);
            } else {
                return Ok(e);
            }
        }
    }

    fn args(&mut self, close: &str) -> Result<Vec<CExpr>, FullFormError> {
        let mut out = Vec::new();
        if self.eat(close)? {
            return Ok(out);
        }
        loop {
            out.push(self.compound()?);
            if self.eat(close)? {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn atom(&mut self) -> Result<CExpr, FullFormError> {
        self.skip_ws()?;
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Err(self.err("unexpected end of input"));
        };
        match c {
            '(' => {
                self.pos += 1;
                let e = self.compound()?;
                self.expect(")")?;
                Ok(e)
            }
            '{' => {
                self.pos += 1;
                Ok(CExpr::list(self.args("}")?))
            }
            '"' => self.string(),
            '-' => {
                self.pos += 1;
                match self.peek() {
                    Some(d) if d.is_ascii_digit() || self.at_bare_fraction() => self.number(true),
                    _ => {
                        let e = self.primary()?;
                        Ok(CExpr::call("Times", vec![CExpr::int(-1), e]))
                    }
                }
            }
            d if d.is_ascii_digit() || self.at_bare_fraction() => self.number(false),
            '_' => self.blank(None),
            c if is_sym_start(c) => {
                let name = self.symbol();
                if self.peek() == Some('_') {
                    self.blank(Some(name))
                } else {
                    Ok(CExpr::Sym(name))
                }
            }
            _ => Err(FullFormError { pos: start, msg: format!("unexpected character {c:?}") }),
        }
    }

    fn symbol(&mut self) -> String {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if is_sym_char(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        self.src[start..self.pos].to_string()
    }

    fn blank(&mut self, name: Option<String>) -> Result<CExpr, FullFormError> {
        self.pos += 1; // '_'
        if self.peek() == Some('_') {
            return Err(self.err("sequence blanks are not supported"));
        }
        let head = match self.peek() {
            Some(c) if is_sym_start(c) => vec![CExpr::Sym(self.symbol())],
            _ => vec![],
        };
        let blank = CExpr::call("Blank", head);
        Ok(match name {
            Some(n) => CExpr::call("Pattern", vec![CExpr::Sym(n), blank]),
            None => blank,
        })
    }

    /// `.5` is a real with an empty integer part.
    fn at_bare_fraction(&self) -> bool {
        let mut it = self.rest().chars();
        it.next() == Some('.') && it.next().is_some_and(|c| c.is_ascii_digit())
    }

    fn number(&mut self, negative: bool) -> Result<CExpr, FullFormError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let int_part = self.src[start..self.pos].to_string();
        let rest = self.rest();
        // `1.` is a real, but `1..` or `1.x` are not decimals
        if rest.starts_with('.') && !rest.starts_with("..") && !rest[1..].starts_with(|c: char| is_sym_start(c)) {
            self.pos += 1;
            let fs = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let frac = self.src[fs..self.pos].to_string();
            let mut exp10 = 0i64;
            if self.rest().starts_with("*^") {
                self.pos += 2;
                let es = self.pos;
                if self.peek() == Some('-') {
                    self.pos += 1;
                }
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                exp10 = self.src[es..self.pos].parse().map_err(|_| self.err("bad exponent"))?;
            }
            return Ok(CExpr::Real(MReal { negative, point: frac.len(), digits: int_part + &frac, exp10 }));
        }
        let n: BigInt = int_part.parse().map_err(|_| self.err("bad integer"))?;
        Ok(CExpr::Int(if negative { -n } else { n }))
    }

    fn string(&mut self) -> Result<CExpr, FullFormError> {
        let start = self.pos;
        self.pos += 1;
        let mut out = String::new();
        let mut chars = self.src[self.pos..].char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '"' => {
                    self.pos += i + 1;
                    return Ok(CExpr::Str(out));
                }
                '\\' => match chars.next() {
                    Some((_, 'n')) => out.push('\n'),
                    Some((_, 't')) => out.push('\t'),
                    Some((_, 'r')) => out.push('\r'),
                    Some((_, c @ ('"' | '\\'))) => out.push(c),
                    _ => return Err(FullFormError { pos: self.pos + i, msg: "bad escape".into() }),
                },
                c => out.push(c),
            }
        }
        Err(FullFormError { pos: start, msg: "unterminated string".into() })
    }
}
