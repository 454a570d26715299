//! Kernel terms of the polynomial fragment as polynomials, and propositions
//! as constraints. This is the checkers' own reading of a term; it shares
//! nothing with the engine.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use skepsis_core::kexpr::{decode_numeral, fresh_name, print_kexpr, KExpr, LocalConst, Name};
use skepsis_core::poly::{Poly, Rat, Relation, Var};

use crate::VerifyError;

/// Walks the arithmetic of one carrier type. Locals become variables named
/// by their display names; any other term of the carrier (an uninterpreted
/// constant or application) becomes an opaque variable named by its
/// printed form.
#[derive(Default)]
pub struct Walker {
    carrier: Option<KExpr>,
    locals: BTreeMap<String, Name>,
    strict: bool,
}

fn carrier_name(t: &KExpr) -> Option<String> {
    t.const_name().map(|n| n.to_string())
}

impl Walker {
    pub fn new() -> Walker {
        Walker::default()
    }

    /// A walker that rejects uninterpreted applications such as `sin x`
    /// instead of treating them as variables. Constants stay atoms.
    pub fn polynomial_only() -> Walker {
        Walker { strict: true, ..Walker::default() }
    }

    /// The carrier seen so far, if any.
    pub fn carrier(&self) -> Option<&KExpr> {
        self.carrier.as_ref()
    }

    fn set_carrier(&mut self, t: &KExpr) -> Result<(), VerifyError> {
        match &self.carrier {
            Some(c) if c != t => Err(VerifyError::OutOfFragment(format!(
                "terms over both {} and {}",
                print_kexpr(c),
                print_kexpr(t)
            ))),
            Some(_) => Ok(()),
            None => {
                self.carrier = Some(t.clone());
                Ok(())
            }
        }
    }

    fn local_var(&mut self, l: &Arc<LocalConst>) -> Result<Var, VerifyError> {
        let pretty = l.pretty.to_string();
        match self.locals.get(&pretty) {
            Some(u) if *u != l.unique => {
                Err(VerifyError::OutOfFragment(format!("two different locals are both named {pretty}")))
            }
            Some(_) => Ok(Var::new(pretty)),
            None => {
                self.locals.insert(pretty.clone(), l.unique.clone());
                Ok(Var::new(pretty))
            }
        }
    }

    pub fn poly(&mut self, e: &KExpr) -> Result<Poly, VerifyError> {
        if let KExpr::Local(l) = e {
            return Ok(Poly::var(self.local_var(l)?));
        }
        let (head, args) = e.spine();
        let Some(name) = head.const_name().map(|n| n.to_string()) else {
            return Err(VerifyError::OutOfFragment(print_kexpr(e)));
        };
        let arith = matches!(
            name.as_str(),
            "add" | "sub" | "mul" | "div" | "neg" | "pow_nat" | "zero" | "one" | "bit0" | "bit1"
        );
        if arith {
            if let Some(t) = args.first() {
                self.set_carrier(t)?;
            }
        }
        let carrier = self.carrier.as_ref().and_then(carrier_name);
        let operand = |i: usize| args.get(i).copied().ok_or_else(|| VerifyError::NotPolynomial(print_kexpr(e)));
        match (name.as_str(), args.len()) {
            ("add", 4) => Ok(self.poly(operand(2)?)?.add(&self.poly(operand(3)?)?)),
            ("mul", 4) => Ok(self.poly(operand(2)?)?.mul(&self.poly(operand(3)?)?)),
            ("sub", 4) => {
                if carrier.as_deref() == Some("nat") {
                    return Err(VerifyError::OutOfFragment("truncated subtraction on nat".into()));
                }
                Ok(self.poly(operand(2)?)?.sub(&self.poly(operand(3)?)?))
            }
            ("div", 4) => {
                if matches!(carrier.as_deref(), Some("nat" | "int")) {
                    return Err(VerifyError::OutOfFragment("integer division".into()));
                }
                let num = self.poly(operand(2)?)?;
                match self.poly(operand(3)?)?.as_constant() {
                    Some(d) if !d.is_zero() => Ok(num.scale(&d.recip())),
                    _ => Err(VerifyError::NotPolynomial(print_kexpr(e))),
                }
            }
            ("neg", 3) => Ok(self.poly(operand(2)?)?.neg()),
            ("pow_nat", 4) => {
                let n = decode_numeral(operand(3)?).map_err(|_| VerifyError::NotPolynomial(print_kexpr(e)))?;
                let n = u32::try_from(n).map_err(|_| VerifyError::NotPolynomial(print_kexpr(e)))?;
                Ok(self.poly(operand(2)?)?.pow(n))
            }
            ("zero", 2) => Ok(Poly::zero()),
            ("one", 2) => Ok(Poly::constant(Rat::one())),
            ("bit0", 3) => Ok(self.poly(operand(2)?)?.scale(&Rat::from_integer(2.into()))),
            ("bit1", 4) => Ok(self.poly(operand(3)?)?.scale(&Rat::from_integer(2.into())).add(&Poly::int(1))),
            _ if arith => Err(VerifyError::NotPolynomial(print_kexpr(e))),
            _ if self.strict && !args.is_empty() => Err(VerifyError::OutOfFragment(print_kexpr(e))),
            _ if e.is_closed() => {
                // an uninterpreted term of the carrier
                Ok(Poly::var(Var::new(format!("({})", print_kexpr(e)))))
            }
            _ => Err(VerifyError::NotPolynomial(print_kexpr(e))),
        }
    }

    /// `lhs rel rhs` read as `lhs - rhs rel 0`.
    pub fn relation(&mut self, p: &KExpr) -> Result<(Poly, Relation), VerifyError> {
        let (head, args) = p.spine();
        let name = head.const_name().map(|n| n.to_string()).unwrap_or_default();
        let (rel, a, b) = match (name.as_str(), args.as_slice()) {
            ("le", [t, _, a, b]) => {
                self.set_carrier(t)?;
                (Relation::Le, a, b)
            }
            ("lt", [t, _, a, b]) => {
                self.set_carrier(t)?;
                (Relation::Lt, a, b)
            }
            ("eq", [t, a, b]) => {
                self.set_carrier(t)?;
                (Relation::Eq, a, b)
            }
            _ => return Err(VerifyError::OutOfFragment(print_kexpr(p))),
        };
        Ok((self.poly(a)?.sub(&self.poly(b)?), rel))
    }

    /// Every conjunct of `p` as a constraint; `false` is `1 <= 0`.
    pub fn constraints(&mut self, p: &KExpr) -> Result<Vec<(Poly, Relation)>, VerifyError> {
        conjuncts(p)
            .into_iter()
            .map(|c| {
                if c.is_const_named("false") {
                    Ok((Poly::int(1), Relation::Le))
                } else {
                    self.relation(&c)
                }
            })
            .collect()
    }
}

/// The polynomial of a single term, over a fresh walker.
pub fn poly_of_kexpr(e: &KExpr) -> Result<Poly, VerifyError> {
    Walker::new().poly(e)
}

/// Splits nested `and`.
pub fn conjuncts(p: &KExpr) -> Vec<KExpr> {
    let (head, args) = p.spine();
    if head.is_const_named("and") && args.len() == 2 {
        let mut out = conjuncts(args[0]);
        out.extend(conjuncts(args[1]));
        out
    } else {
        vec![p.clone()]
    }
}

/// Opens leading `∃` binders with fresh locals.
pub fn open_exists(p: &KExpr) -> (Vec<KExpr>, KExpr) {
    let mut locals = Vec::new();
    let mut body = p.clone();
    loop {
        let (head, args) = body.spine();
        if !(head.is_const_named("exists") && args.len() == 2) {
            return (locals, body);
        }
        let KExpr::Lam { name, info, domain, body: inner } = args[1] else {
            return (locals, body);
        };
        let local = KExpr::local(LocalConst {
            unique: fresh_name("_ex"),
            pretty: name.clone(),
            info: *info,
            ty: (**domain).clone(),
        });
        let next = inner.instantiate(&local);
        locals.push(local);
        body = next;
    }
}
