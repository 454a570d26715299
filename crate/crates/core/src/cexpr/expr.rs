use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// An exact decimal: `digits` with the last `point` of them after the
/// decimal point, times `10^exp10` (the `*^` suffix). Stored as read so that
/// printing reproduces the input digit for digit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MReal {
    pub negative: bool,
    pub digits: String,
    pub point: usize,
    pub exp10: i64,
}

impl MReal {
    pub fn to_rational(&self) -> BigRational {
        let mantissa: BigInt = self.digits.parse::<BigUint>().map(BigInt::from).unwrap_or_else(|_| BigInt::zero());
        let ten = BigInt::from(10);
        let mut r = BigRational::new(mantissa, num_traits::pow(ten.clone(), self.point));
        let scale = BigRational::from_integer(num_traits::pow(ten, self.exp10.unsigned_abs() as usize));
        if self.exp10 >= 0 {
            r *= scale;
        } else {
            r /= scale;
        }
        if self.negative {
            -r
        } else {
            r
        }
    }
}

impl fmt::Display for MReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        let split = self.digits.len() - self.point.min(self.digits.len());
        write!(f, "{}.{}", &self.digits[..split], &self.digits[split..])?;
        if self.exp10 != 0 {
            write!(f, "*^{}", self.exp10)?;
        }
        Ok(())
    }
}

/// CAS expressions: symbols, strings, integers, reals and applications.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CExpr {
    Sym(String),
    Str(String),
    Int(BigInt),
    Real(MReal),
    App(Box<CExpr>, Vec<CExpr>),
}

impl CExpr {
    pub fn sym(s: &str) -> CExpr {
        CExpr::Sym(s.to_string())
    }

    pub fn str(s: &str) -> CExpr {
        CExpr::Str(s.to_string())
    }

    pub fn int(n: impl Into<BigInt>) -> CExpr {
        CExpr::Int(n.into())
    }

    pub fn app(head: CExpr, args: Vec<CExpr>) -> CExpr {
        CExpr::App(Box::new(head), args)
    }

    /// `h[args]` with a symbol head.
    pub fn call(head: &str, args: Vec<CExpr>) -> CExpr {
        CExpr::app(CExpr::sym(head), args)
    }

    pub fn list(items: Vec<CExpr>) -> CExpr {
        CExpr::call("List", items)
    }

    /// Integers become `n`, other rationals `Rational[p, q]`.
    pub fn rational(r: &BigRational) -> CExpr {
        if r.denom().is_one() {
            CExpr::Int(r.numer().clone())
        } else {
            CExpr::call("Rational", vec![CExpr::Int(r.numer().clone()), CExpr::Int(r.denom().clone())])
        }
    }

    pub fn as_sym(&self) -> Option<&str> {
        match self {
            CExpr::Sym(s) => Some(s),
            _ => None,
        }
    }

    /// Head symbol of an application with a symbol head.
    pub fn head_sym(&self) -> Option<&str> {
        match self {
            CExpr::App(h, _) => h.as_sym(),
            _ => None,
        }
    }

    pub fn is_call(&self, head: &str) -> bool {
        self.head_sym() == Some(head)
    }

    pub fn args(&self) -> &[CExpr] {
        match self {
            CExpr::App(_, a) => a,
            _ => &[],
        }
    }

    /// Exact rational value of a numeric literal (`Int`, `Real`, or
    /// `Rational[p, q]`).
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            CExpr::Int(n) => Some(BigRational::from_integer(n.clone())),
            CExpr::Real(r) => Some(r.to_rational()),
            CExpr::App(h, a) if h.as_sym() == Some("Rational") && a.len() == 2 => match (&a[0], &a[1]) {
                (CExpr::Int(p), CExpr::Int(q)) if !q.is_zero() => Some(BigRational::new(p.clone(), q.clone())),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn is_atom(&self) -> bool {
        !matches!(self, CExpr::App(..))
    }

    /// Visits every subexpression, heads included, in pre-order.
    pub fn visit(&self, f: &mut impl FnMut(&CExpr)) {
        f(self);
        if let CExpr::App(h, args) = self {
            h.visit(f);
            for a in args {
                a.visit(f);
            }
        }
    }

    /// Bottom-up rebuild; `f` may replace a node before its children are
    /// visited.
    pub fn replace(&self, f: &mut impl FnMut(&CExpr) -> Option<CExpr>) -> CExpr {
        if let Some(r) = f(self) {
            return r;
        }
        match self {
            CExpr::App(h, args) => CExpr::App(Box::new(h.replace(f)), args.iter().map(|a| a.replace(f)).collect()),
            _ => self.clone(),
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}

impl fmt::Display for CExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print_fullform(self))
    }
}
