//! Sparse multivariate polynomials with exact rational coefficients.

mod linear;

pub use linear::{Assignment, LinConstraint, LinearError, Relation};

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Variable names; ordered naturally, so `x2 < x10`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Var(pub String);

impl Var {
    pub fn new(s: impl Into<String>) -> Var {
        Var(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

fn chunks(s: &str) -> Vec<(bool, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    for i in 1..=s.len() {
        if i == s.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
            if s.is_char_boundary(i) {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
    }
    out
}

pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    for (x, y) in chunks(a).iter().zip(chunks(b).iter()) {
        let o = match (x, y) {
            ((true, p), (true, q)) => {
                let (p, q) = (p.trim_start_matches('0'), q.trim_start_matches('0'));
                p.len().cmp(&q.len()).then_with(|| p.cmp(q))
            }
            ((_, p), (_, q)) => p.cmp(q),
        };
        if o != Ordering::Equal {
            return o;
        }
    }
    chunks(a).len().cmp(&chunks(b).len()).then_with(|| a.cmp(b))
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Var {
        Var(s.to_string())
    }
}

/// Power product: variable ↦ positive exponent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(BTreeMap<Var, u32>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(BTreeMap::new())
    }

    pub fn var(v: Var, e: u32) -> Monomial {
        let mut m = BTreeMap::new();
        if e > 0 {
            m.insert(v, e);
        }
        Monomial(m)
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &u32)> {
        self.0.iter()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.0.clone();
        for (v, e) in &other.0 {
            *m.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(m)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut m = self.0.clone();
        for (v, e) in &other.0 {
            let have = m.get(v).copied().unwrap_or(0);
            match have.cmp(e) {
                Ordering::Less => return None,
                Ordering::Equal => {
                    m.remove(v);
                }
                Ordering::Greater => {
                    m.insert(v.clone(), have - e);
                }
            }
        }
        Some(Monomial(m))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|(v, e)| other.0.get(v).map(|f| (v.clone(), (*e).min(*f))))
                .collect(),
        )
    }

    /// Without variable `v`.
    pub fn without(&self, v: &Var) -> Monomial {
        let mut m = self.0.clone();
        m.remove(v);
        Monomial(m)
    }

    /// Lexicographic order, earlier variables dominant.
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let vars: BTreeSet<&Var> = self.0.keys().chain(other.0.keys()).collect();
        for v in vars {
            let o = self.exponent(v).cmp(&other.exponent(v));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: Rat) -> Poly {
        Poly::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Poly {
        Poly::constant(rat(n))
    }

    pub fn var(v: impl Into<Var>) -> Poly {
        Poly::term(Monomial::var(v.into(), 1), Rat::one())
    }

    pub fn term(m: Monomial, c: Rat) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(ts: impl IntoIterator<Item = (Monomial, Rat)>) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in ts {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Monomial::one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn as_constant(&self) -> Option<Rat> {
        self.is_constant().then(|| self.constant_term())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.0.keys().cloned()).collect()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut p = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                p.add_term(m1.mul(m2), c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, mut n: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::int(1);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Leading term in lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().max_by(|a, b| a.0.lex_cmp(b.0))
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut q = Poly::zero();
        while let Some((m, c)) = rem.leading() {
            let t = Poly::term(m.div(&dm)?, c / &dc);
            rem = rem.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    pub fn eval(&self, a: &Assignment) -> Option<Rat> {
        let mut sum = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.iter() {
                t *= num_traits::pow(a.get(v)?.clone(), *e as usize);
            }
            sum += t;
        }
        Some(sum)
    }

    /// Substitutes `value` for `v`.
    pub fn subst(&self, v: &Var, value: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            let rest = Poly::term(m.without(v), c.clone());
            out = out.add(&if e == 0 { rest } else { rest.mul(&value.pow(e)) });
        }
        out
    }

    /// Substitutes every assigned variable.
    pub fn subst_all(&self, a: &Assignment) -> Poly {
        a.iter().fold(self.clone(), |p, (v, r)| p.subst(v, &Poly::constant(r.clone())))
    }

    /// Coefficients as a polynomial in `v`: exponent ↦ coefficient.
    pub fn coeffs_in(&self, v: &Var) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let slot = out.entry(m.exponent(v)).or_default();
            slot.add_term(m.without(v), c.clone());
        }
        out
    }

    pub fn derivative(&self, v: &Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                let mut mm = m.0.clone();
                if e == 1 {
                    mm.remove(v);
                } else {
                    mm.insert(v.clone(), e - 1);
                }
                out.add_term(Monomial(mm), c * rat(e as i64));
            }
        }
        out
    }

    /// Positive rational `c` with `self / c` having coprime integer
    /// coefficients; zero for the zero polynomial.
    pub fn content(&self) -> Rat {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            Rat::zero()
        } else {
            Rat::new(num, den)
        }
    }

    /// `self / content`, so integer coefficients with gcd 1.
    pub fn primitive(&self) -> Poly {
        let c = self.content();
        if c.is_zero() {
            return Poly::zero();
        }
        self.scale(&c.recip())
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Monomial::one() };
        it.fold(first.clone(), |g, m| g.gcd(m))
    }

    pub fn is_linear(&self) -> bool {
        self.total_degree() <= 1
    }

    /// Coefficient of `v` in a linear polynomial.
    pub fn linear_coeff(&self, v: &Var) -> Rat {
        self.coeff(&Monomial::var(v.clone(), 1))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|a, b| b.0.lex_cmp(a.0));
        for (i, (m, c)) in ts.into_iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            let mono: Vec<String> = m
                .iter()
                .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
                .collect();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var("x")
    }

    #[test]
    fn square_of_binomial() {
        let p = x().sub(&Poly::int(1)).pow(2);
        assert_eq!(p, x().pow(2).sub(&x().scale(&rat(2))).add(&Poly::int(1)));
        assert_eq!(p.to_string(), "x^2 - 2*x + 1");
    }

    #[test]
    fn exact_division() {
        let a = x().sub(&Poly::int(1));
        let p = a.mul(&x().add(&Poly::var("y")));
        assert_eq!(p.div_exact(&a).unwrap(), x().add(&Poly::var("y")));
        assert!(p.div_exact(&x().add(&Poly::int(3))).is_none());
    }

    #[test]
    fn natural_variable_order() {
        assert!(Var::from("x2") < Var::from("x10"));
        assert!(Var::from("a") < Var::from("b"));
    }

    #[test]
    fn content_and_primitive() {
        let p = x().scale(&ratio(4, 3)).add(&Poly::constant(ratio(2, 3)));
        assert_eq!(p.content(), ratio(2, 3));
        assert_eq!(p.primitive(), x().scale(&rat(2)).add(&Poly::int(1)));
    }

    #[test]
    fn zero_has_no_terms() {
        assert!(Poly::int(0).is_zero());
        assert!(x().sub(&x()).is_zero());
    }
}
