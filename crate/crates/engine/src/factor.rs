//! Exact factorization over the rationals, deliberately partial: content
//! and monomial extraction, square-free decomposition and rational roots
//! for univariate polynomials, cyclotomic splitting of binomials, and
//! dehomogenization of bivariate forms. Anything else is returned whole.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use skepsis_core::poly::{Monomial, Poly, Rat, Var};

use crate::number::rational_root;

/// Dense univariate coefficients, lowest degree first, no trailing zeros.
type UPoly = Vec<Rat>;

fn trim(mut p: UPoly) -> UPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn deg(p: &UPoly) -> usize {
    p.len().saturating_sub(1)
}

fn to_upoly(p: &Poly, v: &Var) -> UPoly {
    let mut out = vec![Rat::zero(); p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        out[m.exponent(v) as usize] += c;
    }
    trim(out)
}

fn from_upoly(p: &UPoly, v: &Var) -> Poly {
    Poly::from_terms(p.iter().enumerate().map(|(i, c)| (Monomial::var(v.clone(), i as u32), c.clone())))
}

fn u_sub(a: &UPoly, b: &UPoly) -> UPoly {
    let n = a.len().max(b.len());
    let z = Rat::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn u_deriv(a: &UPoly) -> UPoly {
    trim(a.iter().enumerate().skip(1).map(|(i, c)| c * Rat::from_integer(BigInt::from(i))).collect())
}

fn u_divrem(a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    let mut rem = a.clone();
    if b.is_empty() || a.len() < b.len() {
        return (vec![], rem);
    }
    let lead = b.last().unwrap();
    let mut q = vec![Rat::zero(); a.len() - b.len() + 1];
    for i in (0..q.len()).rev() {
        let c = &rem[i + b.len() - 1] / lead;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &c * bj;
            }
        }
        q[i] = c;
    }
    (trim(q), trim(rem))
}

fn monic(a: UPoly) -> UPoly {
    match a.last().cloned() {
        Some(l) => a.into_iter().map(|c| c / &l).collect(),
        None => a,
    }
}

fn u_gcd(a: &UPoly, b: &UPoly) -> UPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let (_, r) = u_divrem(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

fn u_div(a: &UPoly, b: &UPoly) -> UPoly {
    u_divrem(a, b).0
}

/// Yun's square-free decomposition: pairs (factor, multiplicity).
fn square_free(f: &UPoly) -> Vec<(UPoly, u32)> {
    let mut out = Vec::new();
    let fp = u_deriv(f);
    let c = u_gcd(f, &fp);
    let mut w = u_div(f, &c);
    let mut y = u_div(&fp, &c);
    let mut z = u_sub(&y, &u_deriv(&w));
    let mut i = 1;
    while deg(&w) > 0 {
        let g = u_gcd(&w, &z);
        if deg(&g) > 0 {
            out.push((g.clone(), i));
        }
        w = u_div(&w, &g);
        y = u_div(&z, &g);
        z = u_sub(&y, &u_deriv(&w));
        i += 1;
    }
    out
}

const TRIAL_LIMIT: u64 = 1_000_000;
const CANDIDATE_LIMIT: usize = 400_000;

/// Positive divisors. Prime factors above the trial-division bound are
/// treated as prime, so very large inputs may lose some divisors.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && BigInt::from(p) * BigInt::from(p) <= n {
        let bp = BigInt::from(p);
        let mut k = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            k += 1;
        }
        if k > 0 {
            primes.push((bp, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        primes.push((n, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, k) in primes {
        let mut next = Vec::with_capacity(divs.len() * (k as usize + 1));
        for d in &divs {
            let mut pk = d.clone();
            for _ in 0..=k {
                next.push(pk.clone());
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

fn integer_coeffs(f: &UPoly) -> Vec<BigInt> {
    let l = f.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    f.iter().map(|c| (c * Rat::from_integer(l.clone())).to_integer()).collect()
}

/// All rational roots (search may be cut short for huge coefficients).
pub fn rational_roots(f: &UPoly) -> Vec<Rat> {
    let a = integer_coeffs(f);
    if a.len() < 2 {
        return vec![];
    }
    let mut roots = Vec::new();
    let lo = a.iter().position(|c| !c.is_zero()).unwrap();
    if lo > 0 {
        roots.push(Rat::zero());
    }
    let a = &a[lo..];
    if a.len() < 2 {
        return roots;
    }
    let (a0, an) = (&a[0], a.last().unwrap());
    let f1: BigInt = a.iter().sum();
    let fm1: BigInt = a.iter().enumerate().map(|(i, c)| if i % 2 == 0 { c.clone() } else { -c }).sum();
    let (ps, qs) = (divisors(a0), divisors(an));
    let mut tried = 0;
    'outer: for q in &qs {
        for p in &ps {
            if !p.gcd(q).is_one() {
                continue;
            }
            for p in [p.clone(), -p] {
                tried += 1;
                if tried > CANDIDATE_LIMIT {
                    break 'outer;
                }
                // p/q root => (q - p) | f(1) and (q + p) | f(-1)
                let (d1, d2) = (q - &p, q + &p);
                if (!d1.is_zero() && !(&f1 % &d1).is_zero()) || (!d2.is_zero() && !(&fm1 % &d2).is_zero()) {
                    continue;
                }
                // homogeneous Horner: sum a_i p^i q^(n-i)
                let mut acc = BigInt::zero();
                let mut qpow = BigInt::one();
                for c in a.iter().rev() {
                    acc = acc * &p + c * &qpow;
                    qpow *= q;
                }
                if acc.is_zero() {
                    roots.push(Rat::new(p, q.clone()));
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

fn cyclotomic(d: u32, cache: &mut BTreeMap<u32, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(c) = cache.get(&d) {
        return c.clone();
    }
    // x^d - 1 divided by every smaller cyclotomic factor
    let mut num: UPoly = vec![Rat::zero(); d as usize + 1];
    num[0] = -Rat::one();
    num[d as usize] = Rat::one();
    for e in 1..d {
        if d % e == 0 {
            let phi: UPoly = cyclotomic(e, cache).into_iter().map(Rat::from_integer).collect();
            num = u_div(&num, &phi);
        }
    }
    let c: Vec<BigInt> = num.into_iter().map(|r| r.to_integer()).collect();
    cache.insert(d, c.clone());
    c
}

/// Homogenized `Φ_d(a, b)`.
fn cyclotomic_at(d: u32, a: &Poly, b: &Poly, cache: &mut BTreeMap<u32, Vec<BigInt>>) -> Poly {
    let c = cyclotomic(d, cache);
    let phi = c.len() as u32 - 1;
    let mut out = Poly::zero();
    for (i, ci) in c.iter().enumerate() {
        if !ci.is_zero() {
            let t = a.pow(i as u32).mul(&b.pow(phi - i as u32)).scale(&Rat::from_integer(ci.clone()));
            out = out.add(&t);
        }
    }
    out
}

fn monomial_root(m: &Monomial, n: u32) -> Monomial {
    m.iter().fold(Monomial::one(), |acc, (v, e)| acc.mul(&Monomial::var(v.clone(), e / n)))
}

/// Splits `c1 M1^n + c2 M2^n` into cyclotomic pieces when the ratio of the
/// coefficients is a suitable perfect power.
fn split_binomial(q: &Poly) -> Option<Vec<Poly>> {
    if q.num_terms() != 2 {
        return None;
    }
    let (m1, c1) = q.leading().map(|(m, c)| (m.clone(), c.clone()))?;
    let (m2, c2) = q.terms().find(|(m, _)| **m != m1).map(|(m, c)| (m.clone(), c.clone()))?;
    let n = m1.iter().chain(m2.iter()).fold(0u32, |g, (_, e)| g.gcd(e));
    if n < 2 {
        return None;
    }
    let gamma = -(c2 / c1);
    let mut cache = BTreeMap::new();
    let mut ks: Vec<u32> = (2..=n).filter(|k| n % k == 0).collect();
    ks.reverse();
    for k in ks {
        let Some(delta) = rational_root(&gamma.abs(), k) else { continue };
        let a = Poly::term(monomial_root(&m1, k), Rat::one());
        let b = Poly::term(monomial_root(&m2, k), delta);
        // m1 = A^k exactly when k | n; A^k -/+ B^k
        let ds: Vec<u32> = if gamma.is_positive() {
            (1..=k).filter(|d| k % d == 0).collect()
        } else {
            (1..=2 * k).filter(|d| (2 * k) % d == 0 && k % d != 0).collect()
        };
        if ds.len() < 2 {
            // a single cyclotomic piece is `q` itself
            continue;
        }
        return Some(ds.into_iter().map(|d| cyclotomic_at(d, &a, &b, &mut cache)).collect());
    }
    None
}

fn split_univariate(s: &UPoly, v: &Var, out: &mut Vec<(Poly, u32)>, k: u32) {
    let sp = from_upoly(s, v);
    if let Some(parts) = split_binomial(&sp) {
        for part in parts {
            split_univariate(&to_upoly(&part, v), v, out, k);
        }
        return;
    }
    let mut rest = s.clone();
    for r in rational_roots(s) {
        let lin = vec![-r.clone(), Rat::one()];
        let (q, rem) = u_divrem(&rest, &lin);
        if rem.is_empty() {
            out.push((from_upoly(&lin, v), k));
            rest = q;
        }
    }
    if deg(&rest) > 0 {
        out.push((from_upoly(&rest, v), k));
    }
}

fn factor_univariate(q: &Poly, v: &Var) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    for (s, k) in square_free(&to_upoly(q, v)) {
        split_univariate(&s, v, &mut out, k);
    }
    out
}

fn homogeneous_degree(q: &Poly) -> Option<u32> {
    let mut it = q.terms().map(|(m, _)| m.degree());
    let d = it.next()?;
    it.all(|e| e == d).then_some(d)
}

fn factor_primitive(q: &Poly) -> Vec<(Poly, u32)> {
    if q.is_constant() {
        return vec![];
    }
    let vars: Vec<Var> = q.vars().into_iter().collect();
    if let Some(parts) = split_binomial(q) {
        return parts.iter().flat_map(|p| factor_primitive(&p.primitive())).collect();
    }
    match vars.as_slice() {
        [v] => factor_univariate(q, v),
        [x, y] if homogeneous_degree(q).is_some() => {
            let total = homogeneous_degree(q).unwrap();
            let one = Poly::int(1);
            let mut out = Vec::new();
            let mut used = 0;
            for (f, k) in factor_univariate(&q.subst(y, &one), x) {
                let d = f.degree_in(x);
                used += d * k;
                let g = Poly::from_terms(
                    f.terms().map(|(m, c)| (m.mul(&Monomial::var(y.clone(), d - m.exponent(x))), c.clone())),
                );
                out.push((g, k));
            }
            if total > used {
                out.push((Poly::var(y.clone()), total - used));
            }
            out
        }
        _ => vec![(q.clone(), 1)],
    }
}

/// Normalizes a factor: integer coefficients, gcd 1, positive leading
/// coefficient.
fn normalize(f: &Poly) -> Poly {
    let g = f.primitive();
    if g.leading_coeff().is_negative() {
        g.neg()
    } else {
        g
    }
}

/// Factors `p`. A constant factor, if not 1, comes first; the others are
/// normalized and their product with multiplicities is exactly `p`.
pub fn factor(p: &Poly) -> Vec<(Poly, u32)> {
    if p.is_constant() {
        return vec![(p.clone(), 1)];
    }
    let q = normalize(p);
    let mut raw = Vec::new();
    let m = q.monomial_content();
    for (v, e) in m.iter() {
        raw.push((Poly::var(v.clone()), *e));
    }
    let rest = q.div_exact(&Poly::term(m.clone(), Rat::one())).unwrap_or_else(|| q.clone());
    raw.extend(factor_primitive(&normalize(&rest)));

    let mut merged: Vec<(Poly, u32)> = Vec::new();
    for (f, k) in raw {
        if f.is_constant() {
            continue;
        }
        let f = normalize(&f);
        match merged.iter_mut().find(|(g, _)| *g == f) {
            Some((_, n)) => *n += k,
            None => merged.push((f, k)),
        }
    }
    merged.sort_by(|a, b| a.0.total_degree().cmp(&b.0.total_degree()).then_with(|| a.0.to_string().cmp(&b.0.to_string())));

    let product = merged.iter().fold(Poly::int(1), |acc, (f, k)| acc.mul(&f.pow(*k)));
    let c = match p.div_exact(&product).and_then(|c| c.as_constant()) {
        Some(c) => c,
        // the pieces must multiply back; never return an unsound answer
        None => return vec![(p.clone(), 1)],
    };
    if !c.is_one() {
        merged.insert(0, (Poly::constant(c), 1));
    }
    merged
}

pub(crate) fn univariate_roots(p: &Poly, v: &Var) -> Vec<Rat> {
    let u = to_upoly(p, v);
    if u.len() < 2 {
        return vec![];
    }
    // roots of the square-free part are the roots
    let sf = u_div(&u, &u_gcd(&u, &u_deriv(&u)));
    rational_roots(&sf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use skepsis_core::poly::{rat, ratio};

    fn x() -> Poly {
        Poly::var("x")
    }

    fn y() -> Poly {
        Poly::var("y")
    }

    fn product(fs: &[(Poly, u32)]) -> Poly {
        fs.iter().fold(Poly::int(1), |acc, (f, k)| acc.mul(&f.pow(*k)))
    }

    #[test]
    fn running_example() {
        let p = x().pow(2).sub(&x().scale(&rat(2))).add(&Poly::int(1));
        assert_eq!(factor(&p), vec![(x().sub(&Poly::int(1)), 2)]);
    }

    #[test]
    fn difference_of_tenth_powers() {
        let p = x().pow(10).sub(&y().pow(10));
        let fs = factor(&p);
        assert_eq!(fs.len(), 4, "{fs:?}");
        assert!(fs.iter().all(|(f, k)| *k == 1 && !f.is_constant()));
        assert_eq!(product(&fs), p);
        let shown: Vec<String> = fs.iter().map(|(f, _)| f.to_string()).collect();
        assert!(shown.contains(&"x - y".to_string()), "{shown:?}");
        assert!(shown.contains(&"x + y".to_string()), "{shown:?}");
    }

    #[test]
    fn constants_and_content() {
        assert_eq!(factor(&Poly::int(7)), vec![(Poly::int(7), 1)]);
        let p = x().scale(&rat(-6)).add(&Poly::int(3));
        let fs = factor(&p);
        assert_eq!(fs[0], (Poly::int(-3), 1));
        assert_eq!(product(&fs), p);
    }

    #[test]
    fn rational_roots_and_binomials() {
        let p = x().pow(4).sub(&Poly::int(16));
        let fs = factor(&p);
        assert_eq!(fs.len(), 3, "{fs:?}");
        assert_eq!(product(&fs), p);
        let q = x().scale(&rat(2)).sub(&Poly::int(1)).mul(&x().add(&Poly::constant(ratio(1, 3))));
        assert_eq!(factor(&q).len(), 3);
        assert_eq!(product(&factor(&q)), q);
    }

    #[test]
    fn homogeneous_square() {
        let p = x().sub(&y()).pow(2);
        assert_eq!(factor(&p), vec![(x().sub(&y()), 2)]);
    }

    #[test]
    fn divisor_lists() {
        let ds: Vec<i64> = divisors(&BigInt::from(12)).iter().map(|d| i64::try_from(d).unwrap()).collect();
        assert_eq!(ds, vec![1, 2, 3, 4, 6, 12]);
    }
}
