use proptest::prelude::*;
use skepsis_bridge::Scope;
use skepsis_core::cexpr::CExpr;
use skepsis_core::poly::{rat, Assignment, LinConstraint, Monomial, Poly, Rat, Relation, Var};
use skepsis_engine::{factor, farkas_coefficients, find_instance, from_poly, solve, Engine};

const VARS: [&str; 3] = ["x", "y", "z"];

fn monomial(exps: &[u32]) -> Monomial {
    exps.iter().zip(VARS).fold(Monomial::one(), |m, (&e, v)| if e == 0 { m } else { m.mul(&Monomial::var(Var::new(v), e)) })
}

/// Sums of up to 6 terms in ≤ 3 variables, total degree ≤ 6.
fn arb_sum() -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..=2, 3), -10i64..=10), 1..=6)
        .prop_map(|ts| Poly::from_terms(ts.into_iter().map(|(e, c)| (monomial(&e), rat(c)))))
}

/// Either a random sum or a product of small factors, so that factoring
/// has something to find.
fn arb_poly() -> impl Strategy<Value = Poly> {
    prop_oneof![
        arb_sum(),
        prop::collection::vec(
            (prop::collection::vec(0u32..=1, 3), -3i64..=3, -3i64..=3, 0usize..3).prop_map(|(e, a, b, v)| {
                Poly::term(monomial(&e), rat(a)).add(&Poly::var(Var::new(VARS[v])).scale(&rat(b)))
            }),
            1..=3
        )
        .prop_map(|fs| fs.iter().fold(Poly::int(1), |acc, f| acc.mul(f))),
    ]
    .prop_filter("nonzero, degree ≤ 6", |p| !p.is_zero() && p.total_degree() <= 6)
}

fn product(fs: &[(Poly, u32)]) -> Poly {
    fs.iter().fold(Poly::int(1), |acc, (f, k)| acc.mul(&f.pow(*k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn factor_expands_back(p in arb_poly()) {
        let fs = factor(&p);
        prop_assert_eq!(product(&fs), p);
        for (i, (f, k)) in fs.iter().enumerate() {
            prop_assert!(*k >= 1);
            prop_assert!(i == 0 || !f.is_constant(), "constant factor out of place: {:?}", fs);
        }
    }
}

// ---- linear systems -------------------------------------------------------

#[derive(Debug, Clone)]
struct Row {
    a: i64,
    b: i64,
    c: i64,
    rel: Relation,
}

fn arb_row() -> impl Strategy<Value = Row> {
    (-3i64..=3, -3i64..=3, -6i64..=6, prop_oneof![4 => Just(Relation::Le), 3 => Just(Relation::Lt), 1 => Just(Relation::Eq)])
        .prop_map(|(a, b, c, rel)| Row { a, b, c, rel })
}

fn constraint(r: &Row) -> LinConstraint {
    let p = Poly::var(Var::new("x")).scale(&rat(r.a)).add(&Poly::var(Var::new("y")).scale(&rat(r.b))).add(&Poly::int(r.c));
    LinConstraint::new(p, r.rel).unwrap()
}

/// Common denominator of every fraction with denominator ≤ 8.
const D: i64 = 840;

fn grid_axis() -> Vec<i64> {
    (-4 * D..=4 * D).filter(|k| D / gcd(k.abs(), D) <= 8).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn grid_point(rows: &[Row], axis: &[i64]) -> bool {
    axis.iter().any(|&p| {
        axis.iter().any(|&q| {
            rows.iter().all(|r| {
                let v = r.a * p + r.b * q + r.c * D;
                match r.rel {
                    Relation::Le => v <= 0,
                    Relation::Lt => v < 0,
                    Relation::Eq => v == 0,
                }
            })
        })
    })
}

fn satisfies(cs: &[LinConstraint], a: &Assignment) -> bool {
    cs.iter().all(|c| c.satisfied_by(a) == Some(true))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn find_instance_agrees_with_grid(rows in prop::collection::vec(arb_row(), 1..=4)) {
        let cs: Vec<LinConstraint> = rows.iter().map(constraint).collect();
        let found = find_instance(&cs, 16).unwrap();
        if let Some(a) = &found {
            let mut full = a.clone();
            for v in ["x", "y"] {
                full.entry(Var::new(v)).or_insert_with(|| rat(0));
            }
            prop_assert!(satisfies(&cs, &full), "{:?} fails {:?}", a, rows);
        }
        if grid_point(&rows, &grid_axis()) {
            prop_assert!(found.is_some(), "grid found a point but find_instance did not: {:?}", rows);
        }
    }

    #[test]
    fn farkas_alternative(rows in prop::collection::vec(arb_row(), 2..=5), third in prop::collection::vec(-3i64..=3, 5)) {
        // a third variable in some rows
        let cs: Vec<LinConstraint> = rows
            .iter()
            .zip(&third)
            .map(|(r, &z)| {
                let c = constraint(r);
                LinConstraint::new(c.poly().add(&Poly::var(Var::new("z")).scale(&rat(z))), r.rel).unwrap()
            })
            .collect();
        let inst = find_instance(&cs, 16).unwrap();
        let cert = farkas_coefficients(&cs, 16).unwrap();
        prop_assert!(inst.is_some() != cert.is_some(), "instance {:?}, certificate {:?}", inst, cert);
        if let Some(c) = cert {
            let sum = cs.iter().zip(&c).fold(Poly::zero(), |acc, (h, ci)| acc.add(&h.poly().scale(ci)));
            let q = sum.as_constant();
            prop_assert!(q.is_some(), "sum not constant: {:?}", sum);
            let q = q.unwrap();
            let strict_used = cs.iter().zip(&c).any(|(h, ci)| h.relation() == Relation::Lt && *ci > rat(0));
            prop_assert!(q > rat(0) || (q == rat(0) && strict_used));
            for (h, ci) in cs.iter().zip(&c) {
                prop_assert!(h.relation() == Relation::Eq || *ci >= rat(0));
            }
        }
    }

    #[test]
    fn solve_results_substitute_to_zero(p in arb_sum(), q in arb_sum()) {
        let vars = [Var::new("x"), Var::new("y"), Var::new("z")];
        for a in solve(&[p.clone(), q.clone()], &vars) {
            prop_assert_eq!(p.eval(&a), Some(Rat::from_integer(0.into())));
            prop_assert_eq!(q.eval(&a), Some(Rat::from_integer(0.into())));
        }
    }

    #[test]
    fn eval_is_idempotent(p in arb_poly(), wrap in 0usize..4) {
        let e = from_poly(&p);
        let e = match wrap {
            0 => e,
            1 => CExpr::call("Factor", vec![e]),
            2 => CExpr::call("Expand", vec![CExpr::call("Factor", vec![e])]),
            _ => CExpr::call("Plus", vec![e, CExpr::call("f", vec![CExpr::sym("x")])]),
        };
        let mut engine = Engine::new();
        let once = engine.eval(&e, Scope::Scoped).unwrap();
        let twice = engine.eval(&once, Scope::Scoped).unwrap();
        prop_assert_eq!(once, twice);
    }
}
