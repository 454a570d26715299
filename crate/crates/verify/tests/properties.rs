use proptest::prelude::*;
use skepsis_core::kexpr::{parse_kexpr, KExpr, LocalContext, Signature};
use skepsis_core::poly::{rat, ratio, Assignment, LinConstraint, Poly, Rat, Relation, Var};
use skepsis_engine::{farkas_coefficients, local_oracle};
use skepsis_verify::{
    check_farkas, check_ring_eq, declare_trusted, poly_of_kexpr, sanity_check, Pipeline, Sanity, SanityConfig,
    Status, TrustLedger, Walker,
};

const VARS: [&str; 3] = ["x", "y", "z"];

fn ctx() -> LocalContext {
    let mut ctx = LocalContext::new();
    for v in VARS {
        ctx.push(v, KExpr::constant("real"));
    }
    ctx
}

fn real(text: &str) -> KExpr {
    parse_kexpr(text, &Signature::builtin(), &ctx(), Some(&KExpr::constant("real"))).unwrap()
}

fn prop(text: &str) -> KExpr {
    parse_kexpr(text, &Signature::builtin(), &ctx(), None).unwrap()
}

fn term_text(c: i64, exps: &[u32]) -> String {
    let mut parts = vec![c.to_string()];
    for (v, e) in VARS.iter().zip(exps) {
        match e {
            0 => {}
            1 => parts.push(v.to_string()),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    parts.join("*")
}

/// Surface text of a polynomial: sums of terms, sometimes a product of
/// small binomials so that factoring finds something.
fn arb_poly_text() -> impl Strategy<Value = String> {
    let term = (-10i64..=10, prop::collection::vec(0u32..=2, 3));
    prop_oneof![
        prop::collection::vec(term, 1..=5)
            .prop_map(|ts| ts.iter().map(|(c, e)| format!("({})", term_text(*c, e))).collect::<Vec<_>>().join(" + ")),
        prop::collection::vec((0usize..3, -4i64..=4, 1u32..=2), 1..=3).prop_map(|fs| {
            fs.iter().map(|(v, c, e)| format!("({} + {c})^{e}", VARS[*v])).collect::<Vec<_>>().join(" * ")
        }),
    ]
}

/// Brute-force oracle: both sides agree at a handful of rational points.
fn agree_at_points(a: &Poly, b: &Poly) -> bool {
    let points = [(1, 2, 3), (-2, 5, 7), (3, -1, 11), (13, 17, -19), (4, 9, 2), (-7, -3, 5), (23, 6, -29)];
    points.iter().all(|&(x, y, z)| {
        let asg: Assignment =
            [("x", x), ("y", y), ("z", z)].iter().map(|(v, n)| (Var::new(*v), Rat::from_integer((*n).into()))).collect();
        a.subst_all(&asg) == b.subst_all(&asg)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// The full pipeline's answer is ring-equal to its input, and the
    /// checker's verdict agrees with evaluation, also on wrong answers.
    #[test]
    fn ring_eq_agrees_with_evaluation(text in arb_poly_text()) {
        let e = real(&text);
        let p = Pipeline::default();
        let mut oracle = local_oracle();
        let (factored, _) = p.factor_check(&e, &mut oracle).unwrap();
        let (pe, pf) = (poly_of_kexpr(&e).unwrap(), poly_of_kexpr(&factored).unwrap());
        prop_assert!(agree_at_points(&pe, &pf));
        let wrong = real(&format!("({text}) + 1"));
        let pw = poly_of_kexpr(&wrong).unwrap();
        prop_assert_eq!(check_ring_eq(&e, &wrong).is_ok(), agree_at_points(&pe, &pw));
        prop_assert!(check_ring_eq(&e, &wrong).is_err());
    }
}

#[derive(Debug, Clone)]
struct Row {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    strict: bool,
}

fn arb_row() -> impl Strategy<Value = Row> {
    (-3i64..=3, -3i64..=3, -3i64..=3, -6i64..=6, prop::bool::weighted(0.3))
        .prop_map(|(a, b, c, d, strict)| Row { a, b, c, d, strict })
}

fn row_prop(r: &Row) -> KExpr {
    let op = if r.strict { "<" } else { "≤" };
    prop(&format!("{}*x + {}*y + {}*z {op} {}", r.a, r.b, r.c, r.d))
}

fn row_constraint(r: &Row) -> LinConstraint {
    let p = Poly::var("x")
        .scale(&rat(r.a))
        .add(&Poly::var("y").scale(&rat(r.b)))
        .add(&Poly::var("z").scale(&rat(r.c)))
        .sub(&Poly::int(r.d));
    LinConstraint::new(p, if r.strict { Relation::Lt } else { Relation::Le }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn farkas_certificates_check_and_perturbations_fail(
        mut rows in prop::collection::vec(arb_row(), 1..=5),
        weights in prop::collection::vec(0i64..=3, 5),
        gap in 0i64..=3,
    ) {
        // close the system with a row contradicting a nonnegative
        // combination of the others, so that it is infeasible
        let w = |i: usize| if weights[..rows.len()].iter().all(|&x| x == 0) && i == 0 { 1 } else { weights[i] };
        let comb = |f: &dyn Fn(&Row) -> i64| -> i64 { rows.iter().enumerate().map(|(i, r)| w(i) * f(r)).sum() };
        let strict = gap == 0;
        rows.push(Row { a: -comb(&|r| r.a), b: -comb(&|r| r.b), c: -comb(&|r| r.c), d: -comb(&|r| r.d) - gap, strict });
        let cs: Vec<LinConstraint> = rows.iter().map(row_constraint).collect();
        let coeffs = farkas_coefficients(&cs, 16).unwrap().expect("infeasible by construction");
        let hyps: Vec<KExpr> = rows.iter().map(row_prop).collect();
        prop_assert!(check_farkas(&hyps, &coeffs).is_ok());
        for i in 0..coeffs.len() {
            let mut bad = coeffs.clone();
            bad[i] = -(&bad[i] + rat(1));
            prop_assert!(check_farkas(&hyps, &bad).is_err());
        }
        let zeros = vec![rat(0); coeffs.len()];
        prop_assert!(check_farkas(&hyps, &zeros).is_err());
    }

    #[test]
    fn sanity_counterexamples_substitute(rows in prop::collection::vec(arb_row(), 0..=4), goal in arb_row()) {
        let hyps: Vec<KExpr> = rows.iter().map(row_prop).collect();
        let goal = row_prop(&goal);
        let mut oracle = local_oracle();
        if let Sanity::Counterexample(c) = sanity_check(&hyps, &goal, &mut oracle, &SanityConfig::default()).unwrap() {
            let skepsis_verify::Certificate::Counterexample { assignment } = c else { panic!() };
            let mut w = Walker::new();
            for h in &hyps {
                for (p, rel) in w.constraints(h).unwrap() {
                    let v = p.subst_all(&assignment).as_constant().unwrap();
                    prop_assert!(rel.holds(&v));
                }
            }
            let (p, rel) = w.relation(&goal).unwrap();
            let v = p.subst_all(&assignment).as_constant().unwrap();
            prop_assert!(!rel.holds(&v));
        }
    }

    #[test]
    fn ledger_is_monotone(ops in prop::collection::vec(0u8..3, 1..20)) {
        let ledger = TrustLedger::new();
        let sig = Signature::builtin();
        let mut seen: Vec<Status> = Vec::new();
        for op in ops {
            match op {
                0 => {
                    ledger.record(check_ring_eq(&real("x + x"), &real("2*x")).unwrap());
                }
                1 => {
                    declare_trusted(&prop("x ≤ x + 1"), "test", &sig, &ledger).unwrap();
                }
                _ => {
                    // failures leave no trace
                    prop_assert!(check_ring_eq(&real("x"), &real("y")).is_err());
                }
            }
            let snap = ledger.snapshot();
            prop_assert!(snap.len() >= seen.len());
            for (old, new) in seen.iter().zip(&snap) {
                prop_assert_eq!(*old, new.status);
            }
            seen = snap.iter().map(|e| e.status).collect();
            prop_assert_eq!(ledger.verified_count() + ledger.trusted_count(), snap.len());
        }
    }
}

#[test]
fn farkas_perturbation_on_the_sample_system() {
    let hyps = [prop("2*x + 4*y ≤ 4"), prop("-x ≤ 1"), prop("-y ≤ -5")];
    let good = [ratio(1, 2), ratio(1, 1), ratio(2, 1)];
    assert!(check_farkas(&hyps, &good).is_ok());
    for i in 0..3 {
        for delta in [ratio(1, 3), ratio(-1, 3)] {
            let mut bad = good.clone();
            bad[i] += delta;
            assert!(check_farkas(&hyps, &bad).is_err(), "{bad:?}");
        }
    }
}
