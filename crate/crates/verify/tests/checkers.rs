use skepsis_core::kexpr::{arrow_type, parse_kexpr, KExpr, LocalContext, Signature};
use skepsis_core::poly::{ratio, Assignment, Var};
use skepsis_engine::local_oracle;
use skepsis_verify::{
    approx_bounds, check_farkas, check_ring_eq, check_solution, declare_trusted, farkas_sum, fmt_rat, sanity_check,
    Certificate, Pipeline, Sanity, SanityConfig, Status, TrustLedger, VerifyError,
};

fn real() -> KExpr {
    KExpr::constant("real")
}

fn sig() -> Signature {
    let mut sig = Signature::builtin();
    sig.declare("BesselJ".into(), vec![], arrow_type([real(), real()], real())).unwrap();
    sig
}

fn ctx() -> LocalContext {
    let mut ctx = LocalContext::new();
    ctx.push("x", real());
    ctx.push("y", real());
    ctx
}

fn k(text: &str) -> KExpr {
    parse_kexpr(text, &sig(), &ctx(), None).unwrap()
}

fn r(text: &str) -> KExpr {
    parse_kexpr(text, &sig(), &ctx(), Some(&real())).unwrap()
}

fn assignment(pairs: &[(&str, i64, i64)]) -> Assignment {
    pairs.iter().map(|(v, p, q)| (Var::new(*v), ratio(*p, *q))).collect()
}

fn sample_hyps() -> Vec<KExpr> {
    vec![k("2*x + 4*y ≤ 4"), k("-x ≤ 1"), k("-y ≤ -5")]
}

#[test]
fn ring_eq_examples() {
    assert!(check_ring_eq(&r("x^2 - 2*x + 1"), &r("(x + -1)^2")).is_ok());
    let e = r("x*y + 3");
    assert!(check_ring_eq(&e, &e).is_ok());
    assert!(matches!(check_ring_eq(&r("x"), &r("x + 1")), Err(VerifyError::UnableToSimplify { .. })));
}

#[test]
fn ring_eq_respects_the_carrier() {
    let mut ctx = LocalContext::new();
    ctx.push("n", KExpr::constant("nat"));
    let nat = KExpr::constant("nat");
    let sub = parse_kexpr("n - n", &sig(), &ctx, Some(&nat)).unwrap();
    let zero = parse_kexpr("0", &sig(), &ctx, Some(&nat)).unwrap();
    assert!(matches!(check_ring_eq(&sub, &zero), Err(VerifyError::OutOfFragment(_))));
}

#[test]
fn factor_check_examples() {
    let p = Pipeline::new(sig());
    let mut oracle = local_oracle();
    let (f, cert) = p.factor_check(&r("x^2 - 2*x + 1"), &mut oracle).unwrap();
    assert_eq!(skepsis_core::kexpr::print_kexpr(&f), "(x + -1)^2");
    assert!(matches!(cert.certificate(), Certificate::RingEq { .. }));
    let (f, _) = p.factor_check(&r("5"), &mut oracle).unwrap();
    assert_eq!(f, r("5"));
}

#[test]
fn farkas_examples() {
    let hyps = sample_hyps();
    let c = [ratio(1, 2), ratio(1, 1), ratio(2, 1)];
    assert!(check_farkas(&hyps, &c).is_ok());
    assert_eq!(farkas_sum(&hyps, &c).unwrap(), ratio(7, 1));
    let zero = [ratio(0, 1), ratio(0, 1), ratio(0, 1)];
    assert!(matches!(check_farkas(&hyps, &zero), Err(VerifyError::BadCertificate { row: None, .. })));
    let negative = [ratio(-1, 2), ratio(1, 1), ratio(2, 1)];
    assert!(matches!(check_farkas(&hyps, &negative), Err(VerifyError::BadCertificate { row: Some(0), .. })));
}

#[test]
fn farkas_through_the_oracle() {
    let cert = Pipeline::new(sig()).farkas(&sample_hyps(), &mut local_oracle()).unwrap();
    let Certificate::FarkasWitness { hyps, coeffs } = cert.certificate() else { panic!() };
    assert!(farkas_sum(hyps, coeffs).unwrap() > ratio(0, 1));
    let err = Pipeline::new(sig()).farkas(&[k("x ≤ 1")], &mut local_oracle()).unwrap_err();
    assert!(matches!(err, VerifyError::Oracle(_)));
}

#[test]
fn solution_examples() {
    assert!(check_solution(&[k("x^2 - 1 = 0")], &assignment(&[("x", 1, 1)])).is_ok());
    match check_solution(&[k("x - 1 = 0")], &assignment(&[("x", 2, 1)])) {
        Err(VerifyError::ResidueNonZero { equation: 0, residue }) => assert_eq!(residue, ratio(1, 1)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(check_solution(&[k("x = y")], &assignment(&[("x", 2, 1)])), Err(VerifyError::Unassigned(_))));
}

#[test]
fn the_sample_system_is_solved_and_checked() {
    let stmt = k("∃ x y : real, 99/20*y^2 - x^2*y + x*y = 0 ∧ 2*y^3 - 2*x^2*y^2 - 2*x^3 + 6381/4 = 0");
    let certs = Pipeline::new(sig()).solve(&[stmt], &mut local_oracle()).unwrap();
    let Certificate::SolutionWitness { assignment: a, system } = certs[0].certificate() else { panic!() };
    assert_eq!(system.len(), 2);
    assert_eq!(a[&Var::new("x")], ratio(11, 2));
    assert_eq!(a[&Var::new("y")], ratio(5, 1));
}

#[test]
fn both_roots_are_checked() {
    let certs = Pipeline::new(sig()).solve(&[k("x^2 - 1 = 0")], &mut local_oracle()).unwrap();
    assert_eq!(certs.len(), 2);
}

#[test]
fn uninterpreted_terms_are_not_factored() {
    let mut ctx = ctx();
    ctx.push("sin", arrow_type([real()], real()));
    let e = parse_kexpr("sin x", &sig(), &ctx, None).unwrap();
    let err = Pipeline::new(sig()).factor_check(&e, &mut local_oracle()).unwrap_err();
    assert!(matches!(err, VerifyError::OutOfFragment(_)), "{err:?}");
}

#[test]
fn sanity_examples() {
    let cfg = SanityConfig::default();
    let mut oracle = local_oracle();
    assert_eq!(sanity_check(&[k("x ≤ 0")], &k("x ≤ 1"), &mut oracle, &cfg).unwrap(), Sanity::Ok);
    match sanity_check(&[], &k("x = 0"), &mut oracle, &cfg).unwrap() {
        Sanity::Counterexample(Certificate::Counterexample { assignment: a }) => {
            assert_eq!(a, assignment(&[("x", 1, 1)]))
        }
        other => panic!("{other:?}"),
    }
    let hyps = [k("2*x + 4*y ≤ 4"), k("-x ≤ 1")];
    assert!(matches!(sanity_check(&hyps, &k("false"), &mut oracle, &cfg).unwrap(), Sanity::Counterexample(_)));
    assert_eq!(sanity_check(&sample_hyps(), &k("false"), &mut oracle, &cfg).unwrap(), Sanity::Ok);
}

#[test]
fn nonlinear_sanity_uses_the_grid() {
    let cfg = SanityConfig::default();
    let mut oracle = local_oracle();
    // x^2 = 2 has no rational solution; x^2 ≤ 1/4 ∧ x > 0 does
    assert_eq!(sanity_check(&[k("x^2 = 2")], &k("false"), &mut oracle, &cfg).unwrap(), Sanity::Ok);
    let Sanity::Counterexample(Certificate::Counterexample { assignment: a }) =
        sanity_check(&[k("x^2 ≤ 1/4"), k("0 < x")], &k("false"), &mut oracle, &cfg).unwrap()
    else {
        panic!()
    };
    assert_eq!(a[&Var::new("x")], ratio(1, 2));
}

#[test]
fn trusted_declarations() {
    let ledger = TrustLedger::new();
    let bessel = k("∀ x : real, x*BesselJ 2 x + x*BesselJ 0 x = 2*BesselJ 1 x");
    declare_trusted(&bessel, "FullSimplify", &sig(), &ledger).unwrap();
    assert_eq!(ledger.trusted_count(), 1);
    let absurd = declare_trusted(&k("false"), "user", &sig(), &ledger).unwrap();
    assert!(absurd.is_absurd());
    assert!(ledger.summary().contains("WARNING"));
    assert!(matches!(declare_trusted(&r("3"), "user", &sig(), &ledger), Err(VerifyError::NotAProposition(_))));
    assert_eq!(ledger.trusted_count(), 2);
}

#[test]
fn approximation_bounds() {
    let ledger = TrustLedger::new();
    let (cert, status) = approx_bounds(&r("1/3"), &ratio(1, 100), None, &ledger).unwrap();
    assert_eq!(status, Status::Verified);
    let Certificate::ApproxBound { lower, upper, .. } = &cert else { panic!() };
    assert!(*lower < ratio(1, 3) && ratio(1, 3) < *upper);
    assert!(upper - lower <= ratio(2, 100));

    let target = r("100 * BesselJ 2 (13/25)");
    let estimate = "3.3044780156".parse::<f64>().map(|_| ratio(33044780156, 10_000_000_000)).unwrap();
    let (cert, status) = approx_bounds(&target, &ratio(1, 1000), Some(&estimate), &ledger).unwrap();
    assert_eq!(status, Status::Trusted);
    assert_eq!(cert.claim(), "75977 / 23000 < 100 * BesselJ 2 (13 / 25) < 76023 / 23000");

    let (cert, status) = approx_bounds(&r("1/3"), &ratio(0, 1), None, &ledger).unwrap();
    assert_eq!(status, Status::Verified);
    let Certificate::ApproxBound { lower, upper, .. } = &cert else { panic!() };
    assert_eq!((fmt_rat(lower), fmt_rat(upper)), ("1 / 3".to_string(), "1 / 3".to_string()));
    assert!(matches!(approx_bounds(&target, &ratio(1, 10), None, &ledger), Err(VerifyError::NoEstimate(_))));
}
