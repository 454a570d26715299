//! One line per acceptance criterion. Runs with a plain `main` so that the
//! output is exactly those lines; exits nonzero if any criterion fails.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::net::TcpListener;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use skepsis_bridge::{serve, Backend, Client, Op, Oracle, Scope, Status as WireStatus};
use skepsis_core::cexpr::{parse_fullform, print_fullform, CExpr, MReal};
use skepsis_core::interpret::{elaborate, expr_of_mmexpr, pexpr_of_mmexpr, BackRuleSet, InstanceTable, PExpr};
use skepsis_core::kexpr::{
    decode_numeral, encode_numeral, parse_kexpr, print_kexpr, BinderInfo, KExpr, Level, LocalConst, LocalContext,
    Name, Signature,
};
use skepsis_core::poly::{rat, ratio, LinConstraint, Poly, Rat, Relation, Var};
use skepsis_core::reflect::encode_kernel_expr;
use skepsis_engine::{factor, farkas_coefficients, find_instance, local_oracle, Engine};
use skepsis_verify::{
    approx_bounds, check_farkas, check_ring_eq, declare_trusted, farkas_sum, poly_of_kexpr, Certificate, Pipeline,
    Status, TrustLedger,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn real() -> KExpr {
    KExpr::constant("real")
}

fn sig() -> Signature {
    let mut sig = Signature::builtin();
    sig.declare("BesselJ".into(), vec![], skepsis_core::kexpr::arrow_type([real(), real()], real())).unwrap();
    sig
}

fn ctx(vars: &[&str]) -> LocalContext {
    let mut ctx = LocalContext::new();
    for v in vars {
        ctx.push(v, real());
    }
    ctx
}

fn k(text: &str, vars: &[&str]) -> KExpr {
    parse_kexpr(text, &sig(), &ctx(vars), None).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    let took = t.elapsed();
    if took <= limit {
        Ok(())
    } else {
        Err(format!("took {took:?}, limit {limit:?}"))
    }
}

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let rng = proptest::test_runner::TestRng::deterministic_rng(config.rng_algorithm);
    TestRunner::new_with_rng(config, rng)
}

// ---- 1 ---------------------------------------------------------------------

fn running_example() -> Outcome {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_skepsis"))
        .args(["--context", "x:real", "--format", "lines", "factor", "x^2-2*x+1"])
        .env_remove("BRIDGE_ADDR")
        .output()
        .map_err(|e| e.to_string())?;
    within(t, Duration::from_secs(1))?;
    let text = String::from_utf8_lossy(&out.stdout);
    ensure!(out.status.code() == Some(0), "exit {:?}: {text}", out.status.code());
    ensure!(text.lines().any(|l| l == "result=(x + -1)^2"), "{text}");
    ensure!(text.lines().any(|l| l == "certificate=ring_eq") && text.lines().any(|l| l == "status=verified"), "{text}");

    // the same through the library, with the certificate in hand
    let e = k("x^2-2*x+1", &["x"]);
    let (f, cert) = Pipeline::new(sig()).factor_check(&e, &mut local_oracle()).map_err(|e| e.to_string())?;
    ensure!(print_kexpr(&f) == "(x + -1)^2", "{}", print_kexpr(&f));
    ensure!(matches!(cert.certificate(), Certificate::RingEq { .. }), "{cert:?}");
    Ok("(x + -1)^2, verified ring_eq".into())
}

// ---- 2 ---------------------------------------------------------------------

fn product_factors(e: &KExpr, out: &mut Vec<KExpr>) {
    let (head, args) = e.spine();
    if head.is_const_named("mul") && args.len() == 4 {
        product_factors(args[2], out);
        product_factors(args[3], out);
    } else {
        out.push(e.clone());
    }
}

fn factorization() -> Outcome {
    let xy = ["x", "y"];
    let t = Instant::now();
    let e = k("x^10 - y^10", &xy);
    let (f, _) = Pipeline::new(sig()).factor_check(&e, &mut local_oracle()).map_err(|e| e.to_string())?;
    within(t, Duration::from_secs(2))?;
    let mut got = Vec::new();
    product_factors(&f, &mut got);
    let got: Vec<Poly> = got.iter().map(|g| poly_of_kexpr(g).unwrap()).collect();
    let expected = [
        "x + -1 * y",
        "x + y",
        "x^4 + -1 * x^3 * y + x^2 * y^2 + -1 * x * y^3 + y^4",
        "x^4 + x^3 * y + x^2 * y^2 + x * y^3 + y^4",
    ];
    ensure!(got.len() == expected.len(), "{} factors: {}", got.len(), print_kexpr(&f));
    for p in expected {
        let want = poly_of_kexpr(&k(p, &xy)).unwrap();
        ensure!(got.iter().any(|g| *g == want || *g == want.neg()), "missing factor {p} in {}", print_kexpr(&f));
    }
    let expanded = got.iter().fold(Poly::int(1), |acc, g| acc.mul(g));
    ensure!(expanded == poly_of_kexpr(&e).unwrap(), "expansion differs");
    Ok(print_kexpr(&f))
}

// ---- 3 ---------------------------------------------------------------------

fn reflection_fidelity() -> Outcome {
    let x = r#"LeanLocal["17.27", "x", "bi", LeanConst["real", {}]]"#;
    let displayed = "LeanApp[LeanApp[LeanApp[LeanApp[LeanConst[\"add\", {0}], \n  LeanConst[\"real\", {}]], \
                     LeanConst[\"real.has_add\", {}]], \n  X], X]";
    let displayed = displayed.split_whitespace().collect::<Vec<_>>().join(" ").replace('X', x);

    let mut c = LocalContext::new();
    c.push_with_unique("17.27".into(), "x", real());
    let e = parse_kexpr("x + x", &Signature::builtin(), &c, None).map_err(|e| e.to_string())?;
    let printed = print_fullform(&encode_kernel_expr(&e));
    ensure!(printed == displayed, "printed {printed}\nexpected {displayed}");
    let back = expr_of_mmexpr(&Vec::new(), &parse_fullform(&displayed).unwrap()).map_err(|e| e.to_string())?;
    ensure!(back == e, "back-translation differs: {}", print_kexpr(&back));
    Ok("token-for-token, inverse bit-identical".into())
}

// ---- 4 ---------------------------------------------------------------------

fn farkas_pipeline() -> Outcome {
    let xy = ["x", "y"];
    let t = Instant::now();
    let rows = [[2, 4, 4], [-1, 0, 1], [0, -1, -5]];
    let hyp = |r: &[i64; 3]| k(&format!("{} * x + {} * y ≤ {}", r[0], r[1], r[2]), &xy);
    let hyps: Vec<KExpr> = rows.iter().map(hyp).collect();

    let cert = Pipeline::new(sig()).farkas(&hyps, &mut local_oracle()).map_err(|e| e.to_string())?;
    let Certificate::FarkasWitness { coeffs, .. } = cert.certificate() else { return Err("not a Farkas witness".into()) };

    let expected = vec![ratio(1, 2), rat(1), rat(2)];
    check_farkas(&hyps, &expected).map_err(|e| format!("reference witness rejected: {e}"))?;
    ensure!(farkas_sum(&hyps, &expected).unwrap() == rat(7), "reference witness does not sum to 7");

    let mut mutations = 0;
    for i in 0..expected.len() {
        for delta in [ratio(-1, 4), ratio(1, 4), rat(1)] {
            let mut bad = expected.clone();
            bad[i] += &delta;
            ensure!(check_farkas(&hyps, &bad).is_err(), "coefficient {i} + {delta} accepted");
            mutations += 1;
        }
    }
    for i in 0..rows.len() {
        for j in 0..2 {
            let mut changed = rows;
            changed[i][j] += 1;
            let hs: Vec<KExpr> = changed.iter().map(hyp).collect();
            ensure!(check_farkas(&hs, &expected).is_err(), "hypothesis {i} coefficient {j} + 1 accepted");
            mutations += 1;
        }
    }
    within(t, Duration::from_secs(1))?;
    let shown: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
    Ok(format!("oracle [{}] verified, [1/2, 1, 2] sums to 7, {mutations} mutations rejected", shown.join(", ")))
}

// ---- 5 ---------------------------------------------------------------------

/// Drops the type and instance arguments of an elaborated numeral.
fn bare_numeral(e: &KExpr) -> KExpr {
    let (head, args) = e.spine();
    match head.const_name().and_then(|n| n.last_str()) {
        Some(n @ ("bit0" | "bit1")) => KExpr::app(KExpr::constant(n), bare_numeral(args.last().unwrap())),
        Some(n @ ("zero" | "one")) => KExpr::constant(n),
        _ => e.clone(),
    }
}

fn numeral_law() -> Outcome {
    for n in 0u32..=10_000 {
        let n = BigUint::from(n);
        let d = decode_numeral(&encode_numeral(&n)).map_err(|e| format!("{n}: {e:?}"))?;
        ensure!(d == n, "decode(encode({n})) = {d}");
    }
    let (sig, inst, rules, nat) = (Signature::builtin(), InstanceTable::builtin(), BackRuleSet::builtin(), KExpr::constant("nat"));
    for n in 0u32..=1000 {
        let big = BigUint::from(n);
        let p = pexpr_of_mmexpr(&Vec::new(), &CExpr::int(n), &rules).map_err(|e| e.to_string())?;
        ensure!(p == PExpr::numeral(&big), "mint {n} is not a numeral pre-expression");
        let e = elaborate(&p, &sig, &inst, Some(&nat)).map_err(|e| e.to_string())?;
        ensure!(bare_numeral(&e) == encode_numeral(&big), "mint {n} elaborates to {}", print_kexpr(&e));
    }
    Ok("0..=10000 encode/decode, 0..=1000 back-translation".into())
}

// ---- 6 ---------------------------------------------------------------------

fn arb_name() -> impl Strategy<Value = Name> {
    ("[a-z]{1,3}", prop::option::of(0u64..20)).prop_map(|(s, n)| {
        let base = Name::from(s.as_str());
        n.map_or(base.clone(), |n| base.with_num(n))
    })
}

fn arb_level() -> impl Strategy<Value = Level> {
    let leaf = prop_oneof![Just(Level::Zero), "[uv]".prop_map(|s| Level::Param(Name::from(s.as_str())))];
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|l| Level::Succ(Box::new(l))),
            (inner.clone(), inner).prop_map(|(a, b)| Level::Max(Box::new(a), Box::new(b))),
        ]
    })
}

fn arb_info() -> impl Strategy<Value = BinderInfo> {
    prop_oneof![Just(BinderInfo::Default), Just(BinderInfo::Implicit), Just(BinderInfo::InstImplicit)]
}

fn arb_kexpr() -> impl Strategy<Value = KExpr> {
    let leaf = prop_oneof![
        (0u32..4).prop_map(KExpr::Var),
        arb_level().prop_map(KExpr::Sort),
        (arb_name(), prop::collection::vec(arb_level(), 0..2)).prop_map(|(n, ls)| KExpr::Const(n, ls)),
        (arb_name(), arb_name(), arb_info())
            .prop_map(|(u, p, info)| KExpr::Local(Arc::new(LocalConst { unique: u, pretty: p, info, ty: real() }))),
        arb_name().prop_map(|n| KExpr::MVar(n, Arc::new(KExpr::constant("nat")))),
    ];
    leaf.prop_recursive(4, 32, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, a)| KExpr::app(f, a)),
            (arb_name(), arb_info(), inner.clone(), inner.clone()).prop_map(|(n, i, d, b)| KExpr::lam(n, i, d, b)),
            (arb_name(), arb_info(), inner.clone(), inner.clone()).prop_map(|(n, i, d, b)| KExpr::pi(n, i, d, b)),
            (arb_name(), inner.clone(), inner.clone(), inner).prop_map(|(n, t, v, b)| KExpr::elet(n, t, v, b)),
        ]
    })
}

fn arb_poly_text() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![Just("x".to_string()), Just("y".to_string()), (0u32..12).prop_map(|n| n.to_string())];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} * {b})")),
            inner.clone().prop_map(|a| format!("(-{a})")),
            // exponents start at 1: the engine, like other CAS, leaves 0^0
            // indeterminate where the kernel says 1
            (inner, 1u32..4).prop_map(|(a, n)| format!("({a})^{n}")),
        ]
    })
}

fn round_trips() -> Outcome {
    runner(1000)
        .run(&arb_kexpr(), |e| {
            prop_assert_eq!(expr_of_mmexpr(&Vec::new(), &encode_kernel_expr(&e)).unwrap(), e);
            Ok(())
        })
        .map_err(|e| e.to_string())?;

    let oracle = RefCell::new(local_oracle());
    let pipeline = Pipeline::new(sig());
    runner(500)
        .run(&arb_poly_text(), |text| {
            let e = parse_kexpr(&text, &sig(), &ctx(&["x", "y"]), Some(&real())).unwrap();
            let back = pipeline.run("⟨e⟩ // LeanConvert // Activate", &e, &mut *oracle.borrow_mut()).unwrap();
            prop_assert!(check_ring_eq(&e, &back).is_ok(), "{} came back as {}", text, print_kexpr(&back));
            Ok(())
        })
        .map_err(|e| e.to_string())?;

    let zero_pow = parse_kexpr("x * 0^0", &sig(), &ctx(&["x"]), Some(&real())).unwrap();
    let refused = pipeline.run("⟨e⟩ // LeanConvert // Activate", &zero_pow, &mut *oracle.borrow_mut()).is_err();
    ensure!(refused, "0^0 came back as an answer");
    Ok("1000 encodings inverted, 500 pipeline results ring-equal, 0^0 refused".into())
}

// ---- 7 ---------------------------------------------------------------------

fn arb_poly() -> impl Strategy<Value = Poly> {
    let var = |i: usize| Poly::var(["x", "y", "z"][i]);
    let term = (prop::collection::vec(0u32..=2, 3), -10i64..=10).prop_map(move |(e, c)| {
        e.iter().enumerate().fold(Poly::int(c), |acc, (i, &k)| acc.mul(&var(i).pow(k)))
    });
    let linear = (0usize..3, -3i64..=3, 0usize..3, -3i64..=3)
        .prop_map(move |(i, a, j, b)| var(i).add(&var(j).scale(&rat(a))).add(&Poly::int(b)));
    prop_oneof![
        prop::collection::vec(term, 1..=6).prop_map(|ts| ts.iter().fold(Poly::zero(), |acc, t| acc.add(t))),
        prop::collection::vec(linear, 1..=3).prop_map(|fs| fs.iter().fold(Poly::int(1), |acc, f| acc.mul(f))),
    ]
    .prop_filter("nonzero", |p| !p.is_zero())
}

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

fn row_poly(r: &Row) -> Poly {
    Poly::var("x").scale(&rat(r.a)).add(&Poly::var("y").scale(&rat(r.b))).add(&Poly::int(r.c))
}

fn row_prop(r: &Row) -> KExpr {
    let op = match r.rel {
        Relation::Le => "≤",
        Relation::Lt => "<",
        Relation::Eq => "=",
    };
    k(&format!("{} * x + {} * y + {} {op} 0", r.a, r.b, r.c), &["x", "y"])
}

/// Is there a point with coordinates of denominator ≤ 8 in [-4, 4]²?
fn on_grid(rows: &[Row]) -> bool {
    let axis: Vec<Rat> = (1..=8i64)
        .flat_map(|q| (-4 * q..=4 * q).map(move |p| ratio(p, q)))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    axis.iter().any(|x| {
        axis.iter().any(|y| {
            rows.iter().all(|r| {
                let v = rat(r.a) * x + rat(r.b) * y + rat(r.c);
                match r.rel {
                    Relation::Le => v <= rat(0),
                    Relation::Lt => v < rat(0),
                    Relation::Eq => v == rat(0),
                }
            })
        })
    })
}

fn oracle_equivalence() -> Outcome {
    runner(1000)
        .run(&arb_poly(), |p| {
            let product = factor(&p).iter().fold(Poly::int(1), |acc, (f, k)| acc.mul(&f.pow(*k)));
            prop_assert_eq!(product, p);
            Ok(())
        })
        .map_err(|e| format!("factor: {e}"))?;

    runner(200)
        .run(&prop::collection::vec(arb_row(), 1..=4), |rows| {
            let cs: Vec<LinConstraint> = rows.iter().map(|r| LinConstraint::new(row_poly(r), r.rel).unwrap()).collect();
            let found = find_instance(&cs, 16).unwrap();
            if let Some(a) = &found {
                let mut a = a.clone();
                for v in ["x", "y"] {
                    a.entry(Var::new(v)).or_insert_with(|| rat(0));
                }
                prop_assert!(cs.iter().all(|c| c.satisfied_by(&a) == Some(true)), "{:?} fails {:?}", a, rows);
            }
            prop_assert_eq!(found.is_some() || !on_grid(&rows), true, "grid point missed for {:?}", rows);
            Ok(())
        })
        .map_err(|e| format!("find_instance: {e}"))?;

    runner(200)
        .run(&prop::collection::vec(arb_row(), 2..=5), |rows| {
            let cs: Vec<LinConstraint> = rows.iter().map(|r| LinConstraint::new(row_poly(r), r.rel).unwrap()).collect();
            let inst = find_instance(&cs, 16).unwrap();
            let cert = farkas_coefficients(&cs, 16).unwrap();
            prop_assert!(inst.is_some() != cert.is_some(), "instance {:?}, certificate {:?}", inst, cert);
            if let Some(c) = cert {
                let hyps: Vec<KExpr> = rows.iter().map(row_prop).collect();
                prop_assert!(check_farkas(&hyps, &c).is_ok(), "certificate {:?} rejected for {:?}", c, rows);
            }
            Ok(())
        })
        .map_err(|e| format!("farkas: {e}"))?;
    Ok("factor 1000, find_instance 200, farkas alternative 200; no disagreements".into())
}

// ---- 8 ---------------------------------------------------------------------

fn spawn_engine() -> (String, thread::JoinHandle<()>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap().to_string();
    (addr, thread::spawn(move || serve(&listener, &mut Engine::new()).unwrap()))
}

/// Answers every request with the request itself.
struct Echo;

impl Backend for Echo {
    type Error = std::convert::Infallible;

    fn eval(&mut self, e: &CExpr, _: Scope) -> Result<CExpr, Self::Error> {
        Ok(e.clone())
    }
}

#[derive(Debug, Clone)]
enum Step {
    Define { global: bool, i: u8, k: i8 },
    Use { i: u8 },
}

fn arb_cexpr() -> impl Strategy<Value = CExpr> {
    let leaf = prop_oneof![
        "[a-zA-Z$][a-zA-Z0-9$]{0,5}".prop_map(CExpr::Sym),
        "[ -~\\n\\tλ⟨]{0,8}".prop_map(CExpr::Str),
        any::<i128>().prop_map(|n| CExpr::Int(BigInt::from(n))),
        (any::<bool>(), "[0-9]{1,12}", 0usize..6, -5i64..5).prop_map(|(negative, digits, point, exp10)| {
            let point = point.min(digits.len());
            CExpr::Real(MReal { negative, digits, point, exp10 })
        }),
    ];
    leaf.prop_recursive(4, 48, 5, |inner| {
        (inner.clone(), prop::collection::vec(inner, 0..5)).prop_map(|(h, args)| CExpr::App(Box::new(h), args))
    })
}

fn server_behaviour() -> Outcome {
    let steps = prop::collection::vec(
        prop_oneof![
            (any::<bool>(), 0u8..4, -5i8..5).prop_map(|(global, i, k)| Step::Define { global, i, k }),
            (0u8..4).prop_map(|i| Step::Use { i }),
        ],
        1..12,
    );
    runner(64)
        .run(&steps, |steps| {
            let (addr, handle) = spawn_engine();
            let mut c = Client::connect(&addr).unwrap();
            let mut global: BTreeMap<u8, i8> = BTreeMap::new();
            for step in &steps {
                match *step {
                    Step::Define { global: true, i, k } => {
                        c.execute_global(&format!("f{i}[x_] := Plus[x, {k}]")).unwrap();
                        global.insert(i, k);
                    }
                    Step::Define { global: false, i, k } => {
                        let r = c.execute(&format!("f{i}[x_] := Plus[x, {k}]; f{i}[0]")).unwrap();
                        prop_assert_eq!(print_fullform(&r), k.to_string());
                    }
                    Step::Use { i } => {
                        let want = global.get(&i).map_or(format!("f{i}[0]"), |k| k.to_string());
                        prop_assert_eq!(print_fullform(&c.execute(&format!("f{i}[0]")).unwrap()), want);
                    }
                }
            }
            c.shutdown().unwrap();
            handle.join().unwrap();
            Ok(())
        })
        .map_err(|e| format!("isolation: {e}"))?;

    let (addr, handle) = spawn_engine();
    let mut c = Client::connect(&addr).unwrap();
    c.execute_global("sq[x_] := Power[x, 2]").map_err(|e| e.to_string())?;
    drop(c);
    let mut c = Client::connect(&addr).unwrap();
    let r = c.execute("sq[3]").map_err(|e| e.to_string())?;
    ensure!(print_fullform(&r) == "9", "global definition lost: {r}");
    c.shutdown().unwrap();
    handle.join().unwrap();

    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap().to_string();
    let handle = thread::spawn(move || serve(&listener, &mut Echo).unwrap());
    let client = RefCell::new(Client::connect(&addr).unwrap());
    runner(1000)
        .run(&arb_cexpr(), |e| {
            let text = print_fullform(&e);
            let resp = client.borrow_mut().request(Op::EvalScoped, &text).unwrap();
            prop_assert_eq!(resp.status, WireStatus::Ok);
            prop_assert_eq!(&resp.payload, &text);
            Ok(())
        })
        .map_err(|e| format!("wire: {e}"))?;
    client.into_inner().shutdown().unwrap();
    handle.join().unwrap();
    Ok("64 isolation sequences, global persistence, 1000 bit-exact wire round trips".into())
}

// ---- 9 ---------------------------------------------------------------------

fn trust_accounting() -> Outcome {
    let ledger = TrustLedger::new();
    let identity = k("∀ x : real, x*BesselJ 2 x + x*BesselJ 0 x = 2*BesselJ 1 x", &[]);
    declare_trusted(&identity, "external CAS", &sig(), &ledger).map_err(|e| e.to_string())?;
    ensure!(ledger.trusted_count() == 1 && ledger.verified_count() == 0, "{}", ledger.summary());
    ensure!(ledger.summary().contains("1 trusted"), "{}", ledger.summary());

    let target = parse_kexpr("100 * BesselJ 2 (13/25)", &sig(), &LocalContext::new(), Some(&real())).unwrap();
    let estimate = ratio(33_044_780_156, 10_000_000_000);
    let (cert, status) = approx_bounds(&target, &ratio(1, 1000), Some(&estimate), &ledger).map_err(|e| e.to_string())?;
    ensure!(status == Status::Trusted, "approximation of an uninterpreted term marked {status}");
    let shown = cert.claim();
    ensure!(shown == "75977 / 23000 < 100 * BesselJ 2 (13 / 25) < 76023 / 23000", "rendered {shown}");
    Ok(format!("identity trusted (count 1); {shown}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("running example end-to-end", running_example),
        ("factorization of x^10 - y^10", factorization),
        ("reflection fidelity of x + x", reflection_fidelity),
        ("Farkas pipeline", farkas_pipeline),
        ("numeral law", numeral_law),
        ("round-trip property suite", round_trips),
        ("oracle-equivalence suite", oracle_equivalence),
        ("server behaviour", server_behaviour),
        ("trust accounting", trust_accounting),
    ];
    // keep failing properties quiet; their message is reported below
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        let ms = t.elapsed().as_millis();
        match result {
            Ok(detail) => println!("PASS criterion {}: {title} ({ms} ms): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {title} ({ms} ms): {}", i + 1, why.replace('\n', " "));
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
