use num_bigint::BigUint;
use skepsis_core::cexpr::{parse_fullform, print_fullform, CExpr};
use skepsis_core::interpret::{elaborate, expr_of_mmexpr, pexpr_of_mmexpr, BackRuleSet, ElabError, InstanceTable, PExpr};
use skepsis_core::kexpr::{decode_numeral, BinderInfo, parse_kexpr, print_kexpr, KExpr, Level, LocalContext, Signature};
use skepsis_core::reflect::{
    collapse, encode_kernel_expr, inflate, lean_form, strip_inactive, ForwardRuleSet, ReflectError,
};

const X: &str = r#"LeanLocal["17.27", "x", "bi", LeanConst["real", {}]]"#;

fn ctx_x() -> LocalContext {
    let mut ctx = LocalContext::new();
    ctx.push_with_unique("17.27".into(), "x".into(), KExpr::constant("real"));
    ctx
}

fn x() -> KExpr {
    KExpr::Local(ctx_x().lookup("x").unwrap().clone())
}

fn ff(s: &str) -> CExpr {
    parse_fullform(&s.replace('X', X)).unwrap()
}

#[test]
fn encoding_of_x_plus_x() {
    let sig = Signature::builtin();
    let e = parse_kexpr("x + x", &sig, &ctx_x(), None).unwrap();
    let expected = ff(r#"LeanApp[LeanApp[LeanApp[LeanApp[LeanConst["add", {0}], LeanConst["real", {}]], LeanConst["real.has_add", {}]], X], X]"#);
    assert_eq!(encode_kernel_expr(&e), expected);
    assert_eq!(expr_of_mmexpr(&vec![], &expected).unwrap(), e);
}

#[test]
fn small_encodings() {
    assert_eq!(encode_kernel_expr(&KExpr::Var(0)), ff("LeanVar[0]"));
    let one = KExpr::Sort(Level::Succ(Box::new(Level::Zero)));
    assert_eq!(encode_kernel_expr(&one), ff("LeanSort[1]"));
    assert_eq!(expr_of_mmexpr(&vec![], &ff("LeanSort[1]")).unwrap(), one);
    assert!(expr_of_mmexpr(&vec![], &ff("Plus[1, 2]")).is_err());
}

#[test]
fn running_example_reflects_to_idiomatic_arithmetic() {
    let sig = Signature::builtin();
    let e = parse_kexpr("x^2 - 2*x + 1", &sig, &ctx_x(), None).unwrap();
    let lf = lean_form(&encode_kernel_expr(&e), &ForwardRuleSet::builtin()).unwrap();
    assert_eq!(
        lf,
        ff("Inactive[Plus][Inactive[Subtract][Inactive[Power][X, Inactive[Times][2, 1]], \
            Inactive[Times][Inactive[Times][2, 1], X]], 1]")
    );
    assert_eq!(
        strip_inactive(&lf),
        ff("Plus[Subtract[Power[X, Times[2, 1]], Times[Times[2, 1], X]], 1]")
    );
}

#[test]
fn bit1_is_twice_plus_one() {
    let lf = lean_form(&ff(r#"LeanApp[LeanConst["bit1", {}], t]"#), &ForwardRuleSet::builtin()).unwrap();
    assert_eq!(lf, ff("Inactive[Plus][Inactive[Times][2, LeanForm[t]], 1]").replace(&mut |c| {
        c.is_call("LeanForm").then(|| c.args()[0].clone())
    }));
}

#[test]
fn uninterpreted_local_is_kept() {
    assert_eq!(lean_form(&ff("X"), &ForwardRuleSet::builtin()).unwrap(), ff("X"));
}

#[test]
fn empty_rule_set_is_identity_on_encodings() {
    let sig = Signature::builtin();
    let e = parse_kexpr("fun y : real, y * x + 3", &sig, &ctx_x(), None).unwrap();
    let enc = encode_kernel_expr(&e);
    assert_eq!(lean_form(&enc, &ForwardRuleSet::empty()).unwrap(), enc);
}

#[test]
fn lambda_becomes_function_with_fresh_symbol() {
    let sig = Signature::builtin();
    let e = parse_kexpr("fun x : real, x + x", &sig, &LocalContext::new(), None).unwrap();
    let lf = lean_form(&encode_kernel_expr(&e), &ForwardRuleSet::builtin()).unwrap();
    let printed = print_fullform(&lf);
    assert!(printed.starts_with("Inactive[Function][x$"), "{printed}");
    let back = pexpr_of_mmexpr(&vec![], &strip_inactive(&lf), &BackRuleSet::builtin()).unwrap();
    let ty = KExpr::pi("_".into(), BinderInfo::Default, KExpr::constant("real"), KExpr::constant("real"));
    let k = elaborate(&back, &sig, &InstanceTable::builtin(), Some(&ty)).unwrap();
    assert_eq!(k, e);
}

#[test]
fn fresh_binder_symbols_avoid_existing_ones() {
    let enc = ff(r#"LeanLam["x", "bd", LeanConst["real", {}], LeanApp[LeanVar[0], x$1]]"#);
    let lf = lean_form(&enc, &ForwardRuleSet::builtin()).unwrap();
    let bound = lf.args()[0].clone();
    assert_ne!(bound, CExpr::sym("x$1"));
    assert_ne!(bound, CExpr::sym("x"));
}

#[test]
fn unbound_variable_is_an_error() {
    assert!(matches!(
        lean_form(&ff("LeanVar[0]"), &ForwardRuleSet::builtin()),
        Err(ReflectError::UnboundVariable(0))
    ));
}

#[test]
fn registered_rule_takes_precedence() {
    let mut rules = ForwardRuleSet::builtin();
    rules
        .register(ff(r#"LeanApp[LeanApp[LeanApp[LeanApp[LeanConst["add", _], _], _], a_], b_]"#), ff("Inactive[Max][LeanForm[a], LeanForm[b]]"))
        .unwrap();
    let sig = Signature::builtin();
    let e = parse_kexpr("x + 1", &sig, &ctx_x(), None).unwrap();
    assert_eq!(lean_form(&encode_kernel_expr(&e), &rules).unwrap(), ff("Inactive[Max][X, 1]"));
    assert!(rules.register(ff("F[a_]"), ff("LeanForm[b]")).is_err());
}

#[test]
fn relations_become_inactive_comparisons() {
    let sig = Signature::builtin();
    let mut ctx = ctx_x();
    ctx.push("y", KExpr::constant("real"));
    let e = parse_kexpr("2*x + 4*y <= 4", &sig, &ctx, None).unwrap();
    let lf = lean_form(&encode_kernel_expr(&e), &ForwardRuleSet::builtin()).unwrap();
    assert!(lf.is_call("Inactive") || lf.head_sym().is_none());
    assert!(print_fullform(&lf).starts_with("Inactive[LessEqual]["), "{}", print_fullform(&lf));
}

#[test]
fn forall_over_props_only() {
    let sig = Signature::builtin();
    let e = parse_kexpr("Pi z : real, z * z >= 0", &sig, &LocalContext::new(), None).unwrap();
    let lf = lean_form(&encode_kernel_expr(&e), &ForwardRuleSet::builtin()).unwrap();
    assert!(print_fullform(&lf).starts_with("Inactive[ForAll][z$"));
    let t = parse_kexpr("real -> real", &sig, &LocalContext::new(), None).unwrap();
    let lf = lean_form(&encode_kernel_expr(&t), &ForwardRuleSet::builtin()).unwrap();
    assert!(print_fullform(&lf).starts_with("LeanPi["), "{}", print_fullform(&lf));
}

#[test]
fn let_is_substituted() {
    let sig = Signature::builtin();
    let e = parse_kexpr("let z : real := x * 2 in z + z", &sig, &ctx_x(), None).unwrap();
    let lf = strip_inactive(&lean_form(&encode_kernel_expr(&e), &ForwardRuleSet::builtin()).unwrap());
    assert_eq!(lf, ff("Plus[Times[X, Times[2, 1]], Times[X, Times[2, 1]]]"));
}

#[test]
fn collapse_and_inflate() {
    let e = ff("Plus[1, X, Times[2, X]]");
    let (small, table) = collapse(&e);
    assert_eq!(table.len(), 1);
    assert_eq!(print_fullform(&small), "Plus[1, $k1, Times[2, $k1]]");
    assert_eq!(inflate(&small, &table).unwrap(), e);
}

#[test]
fn factored_term_back_translates_to_expected_preexpr() {
    let f = ff("Power[Plus[-1, X], 2]");
    assert_eq!(print_fullform(&f), format!("Power[Plus[-1, {X}], 2]"));
    let p = pexpr_of_mmexpr(&vec![], &f, &BackRuleSet::builtin()).unwrap();
    let expected = PExpr::apps(
        PExpr::constant("pow_nat"),
        [
            PExpr::apps(
                PExpr::constant("add"),
                [PExpr::app(PExpr::constant("neg"), PExpr::constant("one")), PExpr::from(x())],
            ),
            PExpr::app(PExpr::constant("bit0"), PExpr::constant("one")),
        ],
    );
    assert_eq!(p, expected);
    let sig = Signature::builtin();
    let k = elaborate(&p, &sig, &InstanceTable::builtin(), Some(&KExpr::constant("real"))).unwrap();
    assert_eq!(k, parse_kexpr("(-1 + x)^2", &sig, &ctx_x(), None).unwrap());
    let printed = print_fullform(&encode_kernel_expr(&k));
    for inst in ["real.has_pow_nat", "real.has_add", "real.has_neg", "real.has_one", "nat.has_one"] {
        assert!(printed.contains(inst), "{inst} missing in {printed}");
    }
}

#[test]
fn sym_rules_and_registration() {
    let rules = BackRuleSet::builtin();
    assert_eq!(pexpr_of_mmexpr(&vec![], &ff("Real"), &rules).unwrap(), PExpr::constant("real"));
    let mut empty = BackRuleSet::empty();
    assert!(pexpr_of_mmexpr(&vec![], &ff("Real"), &empty).is_err());
    empty.register_sym_rule("Real", PExpr::constant("real"));
    assert_eq!(pexpr_of_mmexpr(&vec![], &ff("Real"), &empty).unwrap(), PExpr::constant("real"));
}

#[test]
fn numeral_elaboration() {
    let sig = Signature::builtin();
    let inst = InstanceTable::builtin();
    let six = PExpr::numeral(&BigUint::from(6u8));
    let k = elaborate(&six, &sig, &inst, Some(&KExpr::constant("nat"))).unwrap();
    assert_eq!(print_kexpr(&k), "6");
    assert!(print_fullform(&encode_kernel_expr(&k)).contains("nat.has_one"));
    assert!(matches!(elaborate(&six, &sig, &inst, None), Err(ElabError::AmbiguousType(_))));
}

#[test]
fn numeral_invariant_up_to_1000() {
    let sig = Signature::builtin();
    let inst = InstanceTable::builtin();
    let rules = BackRuleSet::builtin();
    let nat = KExpr::constant("nat");
    for n in 0u32..=1000 {
        let p = pexpr_of_mmexpr(&vec![], &CExpr::int(n), &rules).unwrap();
        assert_eq!(p, PExpr::numeral(&BigUint::from(n)));
        let k = elaborate(&p, &sig, &inst, Some(&nat)).unwrap();
        assert_eq!(decode_numeral(&k).unwrap(), BigUint::from(n), "{n}");
    }
}

#[test]
fn let_bindings_are_substituted_before_translation() {
    let rules = ForwardRuleSet::builtin();
    let real = || KExpr::constant("real");
    let sum = parse_kexpr("x + x", &Signature::builtin(), &ctx_x(), None).unwrap();
    let body = sum.abstract_local(&"17.27".into());
    let e = KExpr::elet("y".into(), real(), x(), body);
    assert_eq!(
        lean_form(&encode_kernel_expr(&e), &rules).unwrap(),
        lean_form(&encode_kernel_expr(&sum), &rules).unwrap()
    );

    // fun z, let y := z in fun w, y  is  fun z, fun w, z
    let lam = |b| KExpr::lam("z".into(), BinderInfo::Default, real(), b);
    let inner = KExpr::lam("w".into(), BinderInfo::Default, real(), KExpr::Var(1));
    let with_let = lam(KExpr::elet("y".into(), real(), KExpr::Var(0), inner.clone()));
    let plain = lam(KExpr::lam("w".into(), BinderInfo::Default, real(), KExpr::Var(1)));
    assert_eq!(
        lean_form(&encode_kernel_expr(&with_let), &rules).unwrap(),
        lean_form(&encode_kernel_expr(&plain), &rules).unwrap()
    );
}
