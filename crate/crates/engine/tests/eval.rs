use skepsis_bridge::Scope;
use skepsis_core::cexpr::{parse_fullform, print_fullform, CExpr};
use skepsis_core::poly::{ratio, LinConstraint, Poly, Var};
use skepsis_engine::{farkas_coefficients, find_instance, to_poly, Engine, EngineConfig, EngineError};

fn run(engine: &mut Engine, src: &str) -> String {
    let e = parse_fullform(src).unwrap();
    print_fullform(&engine.eval(&e, Scope::Scoped).unwrap())
}

fn eval(src: &str) -> String {
    run(&mut Engine::new(), src)
}

fn x() -> Poly {
    Poly::var(Var::new("x"))
}

fn y() -> Poly {
    Poly::var(Var::new("y"))
}

#[test]
fn numeric_folding() {
    assert_eq!(eval("Plus[2, 3]"), "5");
    assert_eq!(eval("Times[Rational[1, 2], 4]"), "2");
    assert_eq!(eval("Power[2, -2]"), "Rational[1, 4]");
    assert_eq!(eval("Plus[0.5, Rational[1, 2]]"), "1");
}

#[test]
fn irreducible_terms_are_unchanged() {
    assert_eq!(eval("Plus[Factor, Plus]"), "Plus[Factor, Plus]");
    assert_eq!(eval("f[x, y]"), "f[x, y]");
}

#[test]
fn factor_of_the_running_example() {
    assert_eq!(eval("Factor[Plus[1, Times[-2, X], Power[X, 2]]]"), "Power[Plus[-1, X], 2]");
    assert_eq!(eval("Plus[1, Times[-2, X], Power[X, 2]] // Factor"), "Power[Plus[-1, X], 2]");
}

#[test]
fn expand_and_canonical_layout() {
    assert_eq!(eval("Expand[Power[Plus[-1, X], 2]]"), "Plus[1, Times[-2, X], Power[X, 2]]");
    assert_eq!(eval("Expand[Times[Plus[x, y], Plus[x, Times[-1, y]]]]"), "Plus[Power[x, 2], Times[-1, Power[y, 2]]]");
}

#[test]
fn inactive_blocks_evaluation_until_activated() {
    assert_eq!(eval("Inactive[Plus][2, 3]"), "Inactive[Plus][2, 3]");
    assert_eq!(eval("Activate[Inactive[Plus][2, Inactive[Times][2, 1]]]"), "4");
}

#[test]
fn lean_convert_then_factor() {
    let src = "LeanApp[LeanApp[LeanApp[LeanApp[LeanConst[\"add\", {0}], LeanConst[\"real\", {}]], \
               LeanConst[\"real.has_add\", {}]], X], X] // LeanConvert // Activate // Factor";
    assert_eq!(eval(src), "Times[2, X]");
}

#[test]
fn user_definitions_and_scopes() {
    let mut engine = Engine::new();
    assert_eq!(run(&mut engine, "f[x_] := Power[x, 2]; f[3]"), "9");
    assert_eq!(run(&mut engine, "f[3]"), "f[3]");
    engine.eval(&parse_fullform("g[x_] := Plus[x, 1]").unwrap(), Scope::Global).unwrap();
    assert_eq!(run(&mut engine, "g[1]"), "2");
    assert_eq!(run(&mut engine, "h[n_ /; Greater[n, 0]] := n; {h[2], h[-2]}"), "{2, h[-2]}");
}

#[test]
fn solve_through_eval() {
    assert_eq!(eval("Solve[Equal[Plus[Power[x, 2], -1], 0], x]"), "{{Rule[x, -1]}, {Rule[x, 1]}}");
    assert_eq!(eval("Solve[{Equal[Plus[x, y], 3], Equal[Subtract[x, y], 1]}, {x, y}]"), "{{Rule[x, 2], Rule[y, 1]}}");
}

#[test]
fn find_instance_and_farkas_through_eval() {
    assert_eq!(eval("FindInstance[{LessEqual[x, 0], GreaterEqual[x, 1]}, {x}]"), "{}");
    // a constraint that folded to False
    assert_eq!(eval("FindInstance[{LessEqual[Times[0, x], -1]}, {x}]"), "{}");
    assert_eq!(eval("FindInstance[{True}, {x}]"), "{{Rule[x, 0]}}");
    assert_eq!(eval("FindInstance[{LessEqual[x, 1], GreaterEqual[x, 0]}, {x}]"), "{{Rule[x, 0]}}");
    let cert = eval("FarkasCertificate[{LessEqual[Plus[Times[2, x], Times[4, y]], 4], LessEqual[Times[-1, x], 1], LessEqual[Times[-1, y], -5]}]");
    assert!(cert.starts_with('{') && cert != "{}", "{cert}");
    assert_eq!(eval("FarkasCertificate[{LessEqual[x, 1]}]"), "{}");
}

#[test]
fn recursion_limit() {
    let mut engine = Engine::with_config(
        EngineConfig { recursion_limit: 200, ..EngineConfig::default() },
        skepsis_core::reflect::ForwardRuleSet::builtin(),
    );
    let e = parse_fullform("r[x_] := Plus[r[Plus[x, 1]], 1]; r[0]").unwrap();
    assert!(matches!(engine.eval(&e, Scope::Scoped), Err(EngineError::RecursionLimit(200))));
}

#[test]
fn to_poly_examples() {
    let p = to_poly(&parse_fullform("Plus[1, Times[-2, X], Power[X, 2]]").unwrap()).unwrap();
    let xx = Poly::var(Var::new("X"));
    assert_eq!(p, xx.pow(2).sub(&xx.scale(&ratio(2, 1))).add(&Poly::int(1)));
    assert!(to_poly(&CExpr::int(0)).unwrap().is_zero());
    assert!(matches!(
        to_poly(&parse_fullform("Power[X, Plus[Y, 1]]").unwrap()),
        Err(EngineError::NotPolynomial(_))
    ));
}

#[test]
fn find_instance_examples() {
    let a = find_instance(&[LinConstraint::le(x().sub(&Poly::int(1))).unwrap(), LinConstraint::le(x().neg()).unwrap()], 16)
        .unwrap()
        .unwrap();
    let v = &a[&Var::new("x")];
    assert!(*v >= ratio(0, 1) && *v <= ratio(1, 1));
    let none = find_instance(&[LinConstraint::le(x()).unwrap(), LinConstraint::le(Poly::int(1).sub(&x())).unwrap()], 16).unwrap();
    assert!(none.is_none());
}

#[test]
fn farkas_examples() {
    let hyps = [
        LinConstraint::le(x().scale(&ratio(2, 1)).add(&y().scale(&ratio(4, 1))).sub(&Poly::int(4))).unwrap(),
        LinConstraint::le(x().neg().sub(&Poly::int(1))).unwrap(),
        LinConstraint::le(Poly::int(5).sub(&y())).unwrap(),
    ];
    // any positive multiple of [1/2, 1, 2]; the scale is not prescribed
    let c = farkas_coefficients(&hyps, 16).unwrap().unwrap();
    let t = &c[1];
    assert!(*t > ratio(0, 1));
    assert_eq!(c, vec![t * ratio(1, 2), t.clone(), t * ratio(2, 1)]);
    assert!(farkas_coefficients(&[LinConstraint::le(Poly::int(-1)).unwrap()], 16).unwrap().is_none());
    let c = farkas_coefficients(&[LinConstraint::le(x()).unwrap(), LinConstraint::le(Poly::int(1).sub(&x())).unwrap()], 16)
        .unwrap()
        .unwrap();
    assert!(c[0] > ratio(0, 1));
    assert_eq!(c[0], c[1]);
}
