use std::cell::RefCell;
use std::collections::BTreeMap;
use std::net::TcpListener;
use std::thread;

use proptest::prelude::*;
use skepsis_bridge::{serve, Client, Oracle};
use skepsis_core::cexpr::print_fullform;
use skepsis_engine::Engine;

fn spawn_engine() -> (String, thread::JoinHandle<()>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap().to_string();
    let handle = thread::spawn(move || serve(&listener, &mut Engine::new()).unwrap());
    (addr, handle)
}

#[test]
fn the_running_example_over_the_wire() {
    let (addr, handle) = spawn_engine();
    let mut c = Client::connect(&addr).unwrap();
    c.ping().unwrap();
    let r = c.execute("Plus[1, Times[-2, X], Power[X, 2]] // Factor").unwrap();
    assert_eq!(print_fullform(&r), "Power[Plus[-1, X], 2]");
    c.shutdown().unwrap();
    handle.join().unwrap();
}

#[test]
fn global_definitions_persist() {
    let (addr, handle) = spawn_engine();
    let mut c = Client::connect(&addr).unwrap();
    c.execute_global("sq[x_] := Power[x, 2]").unwrap();
    assert_eq!(print_fullform(&c.execute("sq[7]").unwrap()), "49");
    // a later connection to the same server sees it too
    drop(c);
    let mut c = Client::connect(&addr).unwrap();
    assert_eq!(print_fullform(&c.execute("sq[3]").unwrap()), "9");
    c.shutdown().unwrap();
    handle.join().unwrap();
}

#[derive(Debug, Clone)]
enum Step {
    /// Defines `f<i>[x_] := x + k` in the given scope, then uses it.
    Define { global: bool, i: u8, k: i8 },
    /// Evaluates `f<i>[0]` in a fresh scope.
    Use { i: u8 },
}

fn arb_step() -> impl Strategy<Value = Step> {
    prop_oneof![
        (any::<bool>(), 0u8..4, -5i8..5).prop_map(|(global, i, k)| Step::Define { global, i, k }),
        (0u8..4).prop_map(|i| Step::Use { i }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Scoped requests behave as if run in a fresh context over the globals.
    #[test]
    fn scoped_contexts_are_isolated(steps in prop::collection::vec(arb_step(), 1..12)) {
        let (addr, handle) = spawn_engine();
        let client = RefCell::new(Client::connect(&addr).unwrap());
        let mut global: BTreeMap<u8, i8> = BTreeMap::new();
        let expect = |defs: &BTreeMap<u8, i8>, i: u8| match defs.get(&i) {
            Some(k) => k.to_string(),
            None => format!("f{i}[0]"),
        };
        for step in &steps {
            let mut c = client.borrow_mut();
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
                    let r = c.execute(&format!("f{i}[0]")).unwrap();
                    prop_assert_eq!(print_fullform(&r), expect(&global, i));
                }
            }
        }
        client.into_inner().shutdown().unwrap();
        handle.join().unwrap();
    }
}
