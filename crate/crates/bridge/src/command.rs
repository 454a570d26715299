use skepsis_core::cexpr::{parse_fullform_many, print_fullform};
use skepsis_core::interpret::{pexpr_of_mmexpr, BackRuleSet, PExpr};
use skepsis_core::kexpr::KExpr;
use skepsis_core::reflect::encode_kernel_expr;

use crate::{BridgeError, Oracle};

/// Marks where the reflected expression goes in a command template.
pub const PLACEHOLDER: &str = "⟨e⟩";

/// Substitutes the FullForm encoding of `e` for the single placeholder.
pub fn fill_placeholder(cmd: &str, e: &KExpr) -> Result<String, BridgeError> {
    match cmd.matches(PLACEHOLDER).count() {
        1 => Ok(cmd.replacen(PLACEHOLDER, &print_fullform(&encode_kernel_expr(e)), 1)),
        n => Err(BridgeError::Command(format!("expected exactly one {PLACEHOLDER} placeholder, found {n}"))),
    }
}

/// Evaluates each top-level expression of `text` in the global context.
pub fn load_aux<O: Oracle + ?Sized>(oracle: &mut O, text: &str) -> Result<(), BridgeError> {
    for e in parse_fullform_many(text)? {
        oracle.execute_global(&print_fullform(&e))?;
    }
    Ok(())
}

/// Reflects `e` into `cmd`, runs it on the oracle and translates the answer
/// back to a pre-expression. Auxiliary definitions, if given, are loaded
/// into the global context first.
pub fn run_command_on<O: Oracle + ?Sized>(
    oracle: &mut O,
    cmd: &str,
    e: &KExpr,
    rules: &BackRuleSet,
    aux: Option<&str>,
) -> Result<PExpr, BridgeError> {
    let code = fill_placeholder(cmd, e)?;
    if let Some(aux) = aux {
        load_aux(oracle, aux)?;
    }
    let answer = oracle.execute(&code)?;
    Ok(pexpr_of_mmexpr(&Vec::new(), &answer, rules)?)
}
