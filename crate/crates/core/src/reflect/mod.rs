//! Kernel terms into the CAS world: the verbatim `Lean*` encoding, the
//! `LeanForm` rewrite to idiomatic CAS operators, `Inactive`/`Activate`,
//! and collapsing of untranslated subtrees.

mod collapse;
mod encode;
mod lean_form;
mod rules;

pub use collapse::{collapse, inflate, CollapseTable};
pub use encode::{decode_kernel_expr, decode_level, encode_kernel_expr, encode_level, DecodeError, ENCODING_HEADS};
pub use lean_form::{lean_form, lean_form_in, BinderEnv, EnvEntry};
pub use rules::{ForwardRule, ForwardRuleSet};

use thiserror::Error;

use crate::cexpr::CExpr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReflectError {
    #[error("LeanVar[{0}] is not bound by any enclosing binder")]
    UnboundVariable(usize),
    #[error("malformed forward rule: {0}")]
    MalformedRule(String),
    #[error("no table entry for collapsed symbol {0}")]
    MissingEntry(String),
}

/// Anything that can evaluate CAS expressions: the built-in engine, or a
/// client talking to a remote one.
pub trait Evaluate {
    type Error: std::error::Error + Send + Sync + 'static;

    fn evaluate(&mut self, e: &CExpr) -> Result<CExpr, Self::Error>;
}

/// Removes every `Inactive` wrapper: `Inactive[h][args]` becomes `h[args]`
/// and `Inactive[e]` becomes `e`.
pub fn strip_inactive(e: &CExpr) -> CExpr {
    match e {
        CExpr::App(h, args) => {
            let args: Vec<CExpr> = args.iter().map(strip_inactive).collect();
            match (h.head_sym(), h.args()) {
                (Some("Inactive"), [inner]) => CExpr::app(strip_inactive(inner), args),
                _ if h.as_sym() == Some("Inactive") && args.len() == 1 => args.into_iter().next().unwrap(),
                _ => CExpr::app(strip_inactive(h), args),
            }
        }
        _ => e.clone(),
    }
}

/// Strips `Inactive` and evaluates the result.
pub fn activate<E: Evaluate + ?Sized>(e: &CExpr, engine: &mut E) -> Result<CExpr, E::Error> {
    engine.evaluate(&strip_inactive(e))
}
