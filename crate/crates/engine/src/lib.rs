//! A small computer algebra engine, used as the default untrusted oracle.
//!
//! Evaluation rewrites innermost-first: canonical `Plus`/`Times`/`Power`
//! over exact rationals, user definitions made with `Set`/`SetDelayed`, and
//! commands by head symbol (`Factor`, `Expand`, `Solve`, `FindInstance`,
//! `FarkasCertificate`, `LeanConvert`, `Activate`, `ReplaceAll`). Nothing it
//! computes is trusted downstream; results are checked independently.

mod arith;
mod convert;
mod eval;
mod factor;
mod linear;
mod number;
mod order;
mod solve;

use skepsis_bridge::{Backend, LocalOracle, Scope};
use skepsis_core::cexpr::CExpr;
use skepsis_core::reflect::{Evaluate, ReflectError};
use thiserror::Error;

pub use arith::{plus, power, times};
pub use convert::{expr_of_var, from_factors, from_poly, to_poly, var_of};
pub use eval::{relation_polys, Engine, EngineConfig, EvalContext};
pub use factor::{factor, rational_roots};
pub use linear::{farkas_coefficients, find_instance};
pub use number::{as_number, number};
pub use order::{expr_cmp, term_cmp};
pub use solve::solve;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("recursion limit of {0} exceeded")]
    RecursionLimit(usize),
    #[error("iteration limit of {0} exceeded")]
    IterationLimit(usize),
    #[error("not a polynomial: {0}")]
    NotPolynomial(String),
    #[error("{found} variables exceed the elimination limit of {limit}")]
    VariableLimit { found: usize, limit: usize },
    #[error("cannot define {0}")]
    BadDefinition(String),
    #[error(transparent)]
    Reflect(#[from] ReflectError),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Evaluate for Engine {
    type Error = EngineError;

    fn evaluate(&mut self, e: &CExpr) -> Result<CExpr, EngineError> {
        self.eval(e, Scope::Scoped)
    }
}

impl Backend for Engine {
    type Error = EngineError;

    fn eval(&mut self, e: &CExpr, scope: Scope) -> Result<CExpr, EngineError> {
        Engine::eval(self, e, scope)
    }
}

/// The built-in engine behind the oracle interface.
pub fn local_oracle() -> LocalOracle<Engine> {
    LocalOracle::new(Engine::new())
}
