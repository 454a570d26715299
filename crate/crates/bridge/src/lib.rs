//! The evaluation link: a length-prefixed wire protocol, a sequential
//! server wrapping any [`Backend`], and the client side used by pipelines.
//!
//! Pipelines talk to an [`Oracle`]; both the TCP [`Client`] and the
//! in-process [`LocalOracle`] implement it, so the same code runs against a
//! remote process or the built-in engine.

mod client;
mod command;
mod frame;
mod server;

use std::io;

use skepsis_core::cexpr::{CExpr, FullFormError};
use skepsis_core::interpret::BackError;
use thiserror::Error;

pub use client::{Client, LocalOracle};
pub use command::{fill_placeholder, load_aux, run_command_on, PLACEHOLDER};
pub use frame::{read_frame, write_frame, Op, Request, Response, Status, MAX_FRAME};
pub use server::{bind, handle_request, resolve_addr, serve, serve_connection, DEFAULT_ADDR};

#[derive(Debug, Error)]
pub enum BridgeError {
    #[error("transport: {0}")]
    Io(#[from] io::Error),
    #[error("malformed frame: {0}")]
    Frame(String),
    #[error("oracle error: {0}")]
    Remote(String),
    #[error("could not parse CAS text: {0}")]
    Parse(#[from] FullFormError),
    #[error("back-translation failed: {0}")]
    Translation(#[from] BackError),
    #[error("bad command: {0}")]
    Command(String),
}

/// Which context an evaluation runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// A fresh context, dropped after the request.
    Scoped,
    /// The persistent global context.
    Global,
}

/// Something that evaluates CAS expressions: the built-in engine, or a
/// proxy for an external system.
pub trait Backend {
    type Error: std::error::Error;

    fn eval(&mut self, e: &CExpr, scope: Scope) -> Result<CExpr, Self::Error>;
}

/// The client-side view of an evaluator.
pub trait Oracle {
    /// Evaluate `code` in a scratch context.
    fn execute(&mut self, code: &str) -> Result<CExpr, BridgeError>;

    /// Evaluate `code` in the global context; definitions persist.
    fn execute_global(&mut self, code: &str) -> Result<CExpr, BridgeError>;
}

impl<O: Oracle + ?Sized> Oracle for &mut O {
    fn execute(&mut self, code: &str) -> Result<CExpr, BridgeError> {
        (**self).execute(code)
    }

    fn execute_global(&mut self, code: &str) -> Result<CExpr, BridgeError> {
        (**self).execute_global(code)
    }
}

impl<O: Oracle + ?Sized> Oracle for Box<O> {
    fn execute(&mut self, code: &str) -> Result<CExpr, BridgeError> {
        (**self).execute(code)
    }

    fn execute_global(&mut self, code: &str) -> Result<CExpr, BridgeError> {
        (**self).execute_global(code)
    }
}
