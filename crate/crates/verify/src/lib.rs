//! The skeptical layer. Nothing the oracle says is believed: each answer is
//! turned into a certificate and re-checked here with exact rational
//! arithmetic. This crate deliberately does not depend on the engine.
//!
//! "Verified" means checked by an independent exact computation in this
//! crate, not a proof term for a foreign kernel. Results taken on trust are
//! recorded as such in the [`TrustLedger`].

mod certificate;
mod check;
mod encode;
mod ledger;
mod pipeline;
mod sanity;
mod translate;

use skepsis_bridge::BridgeError;
use skepsis_core::interpret::ElabError;
use skepsis_core::poly::Rat;
use thiserror::Error;

pub use certificate::{fmt_assignment, fmt_rat, Certificate, Verified};
pub use check::{check_farkas, check_ring_eq, check_solution, farkas_sum};
pub use ledger::{
    approx_bounds, declare_trusted, parse_log_line, simplest_between, LedgerEntry, LogLine, Status, TrustLedger,
};
pub use pipeline::{constants_last, Pipeline, FACTOR_COMMAND};
pub use sanity::{grid_values, sanity_check, Sanity, SanityConfig};
pub use translate::{conjuncts, open_exists, poly_of_kexpr, Walker};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unable to simplify: {lhs} and {rhs} differ")]
    UnableToSimplify { lhs: String, rhs: String },
    #[error("not a polynomial: {0}")]
    NotPolynomial(String),
    #[error("outside the supported fragment: {0}")]
    OutOfFragment(String),
    #[error("bad certificate{}: {reason}", row.map(|r| format!(" (row {r})")).unwrap_or_default())]
    BadCertificate { row: Option<usize>, reason: String },
    #[error("equation {equation} leaves residue {}", fmt_rat(residue))]
    ResidueNonZero { equation: usize, residue: Rat },
    #[error("no value for {0}")]
    Unassigned(String),
    #[error("not a proposition: {0}")]
    NotAProposition(String),
    #[error("no numeric estimate for {0}")]
    NoEstimate(String),
    #[error("radius must not be negative")]
    BadRadius,
    #[error("type error: {0}")]
    Type(String),
    #[error("oracle: {0}")]
    Oracle(String),
    #[error("ledger log: {0}")]
    Log(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Bridge(#[from] BridgeError),
    #[error(transparent)]
    Elab(#[from] ElabError),
}
