//! `skepsis`: factor, solve and certify from the command line.
//!
//! Exit codes: 0 verified or ok, 1 checked-false or counterexample,
//! 2 usage or out-of-fragment input, 3 transport or oracle error.

mod commands;
mod report;
mod session;

use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use skepsis_bridge::BridgeError;
use skepsis_core::kexpr::ParseError;
use skepsis_core::poly::Rat;
use skepsis_core::reflect::ReflectError;
use skepsis_verify::{SanityConfig, VerifyError};
use thiserror::Error;

use crate::commands::Outcome;
use crate::report::{Format, Report};
use crate::session::{OracleChoice, Session, SessionConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Reflect(#[from] ReflectError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Bridge(#[from] BridgeError),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) | CliError::Reflect(_) => 2,
            CliError::Bridge(_) | CliError::Io(_) => 3,
            CliError::Verify(e) => match e {
                VerifyError::UnableToSimplify { .. }
                | VerifyError::BadCertificate { .. }
                | VerifyError::ResidueNonZero { .. } => 1,
                VerifyError::Bridge(_) | VerifyError::Oracle(_) | VerifyError::Elab(_) | VerifyError::Internal(_) => 3,
                _ => 2,
            },
        }
    }
}

#[derive(Parser)]
#[command(name = "skepsis", version, about = "Computer algebra with independently checked answers")]
struct Cli {
    /// `builtin`, `remote` (BRIDGE_ADDR or 127.0.0.1:7878) or `remote=ADDR`.
    #[arg(long, global = true, default_value = "builtin")]
    oracle: OracleChoice,
    /// TOML rule file; may be repeated.
    #[arg(long = "rules", global = true, value_name = "FILE")]
    rules: Vec<PathBuf>,
    /// Local declarations, e.g. "x:real,y:real".
    #[arg(long, global = true, value_name = "DECLS")]
    context: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Ledger log: its entries count towards the totals, and new ones are
    /// appended.
    #[arg(long, global = true, value_name = "FILE")]
    ledger: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor a polynomial and certify the result equal to it.
    Factor {
        expr: String,
        /// A proposition in which to replace EXPR by its factorization.
        #[arg(long)]
        goal: Option<String>,
    },
    /// Refute linear hypotheses with a Farkas certificate, or show a witness.
    Lincert {
        #[arg(required = true, value_name = "HYP", allow_hyphen_values = true)]
        hyps: Vec<String>,
    },
    /// Solve polynomial equations; every solution is checked by substitution.
    Solve {
        #[arg(required = true, value_name = "EQ", allow_hyphen_values = true)]
        system: Vec<String>,
    },
    /// Look for a counterexample to GOAL under the hypotheses.
    Sanity {
        #[arg(allow_hyphen_values = true)]
        goal: String,
        #[arg(long = "hyp", value_name = "HYP", allow_hyphen_values = true)]
        hyps: Vec<String>,
        /// Largest denominator tried by the grid search.
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(i64).range(1..))]
        max_denominator: i64,
        /// Grid values lie in [-BOUND, BOUND].
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(i64).range(0..))]
        bound: i64,
    },
    /// Show each translation stage: encoding, LeanForm, activated, back.
    Translate { expr: String },
    /// Run the built-in engine as an evaluation server.
    Serve {
        /// Defaults to BRIDGE_ADDR, then 127.0.0.1:7878.
        #[arg(long)]
        addr: Option<String>,
    },
    /// Evaluate FullForm lines on the oracle.
    Repl {
        /// Start in the global context instead of a scratch one.
        #[arg(long)]
        global: bool,
    },
    /// Add a claim as a trusted axiom.
    Trust {
        claim: String,
        #[arg(long, default_value = "user")]
        provenance: String,
    },
    /// Bound an expression by rationals within RADIUS of its value.
    Approx {
        expr: String,
        #[arg(long, value_parser = parse_rat)]
        radius: Rat,
        /// External numerical estimate, needed when EXPR is not exactly
        /// computable.
        #[arg(long, value_parser = parse_rat)]
        estimate: Option<Rat>,
    },
    /// Show the verified and trusted totals.
    Ledger,
}

/// `3`, `-1/1000` or `3.30447`.
fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let r = match body.split_once('.') {
        Some((int, frac)) if frac.chars().all(|c| c.is_ascii_digit()) => {
            format!("{int}{frac}/1{}", "0".repeat(frac.len())).parse::<BigRational>()
        }
        _ => body.parse::<BigRational>(),
    }
    .map_err(|e| format!("`{s}` is not a rational: {e}"))?;
    Ok(if neg { -r } else { r })
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let config = SessionConfig {
        oracle: cli.oracle.clone(),
        rule_files: cli.rules.clone(),
        context: cli.context.clone(),
        ledger: cli.ledger.clone(),
    };
    let mut session = Session::open(&config)?;
    let outcome = match &cli.command {
        Command::Factor { expr, goal } => commands::factor(&mut session, expr, goal.as_deref()),
        Command::Lincert { hyps } => commands::lincert(&mut session, hyps),
        Command::Solve { system } => commands::solve(&mut session, system),
        Command::Sanity { goal, hyps, max_denominator, bound } => {
            let cfg = SanityConfig { max_denominator: *max_denominator, bound: *bound, ..SanityConfig::default() };
            commands::sanity(&mut session, hyps, goal, &cfg)
        }
        Command::Translate { expr } => commands::translate(&mut session, expr),
        Command::Serve { addr } => commands::serve(&session, &cli.oracle, addr.as_deref()),
        Command::Repl { global } => commands::repl(&mut session, *global),
        Command::Trust { claim, provenance } => commands::trust(&mut session, claim, provenance),
        Command::Approx { expr, radius, estimate } => commands::approx(&mut session, expr, radius, estimate.as_ref()),
        Command::Ledger => commands::ledger(&mut session),
    };
    session.save_ledger()?;
    outcome
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Factor { .. } => "factor",
        Command::Lincert { .. } => "lincert",
        Command::Solve { .. } => "solve",
        Command::Sanity { .. } => "sanity",
        Command::Translate { .. } => "translate",
        Command::Serve { .. } => "serve",
        Command::Repl { .. } => "repl",
        Command::Trust { .. } => "trust",
        Command::Approx { .. } => "approx",
        Command::Ledger => "ledger",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome { report, code }) => {
            if !matches!(cli.command, Command::Serve { .. } | Command::Repl { .. }) {
                print!("{}", report.render(cli.format));
            }
            ExitCode::from(code)
        }
        Err(e) => {
            let code = e.exit_code();
            let mut r = Report::new(command_name(&cli.command));
            r.push("status", if code == 1 { "failed" } else { "error" });
            r.push("error", e.to_string());
            r.push("exit", code.to_string());
            print!("{}", r.render(cli.format));
            eprintln!("skepsis: {e}");
            ExitCode::from(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rat("1/1000").unwrap(), Rat::new(1.into(), 1000.into()));
        assert_eq!(parse_rat("-2.5").unwrap(), Rat::new((-5).into(), 2.into()));
        assert_eq!(parse_rat("3").unwrap(), Rat::from_integer(3.into()));
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn oracle_choice() {
        assert_eq!("builtin".parse::<OracleChoice>().unwrap(), OracleChoice::Builtin);
        assert_eq!("remote".parse::<OracleChoice>().unwrap(), OracleChoice::Remote(None));
        assert_eq!("remote=h:1".parse::<OracleChoice>().unwrap(), OracleChoice::Remote(Some("h:1".into())));
        assert!("elsewhere".parse::<OracleChoice>().is_err());
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
