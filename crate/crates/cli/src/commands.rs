use std::io::{BufRead, IsTerminal, Write};

use skepsis_bridge::{load_aux, BridgeError, LocalOracle, Oracle};
use skepsis_core::cexpr::{parse_fullform, print_fullform, CExpr};
use skepsis_core::interpret::{elaborate, pexpr_of_mmexpr};
use skepsis_core::kexpr::typecheck::infer_type;
use skepsis_core::kexpr::{parse_kexpr, print_kexpr, KExpr};
use skepsis_core::poly::Rat;
use skepsis_core::reflect::{encode_kernel_expr, lean_form};
use skepsis_engine::{Engine, EngineConfig};
use skepsis_verify::{
    approx_bounds, declare_trusted, farkas_sum, fmt_assignment, fmt_rat, sanity_check, Certificate, Sanity,
    SanityConfig, VerifyError,
};

use crate::report::Report;
use crate::session::{OracleChoice, Session};
use crate::CliError;

/// A finished command: what to print and how to exit.
pub struct Outcome {
    pub report: Report,
    pub code: u8,
}

impl Outcome {
    fn ok(report: Report) -> Outcome {
        Outcome { report, code: 0 }
    }
}

fn counts(session: &Session, report: &mut Report) {
    let (verified, trusted) = session.counts();
    report.push("verified", verified.to_string());
    report.push("trusted", trusted.to_string());
}

fn type_error(e: impl ToString) -> CliError {
    CliError::Verify(VerifyError::Type(e.to_string()))
}

pub fn factor(session: &mut Session, expr: &str, goal: Option<&str>) -> Result<Outcome, CliError> {
    let e = session.parse(expr)?;
    let goal = goal.map(|g| session.parse_prop(g)).transpose()?;
    session.prepare()?;
    let (factored, cert) = session.pipeline.factor_check(&e, &mut session.oracle)?;
    let mut r = Report::new("factor");
    r.push("input", print_kexpr(&e));
    r.push("result", print_kexpr(&factored));
    r.push("certificate", cert.certificate().kind());
    r.push("status", "verified");
    session.ledger.record(cert);
    if let Some(goal) = goal {
        let rewritten = goal.replace(&mut |t, _| (*t == e).then(|| factored.clone()));
        r.push("goal", print_kexpr(&goal));
        r.push("rewritten", print_kexpr(&rewritten));
    }
    counts(session, &mut r);
    Ok(Outcome::ok(r))
}

pub fn lincert(session: &mut Session, hyps: &[String]) -> Result<Outcome, CliError> {
    if hyps.is_empty() {
        return Err(CliError::Usage("at least one hypothesis is required".into()));
    }
    let hyps = hyps.iter().map(|h| session.parse_prop(h)).collect::<Result<Vec<_>, _>>()?;
    session.prepare()?;
    let mut r = Report::new("lincert");
    let refused = match session.pipeline.farkas(&hyps, &mut session.oracle) {
        Ok(cert) => {
            let Certificate::FarkasWitness { coeffs, .. } = cert.certificate() else {
                return Err(CliError::Verify(VerifyError::Internal("farkas returned another certificate".into())));
            };
            r.push("result", "infeasible");
            r.push("coefficients", coeffs.iter().map(fmt_rat).collect::<Vec<_>>().join(", "));
            r.push("sum", fmt_rat(&farkas_sum(&hyps, coeffs)?));
            r.push("claim", "false");
            r.push("certificate", cert.certificate().kind());
            r.push("status", "verified");
            session.ledger.record(cert);
            counts(session, &mut r);
            return Ok(Outcome::ok(r));
        }
        Err(e @ (VerifyError::Oracle(_) | VerifyError::Bridge(BridgeError::Remote(_)))) => e,
        Err(e) => return Err(e.into()),
    };
    // no certificate: look for a point satisfying every hypothesis
    match sanity_check(&hyps, &KExpr::constant("false"), &mut session.oracle, &SanityConfig::default())? {
        Sanity::Counterexample(Certificate::Counterexample { assignment }) => {
            r.push("result", "satisfiable");
            r.push("witness", fmt_assignment(&assignment));
            r.push("status", "checked");
            counts(session, &mut r);
            Ok(Outcome { report: r, code: 1 })
        }
        _ => Err(refused.into()),
    }
}

pub fn solve(session: &mut Session, system: &[String]) -> Result<Outcome, CliError> {
    let system = system.iter().map(|s| session.parse_prop(s)).collect::<Result<Vec<_>, _>>()?;
    session.prepare()?;
    let certs = session.pipeline.solve(&system, &mut session.oracle)?;
    let mut r = Report::new("solve");
    r.push("solutions", certs.len().to_string());
    for (i, cert) in certs.into_iter().enumerate() {
        if let Certificate::SolutionWitness { assignment, .. } = cert.certificate() {
            r.push(format!("solution.{}", i + 1), fmt_assignment(assignment));
            r.push(format!("status.{}", i + 1), "verified");
        }
        session.ledger.record(cert);
    }
    counts(session, &mut r);
    Ok(Outcome::ok(r))
}

pub fn sanity(session: &mut Session, hyps: &[String], goal: &str, cfg: &SanityConfig) -> Result<Outcome, CliError> {
    let hyps = hyps.iter().map(|h| session.parse_prop(h)).collect::<Result<Vec<_>, _>>()?;
    let goal = session.parse_prop(goal)?;
    session.prepare()?;
    let mut r = Report::new("sanity");
    r.push("goal", print_kexpr(&goal));
    let code = match sanity_check(&hyps, &goal, &mut session.oracle, cfg)? {
        Sanity::Ok => {
            r.push("result", "no counterexample found");
            // a failed search proves nothing
            r.push("status", "unverified");
            0
        }
        Sanity::Counterexample(c) => {
            r.push("result", "counterexample");
            if let Certificate::Counterexample { assignment } = &c {
                r.push("counterexample", fmt_assignment(assignment));
            }
            r.push("status", "checked");
            1
        }
    };
    counts(session, &mut r);
    Ok(Outcome { report: r, code })
}

pub fn translate(session: &mut Session, expr: &str) -> Result<Outcome, CliError> {
    let e = session.parse(expr)?;
    let ty = infer_type(&e, &session.sig).map_err(type_error)?;
    let encoded = encode_kernel_expr(&e);
    let lean = lean_form(&encoded, &session.forward)?;
    session.prepare()?;
    let activated = session.oracle.execute(&print_fullform(&CExpr::call("Activate", vec![lean.clone()])))?;
    let p = pexpr_of_mmexpr(&Vec::new(), &activated, &session.pipeline.rules).map_err(BridgeError::from)?;
    let back = elaborate(&p, &session.sig, &session.pipeline.instances, Some(&ty)).map_err(VerifyError::from)?;
    let mut r = Report::new("translate");
    r.push("input", print_kexpr(&e));
    r.push("encoding", print_fullform(&encoded));
    r.push("leanform", print_fullform(&lean));
    r.push("activated", print_fullform(&activated));
    r.push("back", print_kexpr(&back));
    Ok(Outcome::ok(r))
}

pub fn approx(session: &mut Session, expr: &str, radius: &Rat, estimate: Option<&Rat>) -> Result<Outcome, CliError> {
    // bounds are on real numbers; this also types bare numerals
    let e = parse_kexpr(expr, &session.sig, &session.ctx, Some(&KExpr::constant("real")))?;
    let (cert, status) = approx_bounds(&e, radius, estimate, &session.ledger)?;
    let mut r = Report::new("approx");
    r.push("bound", cert.claim());
    r.push("certificate", cert.kind());
    r.push("status", status.to_string());
    counts(session, &mut r);
    Ok(Outcome::ok(r))
}

pub fn trust(session: &mut Session, claim: &str, provenance: &str) -> Result<Outcome, CliError> {
    let claim = session.parse_prop(claim)?;
    let cert = declare_trusted(&claim, provenance, &session.sig, &session.ledger)?;
    let mut r = Report::new("trust");
    r.push("claim", cert.claim());
    r.push("provenance", provenance);
    r.push("certificate", cert.kind());
    r.push("status", "trusted");
    if cert.is_absurd() {
        r.push("warning", "this axiom asserts false; every statement follows from it");
    }
    counts(session, &mut r);
    Ok(Outcome::ok(r))
}

pub fn ledger(session: &mut Session) -> Result<Outcome, CliError> {
    let mut r = Report::new("ledger");
    counts(session, &mut r);
    Ok(Outcome::ok(r))
}

/// Serves the built-in engine, with the session's forward rules and
/// auxiliary definitions, until a client asks it to shut down.
pub fn serve(session: &Session, choice: &OracleChoice, addr: Option<&str>) -> Result<Outcome, CliError> {
    if *choice != OracleChoice::Builtin {
        return Err(CliError::Usage("serve always runs the built-in engine; drop --oracle".into()));
    }
    let mut oracle = LocalOracle::new(Engine::with_config(EngineConfig::default(), session.forward.clone()));
    if let Some(aux) = &session.aux {
        load_aux(&mut oracle, aux)?;
    }
    let listener = skepsis_bridge::bind(addr)?;
    eprintln!("listening on {}", listener.local_addr()?);
    skepsis_bridge::serve(&listener, &mut oracle.backend)?;
    Ok(Outcome::ok(Report::new("serve")))
}

/// Evaluates FullForm one line at a time. `:global` and `:scoped` switch
/// the context mode, `:quit` leaves.
pub fn repl(session: &mut Session, mut global: bool) -> Result<Outcome, CliError> {
    session.prepare()?;
    let stdin = std::io::stdin();
    let interactive = stdin.is_terminal();
    let mut out = std::io::stdout();
    loop {
        if interactive {
            write!(out, "{}> ", if global { "global" } else { "scoped" })?;
            out.flush()?;
        }
        let mut line = String::new();
        if stdin.lock().read_line(&mut line)? == 0 {
            break;
        }
        let line = line.trim();
        match line {
            "" => continue,
            ":quit" | ":q" => break,
            ":global" => global = true,
            ":scoped" => global = false,
            _ => {
                let result = parse_fullform(line).map_err(BridgeError::from).and_then(|e| {
                    let code = print_fullform(&e);
                    if global {
                        session.oracle.execute_global(&code)
                    } else {
                        session.oracle.execute(&code)
                    }
                });
                match result {
                    Ok(v) => writeln!(out, "{}", print_fullform(&v))?,
                    Err(BridgeError::Io(e)) => return Err(BridgeError::Io(e).into()),
                    Err(e) => writeln!(out, "error: {e}")?,
                }
            }
        }
    }
    Ok(Outcome::ok(Report::new("repl")))
}
