use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::sync::Mutex;

use chrono::{DateTime, SecondsFormat, Utc};
use num_traits::{One, Signed, Zero};
use skepsis_core::kexpr::typecheck::infer_type;
use skepsis_core::kexpr::{KExpr, Signature};
use skepsis_core::poly::Rat;

use crate::certificate::{Certificate, Verified};
use crate::translate::poly_of_kexpr;
use crate::VerifyError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Verified,
    Trusted,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Verified => "verified",
            Status::Trusted => "trusted",
        })
    }
}

impl FromStr for Status {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Status, VerifyError> {
        match s {
            "verified" => Ok(Status::Verified),
            "trusted" => Ok(Status::Trusted),
            _ => Err(VerifyError::Log(format!("unknown status {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LedgerEntry {
    pub certificate: Certificate,
    pub status: Status,
    pub timestamp: DateTime<Utc>,
}

impl LedgerEntry {
    /// `status<TAB>claim<TAB>provenance<TAB>timestamp`.
    pub fn log_line(&self) -> String {
        let mut provenance = self.certificate.provenance();
        if self.certificate.is_absurd() {
            provenance = format!("WARNING: asserts false; {provenance}");
        }
        format!(
            "{}\t{}\t{}\t{}",
            self.status,
            one_line(&self.certificate.claim()),
            one_line(&provenance),
            self.timestamp.to_rfc3339_opts(SecondsFormat::Millis, true)
        )
    }
}

fn one_line(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

/// One parsed line of a ledger log.
#[derive(Debug, Clone, PartialEq)]
pub struct LogLine {
    pub status: Status,
    pub claim: String,
    pub provenance: String,
    pub timestamp: DateTime<Utc>,
}

pub fn parse_log_line(line: &str) -> Result<LogLine, VerifyError> {
    let fields: Vec<&str> = line.split('\t').collect();
    let [status, claim, provenance, ts] = fields.as_slice() else {
        return Err(VerifyError::Log(format!("expected 4 fields, found {}", fields.len())));
    };
    let timestamp = DateTime::parse_from_rfc3339(ts)
        .map_err(|e| VerifyError::Log(format!("bad timestamp {ts:?}: {e}")))?
        .with_timezone(&Utc);
    Ok(LogLine { status: status.parse()?, claim: claim.to_string(), provenance: provenance.to_string(), timestamp })
}

/// Append-only record of what a session relied on. Entries are never
/// changed once written; a mutex serializes writers and readers get a
/// consistent snapshot.
#[derive(Debug, Default)]
pub struct TrustLedger {
    entries: Mutex<Vec<LedgerEntry>>,
}

impl TrustLedger {
    pub fn new() -> TrustLedger {
        TrustLedger::default()
    }

    fn push(&self, certificate: Certificate, status: Status) -> usize {
        let mut entries = self.entries.lock().unwrap_or_else(|e| e.into_inner());
        entries.push(LedgerEntry { certificate, status, timestamp: Utc::now() });
        entries.len() - 1
    }

    /// Records a checked certificate; returns its index.
    pub fn record(&self, v: Verified) -> usize {
        self.push(v.into_certificate(), Status::Verified)
    }

    pub fn snapshot(&self) -> Vec<LedgerEntry> {
        self.entries.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn verified_count(&self) -> usize {
        self.snapshot().iter().filter(|e| e.status == Status::Verified).count()
    }

    pub fn trusted_count(&self) -> usize {
        self.snapshot().iter().filter(|e| e.status == Status::Trusted).count()
    }

    /// The line every report ends with.
    pub fn summary(&self) -> String {
        let entries = self.snapshot();
        let trusted = entries.iter().filter(|e| e.status == Status::Trusted).count();
        let mut s = format!("{} verified, {trusted} trusted", entries.len() - trusted);
        if entries.iter().any(|e| e.certificate.is_absurd()) {
            s.push_str(" (WARNING: a trusted axiom asserts false)");
        }
        s
    }

    /// Writes the entries from `from` on, one per line.
    pub fn write_log(&self, mut w: impl Write, from: usize) -> io::Result<()> {
        for e in self.snapshot().iter().skip(from) {
            writeln!(w, "{}", e.log_line())?;
        }
        Ok(())
    }
}

fn is_prop(e: &KExpr, sig: &Signature) -> Result<bool, VerifyError> {
    let ty = infer_type(e, sig).map_err(|err| VerifyError::Type(err.to_string()))?;
    Ok(ty == KExpr::prop())
}

/// Adds `claim` as an axiom. Nothing is checked beyond it being a
/// proposition; the ledger marks it trusted.
pub fn declare_trusted(
    claim: &KExpr,
    provenance: &str,
    sig: &Signature,
    ledger: &TrustLedger,
) -> Result<Certificate, VerifyError> {
    if !is_prop(claim, sig)? {
        return Err(VerifyError::NotAProposition(skepsis_core::kexpr::print_kexpr(claim)));
    }
    let c = Certificate::TrustedAxiom { claim: claim.clone(), provenance: provenance.to_string() };
    ledger.push(c.clone(), Status::Trusted);
    Ok(c)
}

/// The rational with the smallest denominator (then numerator) strictly
/// between `lo` and `hi`, by walking the Stern–Brocot tree.
pub fn simplest_between(lo: &Rat, hi: &Rat) -> Rat {
    assert!(lo < hi, "empty interval");
    if lo.is_negative() && hi.is_positive() {
        return Rat::zero();
    }
    if !hi.is_positive() {
        return -simplest_between(&-hi, &-lo);
    }
    // 0 <= lo < hi: continued-fraction descent
    let fl = lo.floor();
    if fl.clone() + Rat::one() < *hi {
        return fl + Rat::one();
    }
    let f = lo - &fl;
    let g = hi - &fl;
    if f.is_zero() {
        // lo is an integer, hi <= lo + 1: look for 1/k above 0 within g
        let k = (g.recip()).floor() + Rat::one();
        return fl + k.recip();
    }
    fl + simplest_between(&g.recip(), &f.recip()).recip()
}

/// Two-sided bound on `e` of half-width `radius`, centred on the simplest
/// rational within `radius` of the value. Exactly computable `e` gives a
/// verified bound; otherwise `estimate` (from an external oracle) is
/// required and the bound is trusted.
pub fn approx_bounds(
    e: &KExpr,
    radius: &Rat,
    estimate: Option<&Rat>,
    ledger: &TrustLedger,
) -> Result<(Certificate, Status), VerifyError> {
    if radius.is_negative() {
        return Err(VerifyError::BadRadius);
    }
    let exact = poly_of_kexpr(e).ok().and_then(|p| p.as_constant());
    let value = match (&exact, estimate) {
        (Some(v), _) => v.clone(),
        (None, Some(est)) => est.clone(),
        (None, None) => return Err(VerifyError::NoEstimate(skepsis_core::kexpr::print_kexpr(e))),
    };
    let centre = if radius.is_zero() { value.clone() } else { simplest_between(&(&value - radius), &(&value + radius)) };
    let cert = Certificate::ApproxBound { target: e.clone(), lower: &centre - radius, upper: &centre + radius };
    match exact {
        Some(v) => {
            let Certificate::ApproxBound { lower, upper, .. } = &cert else { unreachable!() };
            let inside = if radius.is_zero() { *lower == v } else { *lower < v && v < *upper };
            if !inside {
                return Err(VerifyError::Internal("bound does not contain the exact value".into()));
            }
            ledger.record(Verified::new(cert.clone()));
            Ok((cert, Status::Verified))
        }
        None => {
            ledger.push(cert.clone(), Status::Trusted);
            Ok((cert, Status::Trusted))
        }
    }
}
