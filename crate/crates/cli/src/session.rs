use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use skepsis_bridge::{load_aux, resolve_addr, BridgeError, Client, LocalOracle, Oracle};
use skepsis_core::cexpr::CExpr;
use skepsis_core::interpret::BackRuleSet;
use skepsis_core::kexpr::{parse_kexpr, parse_pexpr, KExpr, LocalContext, Name, Signature};
use skepsis_core::reflect::ForwardRuleSet;
use skepsis_engine::{Engine, EngineConfig};
use skepsis_verify::{parse_log_line, Pipeline, Status, TrustLedger};

use crate::CliError;

/// Where CAS computations go.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleChoice {
    Builtin,
    /// `None` means `BRIDGE_ADDR`, else the default address.
    Remote(Option<String>),
}

impl std::str::FromStr for OracleChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "builtin" => Ok(OracleChoice::Builtin),
            "remote" => Ok(OracleChoice::Remote(None)),
            _ => match s.strip_prefix("remote=") {
                Some(addr) if !addr.is_empty() => Ok(OracleChoice::Remote(Some(addr.to_string()))),
                _ => Err(format!("expected `builtin`, `remote` or `remote=ADDR`, got `{s}`")),
            },
        }
    }
}

/// A rule file. Every section is optional; as TOML requires, the plain
/// keys come before the tables.
///
/// ```toml
/// forward = '''       # LeanForm rules, `pattern -> template` in FullForm
/// LeanConst["pi", _] -> Pi
/// '''
///
/// aux = '''           # FullForm definitions loaded into the oracle
/// double[x_] := Times[2, x]
/// '''
///
/// [[declare]]         # signature constants
/// name = "pi"
/// type = "real"
///
/// [[symbol]]          # back-translation: CAS symbol -> surface term
/// name = "Pi"
/// term = "pi"
/// ```
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleFile {
    #[serde(default)]
    pub declare: Vec<Declare>,
    #[serde(default)]
    pub symbol: Vec<Symbol>,
    pub forward: Option<String>,
    pub aux: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Declare {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Symbol {
    pub name: String,
    pub term: String,
}

impl RuleFile {
    pub fn read(path: &Path) -> Result<RuleFile, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

pub struct SessionConfig {
    pub oracle: OracleChoice,
    pub rule_files: Vec<PathBuf>,
    pub context: Option<String>,
    pub ledger: Option<PathBuf>,
}

/// Everything a command needs: the signature and context its inputs parse
/// in, the pipeline, the oracle and the ledger.
pub struct Session {
    pub sig: Signature,
    pub ctx: LocalContext,
    pub pipeline: Pipeline,
    pub forward: ForwardRuleSet,
    pub oracle: SessionOracle,
    pub ledger: TrustLedger,
    /// Definitions loaded into the oracle's global context before the
    /// first computation.
    pub aux: Option<String>,
    aux_loaded: bool,
    ledger_file: Option<PathBuf>,
    prior: (usize, usize),
}

impl Session {
    pub fn open(config: &SessionConfig) -> Result<Session, CliError> {
        let files = config.rule_files.iter().map(|p| RuleFile::read(p)).collect::<Result<Vec<_>, _>>()?;

        let mut sig = Signature::builtin();
        for d in files.iter().flat_map(|f| &f.declare) {
            let ty = parse_kexpr(&d.ty, &sig, &LocalContext::new(), None)
                .map_err(|e| CliError::Usage(format!("type of {}: {e}", d.name)))?;
            let name = Name::parse(&d.name).map_err(|e| CliError::Usage(e.to_string()))?;
            sig.declare(name, vec![], ty).map_err(|e| CliError::Usage(e.to_string()))?;
        }

        let ctx = match &config.context {
            Some(text) => parse_context(text, &sig)?,
            None => LocalContext::new(),
        };

        let mut rules = BackRuleSet::builtin();
        for s in files.iter().flat_map(|f| &f.symbol) {
            let p = parse_pexpr(&s.term, &sig, &ctx).map_err(|e| CliError::Usage(format!("symbol {}: {e}", s.name)))?;
            rules.register_sym_rule(&s.name, p);
        }

        let mut forward = ForwardRuleSet::builtin();
        for text in files.iter().filter_map(|f| f.forward.as_deref()) {
            forward.load(text).map_err(|e| CliError::Usage(e.to_string()))?;
        }

        let aux: Vec<&str> = files.iter().filter_map(|f| f.aux.as_deref()).collect();
        let mut pipeline = Pipeline::new(sig.clone());
        pipeline.rules = rules;

        let oracle = match &config.oracle {
            OracleChoice::Builtin => {
                SessionOracle::Builtin(LocalOracle::new(Engine::with_config(EngineConfig::default(), forward.clone())))
            }
            OracleChoice::Remote(addr) => SessionOracle::Remote { addr: resolve_addr(addr.as_deref()), client: None },
        };

        let prior = match &config.ledger {
            Some(path) => prior_counts(path)?,
            None => (0, 0),
        };

        Ok(Session {
            sig,
            ctx,
            pipeline,
            forward,
            oracle,
            ledger: TrustLedger::new(),
            aux: (!aux.is_empty()).then(|| aux.join("\n")),
            aux_loaded: false,
            ledger_file: config.ledger.clone(),
            prior,
        })
    }

    pub fn parse(&self, text: &str) -> Result<KExpr, CliError> {
        Ok(parse_kexpr(text, &self.sig, &self.ctx, None)?)
    }

    pub fn parse_prop(&self, text: &str) -> Result<KExpr, CliError> {
        Ok(parse_kexpr(text, &self.sig, &self.ctx, Some(&KExpr::prop()))?)
    }

    /// Loads the auxiliary definitions, once.
    pub fn prepare(&mut self) -> Result<(), CliError> {
        if let (Some(aux), false) = (&self.aux, self.aux_loaded) {
            load_aux(&mut self.oracle, aux)?;
            self.aux_loaded = true;
        }
        Ok(())
    }

    /// Verified and trusted counts, including entries already in the
    /// ledger file.
    pub fn counts(&self) -> (usize, usize) {
        (self.prior.0 + self.ledger.verified_count(), self.prior.1 + self.ledger.trusted_count())
    }

    /// Appends this session's entries to the ledger file, if there is one.
    pub fn save_ledger(&self) -> Result<(), CliError> {
        let Some(path) = &self.ledger_file else { return Ok(()) };
        if self.ledger.is_empty() {
            return Ok(());
        }
        let file = fs::OpenOptions::new().create(true).append(true).open(path)?;
        self.ledger.write_log(file, 0)?;
        Ok(())
    }
}

fn prior_counts(path: &Path) -> Result<(usize, usize), CliError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((0, 0)),
        Err(e) => return Err(e.into()),
    };
    let mut counts = (0, 0);
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        match parse_log_line(line)?.status {
            Status::Verified => counts.0 += 1,
            Status::Trusted => counts.1 += 1,
        }
    }
    Ok(counts)
}

/// `x:real, y:real, f:real -> real`. Later declarations may mention
/// earlier ones.
pub fn parse_context(text: &str, sig: &Signature) -> Result<LocalContext, CliError> {
    let mut ctx = LocalContext::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, ty) = item
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("context entry `{item}` is not `name:type`")))?;
        let ty = parse_kexpr(ty.trim(), sig, &ctx, None).map_err(|e| CliError::Usage(format!("type of {name}: {e}")))?;
        ctx.push(name.trim(), ty);
    }
    Ok(ctx)
}

/// The built-in engine, or a connection made on first use.
pub enum SessionOracle {
    Builtin(LocalOracle<Engine>),
    Remote { addr: String, client: Option<Client> },
}

impl SessionOracle {
    fn get(&mut self) -> Result<&mut dyn Oracle, BridgeError> {
        match self {
            SessionOracle::Builtin(o) => Ok(o),
            SessionOracle::Remote { addr, client } => {
                if client.is_none() {
                    *client = Some(Client::connect(addr.as_str())?);
                }
                Ok(client.as_mut().expect("just connected"))
            }
        }
    }
}

impl Oracle for SessionOracle {
    fn execute(&mut self, code: &str) -> Result<CExpr, BridgeError> {
        self.get()?.execute(code)
    }

    fn execute_global(&mut self, code: &str) -> Result<CExpr, BridgeError> {
        self.get()?.execute_global(code)
    }
}
