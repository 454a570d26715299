use std::collections::BTreeSet;

use skepsis_bridge::{run_command_on, Oracle};
use skepsis_core::cexpr::{print_fullform, CExpr};
use skepsis_core::interpret::{elaborate, BackRuleSet, InstanceTable};
use skepsis_core::kexpr::typecheck::infer_type;
use skepsis_core::kexpr::{KExpr, Signature};
use skepsis_core::poly::{Poly, Relation, Var};

use crate::certificate::Verified;
use crate::check::{check_farkas, check_ring_eq, check_solution};
use crate::encode::Vars;
use crate::translate::{conjuncts, open_exists, poly_of_kexpr, Walker};
use crate::VerifyError;

/// The oracle command behind `factor`.
pub const FACTOR_COMMAND: &str = "⟨e⟩ // LeanConvert // Activate // Factor";

/// Everything needed to go to the oracle and back: the signature and
/// instances answers are elaborated against, and the back-translation
/// rules. `aux` is loaded into the oracle's global context before each
/// command.
#[derive(Clone)]
pub struct Pipeline {
    pub sig: Signature,
    pub instances: InstanceTable,
    pub rules: BackRuleSet,
    pub aux: Option<String>,
}

impl Default for Pipeline {
    fn default() -> Self {
        Pipeline::new(Signature::builtin())
    }
}

impl Pipeline {
    pub fn new(sig: Signature) -> Pipeline {
        Pipeline { sig, instances: InstanceTable::builtin(), rules: BackRuleSet::builtin(), aux: None }
    }

    /// Runs `cmd` on `e` and elaborates the answer at the type of `e`.
    pub fn run<O: Oracle + ?Sized>(&self, cmd: &str, e: &KExpr, oracle: &mut O) -> Result<KExpr, VerifyError> {
        let ty = infer_type(e, &self.sig).map_err(|err| VerifyError::Type(err.to_string()))?;
        let p = run_command_on(oracle, cmd, e, &self.rules, self.aux.as_deref())?;
        Ok(elaborate(&p, &self.sig, &self.instances, Some(&ty))?)
    }

    /// Factors `e` on the oracle and certifies the result equal to `e`.
    pub fn factor_check<O: Oracle + ?Sized>(&self, e: &KExpr, oracle: &mut O) -> Result<(KExpr, Verified), VerifyError> {
        Walker::polynomial_only().poly(e)?;
        let factored = constants_last(&self.run(FACTOR_COMMAND, e, oracle)?);
        let cert = check_ring_eq(e, &factored)?;
        Ok((factored, cert))
    }

    /// Asks the oracle to solve a system of equations, given as a list of
    /// equations or as one `∃ x y, p = q ∧ ...` statement. Every answer is
    /// checked; one that fails its check is an error.
    pub fn solve<O: Oracle + ?Sized>(&self, system: &[KExpr], oracle: &mut O) -> Result<Vec<Verified>, VerifyError> {
        let eqs: Vec<KExpr> = system.iter().flat_map(|s| conjuncts(&open_exists(s).1)).collect();
        let mut w = Walker::new();
        let polys = eqs.iter().map(|e| w.relation(e)).collect::<Result<Vec<_>, _>>()?;
        let vars = Vars(collect_vars(&polys));
        let cons = CExpr::list(polys.iter().map(|(p, rel)| vars.constraint(p, *rel)).collect());
        let code = CExpr::call("Solve", vec![cons, vars.list()]);
        let answer = oracle.execute(&print_fullform(&code))?;
        let solutions = vars.solutions(&answer)?;
        if solutions.is_empty() {
            return Err(VerifyError::Oracle("no solution returned".into()));
        }
        solutions.iter().map(|a| check_solution(&eqs, a)).collect()
    }

    /// Asks the oracle for Farkas coefficients refuting `hyps` and checks them.
    pub fn farkas<O: Oracle + ?Sized>(&self, hyps: &[KExpr], oracle: &mut O) -> Result<Verified, VerifyError> {
        let mut w = Walker::new();
        let polys = hyps.iter().map(|h| w.relation(h)).collect::<Result<Vec<_>, _>>()?;
        let vars = Vars(collect_vars(&polys));
        let cons = CExpr::list(polys.iter().map(|(p, rel)| vars.constraint(p, *rel)).collect());
        let answer = oracle.execute(&print_fullform(&CExpr::call("FarkasCertificate", vec![cons])))?;
        let bad = || VerifyError::Oracle(format!("unexpected answer {}", print_fullform(&answer)));
        if !answer.is_call("List") {
            return Err(bad());
        }
        if answer.args().is_empty() {
            return Err(VerifyError::Oracle("no certificate: the hypotheses may be satisfiable".into()));
        }
        let coeffs = answer.args().iter().map(|c| c.as_rational().ok_or_else(bad)).collect::<Result<Vec<_>, _>>()?;
        check_farkas(hyps, &coeffs)
    }
}

fn is_numeric(e: &KExpr) -> bool {
    e.locals().is_empty() && poly_of_kexpr(e).is_ok_and(|p| p.is_constant())
}

/// Presentation only: within each sum, numeric summands move after the
/// others (`-1 + x` becomes `x + -1`). The result is what gets certified.
pub fn constants_last(e: &KExpr) -> KExpr {
    let (head, args) = e.spine();
    if !(head.is_const_named("add") && args.len() == 4) {
        return match e {
            KExpr::App(f, a) => KExpr::app(constants_last(f), constants_last(a)),
            _ => e.clone(),
        };
    }
    let (ty, inst) = (args[0].clone(), args[1].clone());
    let add = head.clone();
    let mut summands = Vec::new();
    flatten_sum(e, &add, &ty, &inst, &mut summands);
    let numeric: Vec<bool> = summands.iter().map(is_numeric).collect();
    if numeric.windows(2).all(|w| !w[0] || w[1]) {
        // already in order; keep the original association
        let KExpr::App(f, a) = e else { unreachable!() };
        return KExpr::app(constants_last(f), constants_last(a));
    }
    let summands: Vec<KExpr> = summands.iter().map(constants_last).collect();
    let (mut terms, numbers): (Vec<KExpr>, Vec<KExpr>) = summands.into_iter().partition(|s| !is_numeric(s));
    terms.extend(numbers);
    let mut it = terms.into_iter();
    let first = it.next().expect("a sum has summands");
    it.fold(first, |acc, s| KExpr::apps(add.clone(), [ty.clone(), inst.clone(), acc, s]))
}

fn flatten_sum(e: &KExpr, add: &KExpr, ty: &KExpr, inst: &KExpr, out: &mut Vec<KExpr>) {
    let (head, args) = e.spine();
    if head == add && args.len() == 4 && args[0] == ty && args[1] == inst {
        flatten_sum(args[2], add, ty, inst, out);
        flatten_sum(args[3], add, ty, inst, out);
    } else {
        out.push(e.clone());
    }
}

fn collect_vars(polys: &[(Poly, Relation)]) -> Vec<Var> {
    let set: BTreeSet<Var> = polys.iter().flat_map(|(p, _)| p.vars()).collect();
    set.into_iter().collect()
}
