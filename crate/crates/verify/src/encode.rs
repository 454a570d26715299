//! Constraint systems as FullForm for the oracle, and its answers back.
//! Variables travel as `v$0`, `v$1`, ... so that any display name is safe.

use skepsis_core::cexpr::{print_fullform, CExpr};
use skepsis_core::poly::{Assignment, Poly, Relation, Var};

use crate::VerifyError;

pub(crate) struct Vars(pub Vec<Var>);

impl Vars {
    fn sym(&self, v: &Var) -> CExpr {
        let i = self.0.iter().position(|w| w == v).expect("variable was collected");
        CExpr::Sym(format!("v${i}"))
    }

    fn var_of(&self, sym: &str) -> Option<&Var> {
        let i: usize = sym.strip_prefix("v$")?.parse().ok()?;
        self.0.get(i)
    }

    pub fn list(&self) -> CExpr {
        CExpr::list(self.0.iter().map(|v| self.sym(v)).collect())
    }

    pub fn poly(&self, p: &Poly) -> CExpr {
        if p.is_zero() {
            return CExpr::int(0);
        }
        let terms = p
            .terms()
            .map(|(m, c)| {
                let mut factors = vec![CExpr::rational(c)];
                for (v, e) in m.iter() {
                    factors.push(if *e == 1 { self.sym(v) } else { CExpr::call("Power", vec![self.sym(v), CExpr::int(*e)]) });
                }
                CExpr::call("Times", factors)
            })
            .collect();
        CExpr::call("Plus", terms)
    }

    pub fn constraint(&self, p: &Poly, rel: Relation) -> CExpr {
        let head = match rel {
            Relation::Le => "LessEqual",
            Relation::Lt => "Less",
            Relation::Eq => "Equal",
        };
        CExpr::call(head, vec![self.poly(p), CExpr::int(0)])
    }

    /// `{{v$0 -> a, ...}, ...}` as assignments.
    pub fn solutions(&self, answer: &CExpr) -> Result<Vec<Assignment>, VerifyError> {
        let bad = || VerifyError::Oracle(format!("unexpected answer {}", print_fullform(answer)));
        if !answer.is_call("List") {
            return Err(bad());
        }
        answer
            .args()
            .iter()
            .map(|sol| {
                if !sol.is_call("List") {
                    return Err(bad());
                }
                let mut a = Assignment::new();
                for rule in sol.args() {
                    match (rule.head_sym(), rule.args()) {
                        (Some("Rule"), [CExpr::Sym(s), value]) => {
                            let v = self.var_of(s).ok_or_else(bad)?;
                            a.insert(v.clone(), value.as_rational().ok_or_else(bad)?);
                        }
                        _ => return Err(bad()),
                    }
                }
                Ok(a)
            })
            .collect()
    }
}
