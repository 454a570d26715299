//! CAS answers back into the kernel: pre-expressions, the three classes of
//! back-translation rules, and elaboration.

mod back;
mod elab;
mod instances;
mod pexpr;

pub use back::{
    expr_of_mmexpr, pexpr_of_mmexpr, BackError, BackRuleSet, BinderKind, KeyedRule, TransEnv, Translator,
    UnkeyedRule,
};
pub use elab::{elaborate, ElabError};
pub use instances::InstanceTable;
pub use pexpr::PExpr;
