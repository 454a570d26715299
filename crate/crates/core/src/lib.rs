//! Expression languages on both sides of the bridge.
//!
//! `kexpr` is the typed kernel term language, `cexpr` the untyped CAS term
//! language. `reflect` carries kernel terms into the CAS world and `interpret`
//! brings CAS answers back as pre-expressions and elaborates them. `poly`
//! holds the exact-rational polynomial arithmetic that both the engine and the
//! certificate checkers share.

pub mod cexpr;
pub mod interpret;
pub mod kexpr;
pub mod poly;
pub mod reflect;

pub use cexpr::{parse_fullform, print_fullform, CExpr};
pub use interpret::{elaborate, expr_of_mmexpr, pexpr_of_mmexpr, BackRuleSet, InstanceTable, PExpr};
pub use kexpr::{parse_kexpr, print_kexpr, KExpr, LocalContext, Name, Signature};
pub use reflect::{activate, encode_kernel_expr, lean_form, Evaluate, ForwardRuleSet};
