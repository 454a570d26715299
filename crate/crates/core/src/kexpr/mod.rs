//! Kernel expressions: names, universe levels, de Bruijn terms, the fixed
//! signature, numerals and the surface syntax.

mod context;
mod expr;
mod level;
mod name;
mod numeral;
mod parse;
mod print;
mod signature;
pub mod typecheck;

pub use context::LocalContext;
pub use expr::{check_scoping, fresh_name, BinderInfo, KExpr, LocalConst};
pub use level::Level;
pub use name::{Name, NameError, NamePart};
pub use numeral::{decode_numeral, encode_numeral, NotANumeral};
pub use parse::{parse_kexpr, parse_pexpr, ParseError};
pub use print::{print_kexpr, print_kexpr_in};
pub use signature::{arrow_type, Declaration, Signature, SignatureError, BASE_TYPES, CLASSES};
