//! CAS expressions and their FullForm text.

mod expr;
mod parse;
mod pattern;
mod print;

pub use expr::{CExpr, MReal};
pub use parse::{parse_fullform, parse_fullform_many, FullFormError};
pub use pattern::{match_pattern, match_with, pattern_vars, substitute, Bindings};
pub use print::print_fullform;
