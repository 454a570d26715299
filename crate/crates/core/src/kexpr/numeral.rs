use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use super::KExpr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not a numeral: {0}")]
pub struct NotANumeral(pub String);

/// Binary numeral built from the bare constants `zero`, `one`, `bit0` and
/// `bit1`; implicit arguments are left for elaboration to fill in.
pub fn encode_numeral(n: &BigUint) -> KExpr {
    if n.is_zero() {
        return KExpr::constant("zero");
    }
    if n.is_one() {
        return KExpr::constant("one");
    }
    let (half, rem) = n.div_rem(&BigUint::from(2u8));
    let head = if rem.is_zero() { "bit0" } else { "bit1" };
    KExpr::app(KExpr::constant(head), encode_numeral(&half))
}

/// Reads a numeral spine back. Both the bare form produced by
/// [`encode_numeral`] and the elaborated form (with type and instance
/// arguments) are accepted.
pub fn decode_numeral(e: &KExpr) -> Result<BigUint, NotANumeral> {
    let fail = || NotANumeral(format!("{e:?}"));
    let (head, args) = e.spine();
    let name = head.const_name().ok_or_else(fail)?;
    let name = match name.parts() {
        [super::NamePart::Str(s)] => s.as_str(),
        _ => return Err(fail()),
    };
    match (name, args.len()) {
        ("zero", 0 | 2) => Ok(BigUint::zero()),
        ("one", 0 | 2) => Ok(BigUint::one()),
        ("bit0", 1 | 3) => Ok(decode_numeral(args[args.len() - 1])? * 2u8),
        ("bit1", 1 | 4) => Ok(decode_numeral(args[args.len() - 1])? * 2u8 + 1u8),
        _ => Err(fail()),
    }
}
