use std::sync::Arc;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::cexpr::{print_fullform, CExpr};
use crate::kexpr::{BinderInfo, KExpr, Level, LocalConst, Name};

/// Heads of the verbatim encoding.
pub const ENCODING_HEADS: [&str; 9] =
    ["LeanVar", "LeanSort", "LeanConst", "LeanMVar", "LeanLocal", "LeanApp", "LeanLam", "LeanPi", "LeanLet"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not a kernel encoding: {0}")]
pub struct DecodeError(pub String);

fn bad(e: &CExpr) -> DecodeError {
    let mut s = print_fullform(e);
    if s.len() > 120 {
        s.truncate(117);
        s.push_str("...");
    }
    DecodeError(s)
}

pub fn encode_level(l: &Level) -> CExpr {
    if let Some(n) = l.as_numeral() {
        return CExpr::int(n);
    }
    match l {
        Level::Succ(x) => CExpr::call("LeanLevelSucc", vec![encode_level(x)]),
        Level::Max(a, b) => CExpr::call("LeanLevelMax", vec![encode_level(a), encode_level(b)]),
        Level::Param(n) => CExpr::call("LeanLevelParam", vec![CExpr::Str(n.to_string())]),
        Level::Zero => CExpr::int(0),
    }
}

pub fn decode_level(e: &CExpr) -> Result<Level, DecodeError> {
    match (e, e.head_sym(), e.args()) {
        (CExpr::Int(n), ..) => n.to_u32().map(Level::of_nat).ok_or_else(|| bad(e)),
        (_, Some("LeanLevelSucc"), [x]) => Ok(decode_level(x)?.succ()),
        (_, Some("LeanLevelMax"), [a, b]) => Ok(Level::max(decode_level(a)?, decode_level(b)?)),
        (_, Some("LeanLevelParam"), [CExpr::Str(s)]) => Ok(Level::Param(name(s, e)?)),
        _ => Err(bad(e)),
    }
}

fn info_str(i: BinderInfo) -> &'static str {
    match i {
        BinderInfo::Default => "bi",
        BinderInfo::Implicit => "implicit",
        BinderInfo::InstImplicit => "inst_implicit",
    }
}

fn info_of(e: &CExpr) -> Result<BinderInfo, DecodeError> {
    match e {
        CExpr::Str(s) if s == "bi" => Ok(BinderInfo::Default),
        CExpr::Str(s) if s == "implicit" => Ok(BinderInfo::Implicit),
        CExpr::Str(s) if s == "inst_implicit" => Ok(BinderInfo::InstImplicit),
        _ => Err(bad(e)),
    }
}

fn name(s: &str, ctx: &CExpr) -> Result<Name, DecodeError> {
    Name::parse(s).map_err(|_| bad(ctx))
}

fn name_str(n: &Name) -> CExpr {
    CExpr::Str(n.to_string())
}

/// Verbatim, injective encoding with `Lean*` heads. Nothing is dropped:
/// names, levels, binder info and local types all appear.
pub fn encode_kernel_expr(e: &KExpr) -> CExpr {
    match e {
        KExpr::Var(i) => CExpr::call("LeanVar", vec![CExpr::int(*i)]),
        KExpr::Sort(l) => CExpr::call("LeanSort", vec![encode_level(l)]),
        KExpr::Const(n, ls) => {
            CExpr::call("LeanConst", vec![name_str(n), CExpr::list(ls.iter().map(encode_level).collect())])
        }
        KExpr::MVar(n, t) => CExpr::call("LeanMVar", vec![name_str(n), encode_kernel_expr(t)]),
        KExpr::Local(l) => CExpr::call(
            "LeanLocal",
            vec![name_str(&l.unique), name_str(&l.pretty), CExpr::str(info_str(l.info)), encode_kernel_expr(&l.ty)],
        ),
        KExpr::App(f, a) => CExpr::call("LeanApp", vec![encode_kernel_expr(f), encode_kernel_expr(a)]),
        KExpr::Lam { name, info, domain, body } => CExpr::call(
            "LeanLam",
            vec![name_str(name), CExpr::str(info_str(*info)), encode_kernel_expr(domain), encode_kernel_expr(body)],
        ),
        KExpr::Pi { name, info, domain, body } => CExpr::call(
            "LeanPi",
            vec![name_str(name), CExpr::str(info_str(*info)), encode_kernel_expr(domain), encode_kernel_expr(body)],
        ),
        KExpr::Let { name, ty, value, body } => CExpr::call(
            "LeanLet",
            vec![name_str(name), encode_kernel_expr(ty), encode_kernel_expr(value), encode_kernel_expr(body)],
        ),
    }
}

/// Inverse of [`encode_kernel_expr`]. `lookup` resolves bare symbols (the
/// translation environment); everything else must be an encoding head.
pub fn decode_kernel_expr(
    e: &CExpr,
    lookup: &dyn Fn(&str) -> Option<KExpr>,
) -> Result<KExpr, DecodeError> {
    let d = |x: &CExpr| decode_kernel_expr(x, lookup);
    if let CExpr::Sym(s) = e {
        return lookup(s).ok_or_else(|| bad(e));
    }
    match (e.head_sym(), e.args()) {
        (Some("LeanVar"), [CExpr::Int(i)]) => i.to_u32().map(KExpr::Var).ok_or_else(|| bad(e)),
        (Some("LeanSort"), [l]) => Ok(KExpr::Sort(decode_level(l)?)),
        (Some("LeanConst"), [CExpr::Str(n), ls]) if ls.is_call("List") => Ok(KExpr::Const(
            name(n, e)?,
            ls.args().iter().map(decode_level).collect::<Result<_, _>>()?,
        )),
        (Some("LeanMVar"), [CExpr::Str(n), t]) => Ok(KExpr::MVar(name(n, e)?, Arc::new(d(t)?))),
        (Some("LeanLocal"), [CExpr::Str(u), CExpr::Str(p), bi, t]) => Ok(KExpr::local(LocalConst {
            unique: name(u, e)?,
            pretty: name(p, e)?,
            info: info_of(bi)?,
            ty: d(t)?,
        })),
        (Some("LeanApp"), [f, a]) => Ok(KExpr::app(d(f)?, d(a)?)),
        (Some("LeanLam"), [CExpr::Str(n), bi, dom, b]) => Ok(KExpr::lam(name(n, e)?, info_of(bi)?, d(dom)?, d(b)?)),
        (Some("LeanPi"), [CExpr::Str(n), bi, dom, b]) => Ok(KExpr::pi(name(n, e)?, info_of(bi)?, d(dom)?, d(b)?)),
        (Some("LeanLet"), [CExpr::Str(n), t, v, b]) => Ok(KExpr::elet(name(n, e)?, d(t)?, d(v)?, d(b)?)),
        _ => Err(bad(e)),
    }
}

