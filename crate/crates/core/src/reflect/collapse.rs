use std::collections::{BTreeMap, HashMap, HashSet};

use crate::cexpr::CExpr;

use super::{ReflectError, ENCODING_HEADS};

/// Collapsed symbol ↦ the subtree it stands for.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CollapseTable {
    prefix: String,
    entries: BTreeMap<String, CExpr>,
}

impl CollapseTable {
    pub fn get(&self, sym: &str) -> Option<&CExpr> {
        self.entries.get(sym)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &CExpr)> {
        self.entries.iter()
    }

    fn is_key(&self, s: &str) -> bool {
        s.strip_prefix(&self.prefix).is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
    }
}

fn is_encoding(e: &CExpr) -> bool {
    e.head_sym().is_some_and(|h| ENCODING_HEADS.contains(&h))
}

/// Replaces each maximal untranslated `Lean*` subtree by a short symbol.
/// Equal subtrees share a symbol.
pub fn collapse(e: &CExpr) -> (CExpr, CollapseTable) {
    let mut syms = HashSet::new();
    e.visit(&mut |n| {
        if let CExpr::Sym(s) = n {
            syms.insert(s.clone());
        }
    });
    let mut prefix = "$k".to_string();
    while syms.iter().any(|s| s.starts_with(&prefix)) {
        prefix.push('$');
    }
    let mut table = CollapseTable { prefix, entries: BTreeMap::new() };
    let mut seen: HashMap<CExpr, String> = HashMap::new();
    let out = e.replace(&mut |n| {
        if !is_encoding(n) {
            return None;
        }
        let key = seen.entry(n.clone()).or_insert_with(|| format!("{}{}", table.prefix, table.entries.len() + 1)).clone();
        table.entries.insert(key.clone(), n.clone());
        Some(CExpr::Sym(key))
    });
    (out, table)
}

/// Exact inverse of [`collapse`].
pub fn inflate(e: &CExpr, table: &CollapseTable) -> Result<CExpr, ReflectError> {
    let mut missing = None;
    let out = e.replace(&mut |n| match n {
        CExpr::Sym(s) if table.is_key(s) => match table.get(s) {
            Some(v) => Some(v.clone()),
            None => {
                missing.get_or_insert_with(|| s.clone());
                Some(n.clone())
            }
        },
        _ => None,
    });
    match missing {
        Some(s) => Err(ReflectError::MissingEntry(s)),
        None => Ok(out),
    }
}
