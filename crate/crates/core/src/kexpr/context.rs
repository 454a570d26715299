use std::sync::Arc;

use super::{BinderInfo, KExpr, LocalConst, Name};

/// Local constants in scope for parsing, e.g. `x : real`.
///
/// Unique names come from a counter owned by the context, so two contexts
/// built the same way produce identical terms.
#[derive(Debug, Clone)]
pub struct LocalContext {
    prefix: Name,
    next: u64,
    locals: Vec<Arc<LocalConst>>,
}

impl Default for LocalContext {
    fn default() -> Self {
        LocalContext::new()
    }
}

impl LocalContext {
    pub fn new() -> LocalContext {
        LocalContext::with_prefix("_uniq".into())
    }

    pub fn with_prefix(prefix: Name) -> LocalContext {
        LocalContext { prefix, next: 1, locals: Vec::new() }
    }

    /// Declares a new local and returns it as a term.
    pub fn push(&mut self, pretty: &str, ty: KExpr) -> KExpr {
        let unique = self.prefix.with_num(self.next);
        self.next += 1;
        self.push_with_unique(unique, pretty, ty)
    }

    pub fn push_with_unique(&mut self, unique: Name, pretty: &str, ty: KExpr) -> KExpr {
        let l = Arc::new(LocalConst { unique, pretty: pretty.into(), info: BinderInfo::Default, ty });
        self.locals.push(l.clone());
        KExpr::Local(l)
    }

    /// Most recent declaration with this display name.
    pub fn lookup(&self, pretty: &str) -> Option<&Arc<LocalConst>> {
        self.locals.iter().rev().find(|l| l.pretty.is_str(pretty))
    }

    pub fn locals(&self) -> &[Arc<LocalConst>] {
        &self.locals
    }

    pub fn is_empty(&self) -> bool {
        self.locals.is_empty()
    }
}
