use crate::cexpr::{parse_fullform_many, pattern_vars, CExpr};

use super::ReflectError;

const DEFAULT_RULES: &str = include_str!("../../data/forward_rules.m");

/// Template heads with special meaning; see the default rule file.
pub(crate) const SLOT_HEADS: [&str; 4] = ["LeanForm", "LeanBoundSymbol", "LeanFormBody", "LeanFormLet"];

#[derive(Debug, Clone, PartialEq)]
pub struct ForwardRule {
    pub pattern: CExpr,
    pub template: CExpr,
}

/// `LeanForm` rules; later registrations take precedence.
#[derive(Debug, Clone, Default)]
pub struct ForwardRuleSet {
    rules: Vec<ForwardRule>,
}

impl ForwardRuleSet {
    pub fn empty() -> ForwardRuleSet {
        ForwardRuleSet::default()
    }

    /// The shipped default rules.
    pub fn builtin() -> ForwardRuleSet {
        let mut rs = ForwardRuleSet::empty();
        rs.load(DEFAULT_RULES).expect("default forward rules are well-formed");
        rs
    }

    /// Registers every `pattern -> template` entry of a FullForm text.
    pub fn load(&mut self, text: &str) -> Result<(), ReflectError> {
        let items = parse_fullform_many(text).map_err(|e| ReflectError::MalformedRule(e.to_string()))?;
        for item in items {
            match (item.head_sym(), item.args()) {
                (Some("Rule" | "RuleDelayed"), [p, t]) => self.register(p.clone(), t.clone())?,
                _ => return Err(ReflectError::MalformedRule(format!("expected pattern -> template, got {item}"))),
            }
        }
        Ok(())
    }

    pub fn register(&mut self, pattern: CExpr, template: CExpr) -> Result<(), ReflectError> {
        let vars = pattern_vars(&pattern);
        let mut problem = None;
        template.visit(&mut |n| {
            let Some(h) = n.head_sym() else { return };
            if !SLOT_HEADS.contains(&h) {
                return;
            }
            let want = if h == "LeanFormLet" { 2 } else { 1 };
            if n.args().len() != want {
                problem.get_or_insert(format!("{h} takes {want} argument(s) in {n}"));
                return;
            }
            for a in n.args() {
                match a.as_sym() {
                    Some(v) if vars.iter().any(|x| x == v) => {}
                    _ => {
                        problem.get_or_insert(format!("{n} does not name a pattern variable"));
                    }
                }
            }
        });
        if let Some(p) = problem {
            return Err(ReflectError::MalformedRule(p));
        }
        self.rules.push(ForwardRule { pattern, template });
        Ok(())
    }

    /// Rules in application order (newest first).
    pub fn iter(&self) -> impl Iterator<Item = &ForwardRule> {
        self.rules.iter().rev()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}
