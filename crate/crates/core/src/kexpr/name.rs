use std::fmt;

use thiserror::Error;

/// One component of a hierarchical name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NamePart {
    Str(String),
    Num(u64),
}

/// A hierarchical name such as `real.has_add` or the unique name `17.27`.
///
/// Text segments are never empty, never contain `.`, and are never made of
/// digits only, so printing and re-parsing recovers the same segment list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Vec<NamePart>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("names must have at least one segment")]
    Empty,
    #[error("invalid name segment {0:?}")]
    BadSegment(String),
}

impl Name {
    pub fn parse(text: &str) -> Result<Name, NameError> {
        if text.is_empty() {
            return Err(NameError::Empty);
        }
        let parts = text
            .split('.')
            .map(|seg| {
                if seg.is_empty() {
                    Err(NameError::BadSegment(seg.to_string()))
                } else if seg.bytes().all(|b| b.is_ascii_digit()) {
                    seg.parse::<u64>()
                        .map(NamePart::Num)
                        .map_err(|_| NameError::BadSegment(seg.to_string()))
                } else {
                    Ok(NamePart::Str(seg.to_string()))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Name(parts))
    }

    pub fn from_parts(parts: Vec<NamePart>) -> Result<Name, NameError> {
        if parts.is_empty() {
            return Err(NameError::Empty);
        }
        for p in &parts {
            if let NamePart::Str(s) = p {
                if s.is_empty() || s.contains('.') || s.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(NameError::BadSegment(s.clone()));
                }
            }
        }
        Ok(Name(parts))
    }

    pub fn parts(&self) -> &[NamePart] {
        &self.0
    }

    /// Appends a numeric segment, e.g. `_uniq` + 3 = `_uniq.3`.
    pub fn with_num(&self, n: u64) -> Name {
        let mut parts = self.0.clone();
        parts.push(NamePart::Num(n));
        Name(parts)
    }

    pub fn is_str(&self, s: &str) -> bool {
        matches!(self.0.as_slice(), [NamePart::Str(x)] if x == s)
    }

    /// The last text segment, used when a display name is needed.
    pub fn last_str(&self) -> Option<&str> {
        self.0.iter().rev().find_map(|p| match p {
            NamePart::Str(s) => Some(s.as_str()),
            NamePart::Num(_) => None,
        })
    }
}

impl From<&str> for Name {
    /// Panics on malformed input; meant for names written in source code.
    fn from(s: &str) -> Name {
        Name::parse(s).unwrap_or_else(|e| panic!("bad name literal {s:?}: {e}"))
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            match p {
                NamePart::Str(s) => f.write_str(s)?,
                NamePart::Num(n) => write!(f, "{n}")?,
            }
        }
        Ok(())
    }
}
