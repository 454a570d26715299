use std::collections::HashMap;
use std::fmt;

use super::Name;

/// Universe levels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Level {
    Zero,
    Succ(Box<Level>),
    Param(Name),
    Max(Box<Level>, Box<Level>),
}

impl Level {
    pub fn of_nat(n: u32) -> Level {
        (0..n).fold(Level::Zero, |l, _| l.succ())
    }

    pub fn succ(self) -> Level {
        Level::Succ(Box::new(self))
    }

    pub fn max(a: Level, b: Level) -> Level {
        Level::Max(Box::new(a), Box::new(b))
    }

    /// Value of a closed level; `None` if a parameter occurs.
    pub fn to_nat(&self) -> Option<u32> {
        match self {
            Level::Zero => Some(0),
            Level::Succ(l) => l.to_nat().map(|n| n + 1),
            Level::Param(_) => None,
            Level::Max(a, b) => Some(a.to_nat()?.max(b.to_nat()?)),
        }
    }

    /// `Some(n)` when the level is literally `succ^n zero`.
    pub fn as_numeral(&self) -> Option<u32> {
        match self {
            Level::Zero => Some(0),
            Level::Succ(l) => l.as_numeral().map(|n| n + 1),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.to_nat() == Some(0)
    }

    pub fn instantiate(&self, subst: &HashMap<Name, Level>) -> Level {
        match self {
            Level::Zero => Level::Zero,
            Level::Succ(l) => l.instantiate(subst).succ(),
            Level::Param(n) => subst.get(n).cloned().unwrap_or_else(|| self.clone()),
            Level::Max(a, b) => Level::max(a.instantiate(subst), b.instantiate(subst)),
        }
    }

    pub fn params(&self, out: &mut Vec<Name>) {
        match self {
            Level::Zero => {}
            Level::Succ(l) => l.params(out),
            Level::Param(n) => {
                if !out.contains(n) {
                    out.push(n.clone())
                }
            }
            Level::Max(a, b) => {
                a.params(out);
                b.params(out);
            }
        }
    }

    /// Closed levels collapse to numerals; open ones are left as they are.
    pub fn normalize(&self) -> Level {
        match self.to_nat() {
            Some(n) => Level::of_nat(n),
            None => match self {
                Level::Succ(l) => l.normalize().succ(),
                Level::Max(a, b) => {
                    let (a, b) = (a.normalize(), b.normalize());
                    if a == b {
                        a
                    } else if a.is_zero() {
                        b
                    } else if b.is_zero() {
                        a
                    } else {
                        Level::max(a, b)
                    }
                }
                _ => self.clone(),
            },
        }
    }

    pub fn equiv(&self, other: &Level) -> bool {
        self.normalize() == other.normalize()
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_numeral() {
            return write!(f, "{n}");
        }
        match self {
            Level::Succ(l) => write!(f, "{l}+1"),
            Level::Param(n) => write!(f, "{n}"),
            Level::Max(a, b) => write!(f, "max({a}, {b})"),
            Level::Zero => f.write_str("0"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn succ_depth_is_value() {
        for n in 0..20 {
            assert_eq!(Level::of_nat(n).to_nat(), Some(n));
        }
        let l = Level::max(Level::of_nat(2), Level::of_nat(5));
        assert_eq!(l.to_nat(), Some(5));
        assert_eq!(l.normalize(), Level::of_nat(5));
        assert_eq!(Level::Param("u".into()).succ().to_nat(), None);
    }
}
