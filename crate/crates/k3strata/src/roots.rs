//! ADE root-lattice symbols and the `mult*symbol` sum grammar shared by the
//! fiber and lattice layers (e.g. `"D4+2A6+A1"`).

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootParseError {
    #[error("invalid root symbol: {0}")]
    Symbol(String),
    #[error("empty term in root sum")]
    EmptyTerm,
}

/// A single ADE symbol: `A_n` (n >= 1), `D_n` (n >= 4), `E6`, `E7`, `E8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RootSymbol {
    A(u32),
    D(u32),
    E(u32),
}

impl RootSymbol {
    pub fn rank(self) -> u32 {
        match self {
            RootSymbol::A(n) | RootSymbol::D(n) | RootSymbol::E(n) => n,
        }
    }

    /// Number of roots: vectors of squared norm -2 in the negative-definite
    /// convention used throughout.
    pub fn root_count(self) -> u64 {
        match self {
            RootSymbol::A(n) => u64::from(n) * u64::from(n + 1),
            RootSymbol::D(n) => 2 * u64::from(n) * u64::from(n - 1),
            RootSymbol::E(6) => 72,
            RootSymbol::E(7) => 126,
            RootSymbol::E(8) => 240,
            RootSymbol::E(_) => unreachable!("validated at construction"),
        }
    }

    /// Order of the discriminant group (|det| of the Gram matrix).
    pub fn disc_order(self) -> u64 {
        match self {
            RootSymbol::A(n) => u64::from(n) + 1,
            RootSymbol::D(_) => 4,
            RootSymbol::E(6) => 3,
            RootSymbol::E(7) => 2,
            RootSymbol::E(8) => 1,
            RootSymbol::E(_) => unreachable!(),
        }
    }

    pub fn validate(self) -> Result<Self, RootParseError> {
        match self {
            RootSymbol::A(n) if n >= 1 => Ok(self),
            RootSymbol::D(n) if n >= 4 => Ok(self),
            RootSymbol::E(n) if (6..=8).contains(&n) => Ok(self),
            _ => Err(RootParseError::Symbol(format!("{self}"))),
        }
    }
}

impl fmt::Display for RootSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootSymbol::A(n) => write!(f, "A{n}"),
            RootSymbol::D(n) => write!(f, "D{n}"),
            RootSymbol::E(n) => write!(f, "E{n}"),
        }
    }
}

/// A formal sum of ADE symbols with multiplicities, kept in the order given.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootSum(pub Vec<RootSymbol>);

impl RootSum {
    /// Parses `"D4+2A6+A1"`. An empty string is the empty sum.
    pub fn parse(s: &str) -> Result<Self, RootParseError> {
        let s = s.trim();
        if s.is_empty() || s == "0" || s == "-" {
            return Ok(RootSum(Vec::new()));
        }
        let mut out = Vec::new();
        for term in s.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(RootParseError::EmptyTerm);
            }
            let digits: String = term.chars().take_while(|c| c.is_ascii_digit()).collect();
            let mult: u32 = if digits.is_empty() {
                1
            } else {
                digits
                    .parse()
                    .map_err(|_| RootParseError::Symbol(term.into()))?
            };
            let rest = &term[digits.len()..];
            let mut chars = rest.chars();
            let letter = chars.next().ok_or(RootParseError::EmptyTerm)?;
            let n: u32 = chars
                .as_str()
                .trim()
                .parse()
                .map_err(|_| RootParseError::Symbol(term.into()))?;
            let sym = match letter {
                'A' | 'a' => RootSymbol::A(n),
                'D' | 'd' => RootSymbol::D(n),
                'E' | 'e' => RootSymbol::E(n),
                _ => return Err(RootParseError::Symbol(term.into())),
            }
            .validate()?;
            for _ in 0..mult {
                out.push(sym);
            }
        }
        Ok(RootSum(out))
    }

    pub fn rank(&self) -> u32 {
        self.0.iter().map(|s| s.rank()).sum()
    }

    pub fn root_count(&self) -> u64 {
        self.0.iter().map(|s| s.root_count()).sum()
    }

    pub fn disc_order(&self) -> u64 {
        self.0.iter().map(|s| s.disc_order()).product()
    }

    /// Multiset equality, ignoring the order of the summands.
    pub fn same_multiset(&self, other: &RootSum) -> bool {
        let mut a = self.0.clone();
        let mut b = other.0.clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }
}

impl fmt::Display for RootSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        // group equal consecutive symbols back into mult*symbol form
        let mut sorted = self.0.clone();
        sorted.sort_unstable();
        let mut i = 0;
        let mut first = true;
        while i < sorted.len() {
            let j = sorted[i..].iter().take_while(|&&s| s == sorted[i]).count();
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if j > 1 {
                write!(f, "{}", j)?;
            }
            write!(f, "{}", sorted[i])?;
            i += j;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_sum() {
        let r = RootSum::parse("D4+2A6+A1").unwrap();
        assert_eq!(r.rank(), 4 + 12 + 1);
        assert_eq!(r.disc_order(), 4 * 49 * 2);
        assert_eq!(r.to_string(), "A1+2A6+D4");
    }

    #[test]
    fn parse_empty_and_bad() {
        assert_eq!(RootSum::parse("").unwrap().rank(), 0);
        assert!(RootSum::parse("B3").is_err());
        assert!(RootSum::parse("D3").is_err());
        assert!(RootSum::parse("E9").is_err());
    }

    #[test]
    fn root_counts() {
        assert_eq!(RootSymbol::A(1).root_count(), 2);
        assert_eq!(RootSymbol::D(4).root_count(), 24);
        assert_eq!(RootSymbol::E(8).root_count(), 240);
    }
}
