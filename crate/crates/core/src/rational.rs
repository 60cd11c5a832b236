//! Exact non-negative rationals and their extension with infinity.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Arbitrary precision rational, always kept in lowest terms by `num-rational`.
pub type Rational = BigRational;

/// Builds the integer rational `n`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds `n/d` in lowest terms. Panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `n` or `n/d`. Signs are accepted here; callers reject negatives
/// where the domain requires it.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() || text.contains(char::is_whitespace) {
        return None;
    }
    if let Some((n, d)) = text.split_once('/') {
        let n = BigInt::from_str(n).ok()?;
        let d = BigInt::from_str(d).ok()?;
        if d.is_zero() || d.is_negative() {
            return None;
        }
        Some(Rational::new(n, d))
    } else {
        BigInt::from_str(text).ok().map(Rational::from_integer)
    }
}

/// Parses a rational and requires it to be non-negative.
pub fn parse_nonneg(text: &str) -> Option<Rational> {
    parse_rational(text).filter(|r| !r.is_negative())
}

/// A non-negative rational or `∞`. `Infinity` is greater than every finite
/// value, so the derived order is the order of the extended half-line.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRational {
    Finite(Rational),
    Infinity,
}

impl ExtRational {
    pub fn zero() -> Self {
        ExtRational::Finite(Rational::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRational::Finite(r) if r.is_zero())
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(r) => Some(r),
            ExtRational::Infinity => None,
        }
    }

    /// `self ≤ eps` for a finite bound.
    pub fn le_rational(&self, eps: &Rational) -> bool {
        match self {
            ExtRational::Finite(r) => r <= eps,
            ExtRational::Infinity => false,
        }
    }
}

impl From<Rational> for ExtRational {
    fn from(r: Rational) -> Self {
        ExtRational::Finite(r)
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(r) => write!(f, "{r}"),
            ExtRational::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtRational {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s.trim() {
            "inf" | "∞" => Ok(ExtRational::Infinity),
            other => parse_nonneg(other).map(ExtRational::Finite).ok_or(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lowest_terms() {
        assert_eq!(parse_rational("6/4"), Some(ratio(3, 2)));
        assert_eq!(parse_rational("7"), Some(int(7)));
        assert_eq!(parse_rational("-1"), Some(int(-1)));
        assert_eq!(parse_nonneg("-1"), None);
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("1/-2"), None);
        assert_eq!(parse_rational("1.5"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn prints_exact() {
        assert_eq!(ratio(1, 2).to_string(), "1/2");
        assert_eq!(int(3).to_string(), "3");
        assert_eq!(ExtRational::Infinity.to_string(), "inf");
        assert_eq!(ExtRational::zero().to_string(), "0");
    }

    #[test]
    fn infinity_is_top() {
        let big = ExtRational::Finite(int(1_000_000));
        assert!(ExtRational::Infinity > big);
        assert!(ExtRational::zero() < big);
        assert_eq!(
            std::cmp::max(ExtRational::Infinity, ExtRational::zero()),
            ExtRational::Infinity
        );
    }
}
