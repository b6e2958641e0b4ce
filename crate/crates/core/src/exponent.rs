//! Extended exponents in `[1, ∞]` and exponent pairs with the `q ≤ p` regime flag.

use crate::{Error, Result};
use std::fmt;

/// An exponent in `[1, ∞]`. Infinity is a distinct variant, never a float
/// sentinel; every formula that depends on it branches explicitly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    /// Exponent 1.
    pub const ONE: Exponent = Exponent::Finite(1.0);
    /// Exponent 2.
    pub const TWO: Exponent = Exponent::Finite(2.0);
    /// Exponent ∞.
    pub const INF: Exponent = Exponent::Infinity;

    /// Builds a finite or infinite exponent, rejecting values below 1 and NaN.
    pub fn new(value: f64) -> Result<Exponent> {
        if value.is_infinite() && value > 0.0 {
            Ok(Exponent::Infinity)
        } else if value.is_finite() && value >= 1.0 {
            Ok(Exponent::Finite(value))
        } else {
            Err(Error::InvalidExponent(value))
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn is_one(self) -> bool {
        matches!(self, Exponent::Finite(v) if v == 1.0)
    }

    /// Finite value, or `f64::INFINITY` for ∞. For formulas that are safe
    /// under the float infinity conventions.
    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(v) => v,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// `1/e` with the convention `1/∞ = 0`.
    pub fn recip(self) -> f64 {
        match self {
            Exponent::Finite(v) => 1.0 / v,
            Exponent::Infinity => 0.0,
        }
    }

    /// The conjugate exponent `e'` with `1/e + 1/e' = 1`, under the endpoint
    /// conventions `1' = ∞` and `∞' = 1`. Involutive, exactly so at the
    /// endpoints.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::ONE,
            Exponent::Finite(v) if v == 1.0 => Exponent::Infinity,
            Exponent::Finite(v) => Exponent::Finite(v / (v - 1.0)),
        }
    }

    /// Parses `"inf"`, `"oo"` or a decimal value.
    pub fn parse(s: &str) -> Result<Exponent> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "oo" {
            return Ok(Exponent::Infinity);
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::InvalidExponent(f64::NAN))?;
        Exponent::new(v)
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.value().partial_cmp(&other.value())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(v) => write!(f, "{v}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

/// A pair `(p, q)` of exponents. Multiplier-norm operations require the
/// standing regime `q ≤ p`; generic operator-norm operations accept any pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentPair {
    pub p: Exponent,
    pub q: Exponent,
    regime: bool,
}

impl ExponentPair {
    pub fn new(p: Exponent, q: Exponent) -> ExponentPair {
        let regime = q.value() <= p.value();
        ExponentPair { p, q, regime }
    }

    pub fn from_values(p: f64, q: f64) -> Result<ExponentPair> {
        Ok(ExponentPair::new(Exponent::new(p)?, Exponent::new(q)?))
    }

    /// True iff `q ≤ p`.
    pub fn regime(&self) -> bool {
        self.regime
    }

    /// Errors unless `q ≤ p` holds.
    pub fn require_regime(&self) -> Result<()> {
        if self.regime {
            Ok(())
        } else {
            Err(Error::RegimeViolation {
                p: self.p.to_string(),
                q: self.q.to_string(),
            })
        }
    }

    /// The pair `(q, p')` appearing on the dual side of the multiplier norm.
    pub fn dual_substitution(&self) -> ExponentPair {
        ExponentPair::new(self.q, self.p.conjugate())
    }
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}
