use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::LedgerError;

/// `c0 + c1·n` in the formal twist parameter `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct LinExpr {
    pub c0: i64,
    pub c1: i64,
}

impl LinExpr {
    pub const ZERO: LinExpr = LinExpr { c0: 0, c1: 0 };
    pub const ONE: LinExpr = LinExpr { c0: 1, c1: 0 };
    pub const N: LinExpr = LinExpr { c0: 0, c1: 1 };

    pub const fn new(c0: i64, c1: i64) -> Self {
        LinExpr { c0, c1 }
    }

    pub const fn constant(c0: i64) -> Self {
        LinExpr { c0, c1: 0 }
    }

    pub fn is_zero(self) -> bool {
        self == LinExpr::ZERO
    }

    pub fn is_constant(self) -> bool {
        self.c1 == 0
    }

    pub fn eval(self, n: i64) -> i64 {
        self.c0 + self.c1 * n
    }

    /// Substitutes a concrete value for `n`.
    pub fn specialize(self, n: i64) -> LinExpr {
        LinExpr::constant(self.eval(n))
    }

    pub fn scale(self, k: i64) -> LinExpr {
        LinExpr { c0: self.c0 * k, c1: self.c1 * k }
    }

    /// Products stay linear only when one side is constant.
    pub fn try_mul(self, rhs: LinExpr) -> Result<LinExpr, LedgerError> {
        match (self.is_constant(), rhs.is_constant()) {
            (true, _) => Ok(rhs.scale(self.c0)),
            (_, true) => Ok(self.scale(rhs.c0)),
            _ => Err(LedgerError::Nonlinear(self, rhs)),
        }
    }

    /// Human-oriented form: `n`, `-n`, `2n-1`, `3`.
    pub fn pretty(self) -> String {
        let lin = match self.c1 {
            0 => String::new(),
            1 => "n".to_string(),
            -1 => "-n".to_string(),
            k => format!("{k}n"),
        };
        match (self.c1, self.c0) {
            (0, c) => c.to_string(),
            (_, 0) => lin,
            (_, c) if c > 0 => format!("{lin}+{c}"),
            (_, c) => format!("{lin}{c}"),
        }
    }
}

/// Canonical serialization `c0 + c1*n`.
impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*n", self.c0, self.c1)
    }
}

/// Accepts sums of integer and `n` terms, e.g. `n`, `-n+1`, `2n-1`,
/// `1 - 2*n`, `0 + 1*n`.
impl FromStr for LinExpr {
    type Err = LedgerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LedgerError::LinExprSyntax(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut out = LinExpr::ZERO;
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            // A term may carry a run of signs, as in `0 + -1*n`.
            let mut sign = 1;
            let mut signs = 0;
            while let Some(c) = rest.chars().next().filter(|c| matches!(c, '+' | '-')) {
                if c == '-' {
                    sign = -sign;
                }
                signs += 1;
                rest = &rest[1..];
            }
            if signs > 2 {
                return Err(bad());
            }
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let term = &rest[..end];
            rest = &rest[end..];
            if term.is_empty() {
                return Err(bad());
            }
            if let Some(coef) = term.strip_suffix('n') {
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                let k: i64 = if coef.is_empty() { 1 } else { coef.parse().map_err(|_| bad())? };
                out.c1 += sign * k;
            } else {
                out.c0 += sign * term.parse::<i64>().map_err(|_| bad())?;
            }
        }
        Ok(out)
    }
}

impl Add for LinExpr {
    type Output = LinExpr;
    fn add(self, rhs: LinExpr) -> LinExpr {
        LinExpr { c0: self.c0 + rhs.c0, c1: self.c1 + rhs.c1 }
    }
}

impl Sub for LinExpr {
    type Output = LinExpr;
    fn sub(self, rhs: LinExpr) -> LinExpr {
        self + (-rhs)
    }
}

impl Neg for LinExpr {
    type Output = LinExpr;
    fn neg(self) -> LinExpr {
        LinExpr { c0: -self.c0, c1: -self.c1 }
    }
}

impl Mul<i64> for LinExpr {
    type Output = LinExpr;
    fn mul(self, k: i64) -> LinExpr {
        self.scale(k)
    }
}
