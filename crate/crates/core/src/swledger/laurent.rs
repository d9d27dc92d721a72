use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::linexpr::LinExpr;
use super::LedgerError;

/// Laurent polynomial in `t` with coefficients linear in `n`. Zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, LinExpr>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(0, LinExpr::ONE)
    }

    pub fn monomial(exponent: i64, c: LinExpr) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(exponent, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, LinExpr)>>(terms: I) -> Self {
        let mut p = LaurentPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exponent: i64, c: LinExpr) {
        let slot = self.coeffs.entry(exponent).or_default();
        *slot = *slot + c;
        if slot.is_zero() {
            self.coeffs.remove(&exponent);
        }
    }

    pub fn coeff(&self, exponent: i64) -> LinExpr {
        self.coeffs.get(&exponent).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, LinExpr)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn top(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn bottom(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut p = self.clone();
        for (e, c) in other.terms() {
            p.add_term(e, c);
        }
        p
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().map(|(e, c)| (e, c * k)))
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly, LedgerError> {
        let mut p = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                p.add_term(e1 + e2, c1.try_mul(c2)?);
            }
        }
        Ok(p)
    }

    /// `t ↦ t^k`
    pub fn substitute_power(&self, k: i64) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().map(|(e, c)| (e * k, c)))
    }

    pub fn eval_at_one(&self) -> LinExpr {
        self.terms().fold(LinExpr::ZERO, |acc, (_, c)| acc + c)
    }

    /// Invariant under `t ↦ t⁻¹`.
    pub fn is_symmetric(&self) -> bool {
        self.terms().all(|(e, c)| self.coeff(-e) == c)
    }

    /// Exact quotient by a divisor whose extreme coefficients are `±1`.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Result<LaurentPoly, LedgerError> {
        let (Some(dtop), Some(dbot)) = (divisor.top(), divisor.bottom()) else {
            return Err(LedgerError::InexactDivision);
        };
        let lead = divisor.coeff(dtop);
        if !(lead.is_constant() && lead.c0.abs() == 1) {
            return Err(LedgerError::UnsupportedDivisor);
        }
        let mut rem = self.clone();
        let mut quotient = LaurentPoly::zero();
        while let (Some(rtop), Some(rbot)) = (rem.top(), rem.bottom()) {
            if rtop - dtop < rbot - dbot {
                return Err(LedgerError::InexactDivision);
            }
            let shift = rtop - dtop;
            let c = rem.coeff(rtop) * lead.c0;
            quotient.add_term(shift, c);
            for (e, d) in divisor.terms() {
                rem.add_term(e + shift, -d.try_mul(c)?);
            }
        }
        Ok(quotient)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coeffs.iter().rev().map(|(e, c)| format!("({})t^{e}", c.pretty())).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t_minus_inverse() -> LaurentPoly {
        LaurentPoly::from_terms([(1, LinExpr::ONE), (-1, -LinExpr::ONE)])
    }

    #[test]
    fn zero_terms_are_dropped() {
        let p = LaurentPoly::from_terms([(1, LinExpr::N), (1, -LinExpr::N), (0, LinExpr::ONE)]);
        assert_eq!(p, LaurentPoly::one());
    }

    #[test]
    fn exact_division() {
        let n = LinExpr::N;
        let p = LaurentPoly::from_terms([(2, n), (0, n * -2), (-2, n)]);
        let q = p.div_exact(&t_minus_inverse()).unwrap();
        assert_eq!(q, LaurentPoly::from_terms([(1, n), (-1, -n)]));
        assert_eq!(q.mul(&t_minus_inverse()).unwrap(), p);
    }

    #[test]
    fn inexact_division_is_reported() {
        let p = LaurentPoly::from_terms([(2, LinExpr::ONE), (0, LinExpr::ONE)]);
        assert!(matches!(p.div_exact(&t_minus_inverse()), Err(LedgerError::InexactDivision)));
        let two = LaurentPoly::monomial(0, LinExpr::constant(2));
        assert!(matches!(p.div_exact(&two), Err(LedgerError::UnsupportedDivisor)));
        assert!(matches!(p.div_exact(&LaurentPoly::zero()), Err(LedgerError::InexactDivision)));
    }

    #[test]
    fn symbolic_products_must_stay_linear() {
        let p = LaurentPoly::monomial(1, LinExpr::N);
        assert!(p.mul(&p).is_err());
    }
}
