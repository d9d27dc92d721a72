use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::word::{Generator, Word};

/// An exact element of SL(2, ℤ), stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sl2 {
    pub m11: BigInt,
    pub m12: BigInt,
    pub m21: BigInt,
    pub m22: BigInt,
}

impl Sl2 {
    /// Returns `None` unless the determinant is exactly one.
    pub fn new(m11: BigInt, m12: BigInt, m21: BigInt, m22: BigInt) -> Option<Self> {
        let m = Sl2 { m11, m12, m21, m22 };
        m.determinant().is_one().then_some(m)
    }

    pub fn from_i64(rows: [[i64; 2]; 2]) -> Option<Self> {
        Sl2::new(rows[0][0].into(), rows[0][1].into(), rows[1][0].into(), rows[1][1].into())
    }

    pub fn identity() -> Self {
        Sl2 { m11: BigInt::one(), m12: BigInt::zero(), m21: BigInt::zero(), m22: BigInt::one() }
    }

    /// `a^k = ((1,k),(0,1))` and `b^k = ((1,0),(-k,1))`; exact for any k.
    pub fn generator_power(g: Generator, k: i64) -> Self {
        match g {
            Generator::A => Sl2 { m11: BigInt::one(), m12: k.into(), m21: BigInt::zero(), m22: BigInt::one() },
            Generator::B => Sl2 { m11: BigInt::one(), m12: BigInt::zero(), m21: (-k).into(), m22: BigInt::one() },
        }
    }

    pub fn determinant(&self) -> BigInt {
        &self.m11 * &self.m22 - &self.m12 * &self.m21
    }

    pub fn is_identity(&self) -> bool {
        *self == Sl2::identity()
    }

    pub fn inverse(&self) -> Self {
        Sl2 { m11: self.m22.clone(), m12: -&self.m12, m21: -&self.m21, m22: self.m11.clone() }
    }

    pub fn trace(&self) -> BigInt {
        &self.m11 + &self.m22
    }

    pub fn apply(&self, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
        (&self.m11 * x + &self.m12 * y, &self.m21 * x + &self.m22 * y)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Sl2::identity();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

impl Mul for &Sl2 {
    type Output = Sl2;

    fn mul(self, rhs: &Sl2) -> Sl2 {
        Sl2 {
            m11: &self.m11 * &rhs.m11 + &self.m12 * &rhs.m21,
            m12: &self.m11 * &rhs.m12 + &self.m12 * &rhs.m22,
            m21: &self.m21 * &rhs.m11 + &self.m22 * &rhs.m21,
            m22: &self.m21 * &rhs.m12 + &self.m22 * &rhs.m22,
        }
    }
}

impl fmt::Display for Sl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({},{}),({},{}))", self.m11, self.m12, self.m21, self.m22)
    }
}

/// Product of generator matrices, left to right in word order.
pub fn eval_word(w: &Word) -> Sl2 {
    w.letters().iter().fold(Sl2::identity(), |acc, &(g, e)| &acc * &Sl2::generator_power(g, e))
}

pub fn words_equal_in_group(w1: &Word, w2: &Word) -> bool {
    eval_word(w1) == eval_word(w2)
}
