//! Exact word engine for the mapping class group of the torus, identified
//! with SL(2, ℤ) via `a ↦ ((1,1),(0,1))`, `b ↦ ((1,0),(-1,1))`.
//!
//! Monodromy factorizations are ordered lists of conjugated right-handed
//! Dehn twists `x·c^m·x⁻¹`; a factorization describes a genus-1 Lefschetz
//! fibration over the sphere when its product is the identity.

mod matrix;
mod word;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use matrix::{eval_word, words_equal_in_group, Sl2};
pub use word::{Generator, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McgError {
    #[error("unexpected `{found}` at offset {at} in `{input}`")]
    Syntax { input: String, at: usize, found: char },
    #[error("unexpected end of input in `{input}`")]
    UnexpectedEnd { input: String },
    #[error("twist multiplicity must be at least 1 in `{0}`")]
    ZeroMultiplicity(String),
}

/// `conjugator · cycle^multiplicity · conjugator⁻¹`, standing for
/// `multiplicity` separate right-handed twists along the same curve.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Twist {
    pub cycle: Generator,
    pub conjugator: Word,
    multiplicity: u32,
}

impl Twist {
    pub fn new(cycle: Generator, conjugator: Word, multiplicity: u32) -> Result<Self, McgError> {
        if multiplicity == 0 {
            return Err(McgError::ZeroMultiplicity(cycle.letter().to_string()));
        }
        Ok(Twist { cycle, conjugator, multiplicity })
    }

    pub fn plain(cycle: Generator, multiplicity: u32) -> Self {
        Twist { cycle, conjugator: Word::identity(), multiplicity: multiplicity.max(1) }
    }

    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    pub fn expand(&self) -> Word {
        Word::power(self.cycle, self.multiplicity as i64).conjugate_by(&self.conjugator)
    }

    /// The same twist conjugated once more by `x` (so `x` acts last).
    pub fn conjugated_by(&self, x: &Word) -> Twist {
        Twist { conjugator: x.concat(&self.conjugator), ..self.clone() }
    }
}

/// Token syntax `c[^m][@w]`: cycle letter, optional multiplicity, optional
/// conjugating word. `b@A^4` is `a⁻⁴ b a⁴`, `a^3@B` is `(a^{b⁻¹})³`.
impl FromStr for Twist {
    type Err = McgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (head, conj) = match s.split_once('@') {
            Some((h, c)) => (h, c.parse::<Word>()?),
            None => (s, Word::identity()),
        };
        let mut chars = head.char_indices();
        let cycle = match chars.next() {
            Some((_, 'a')) => Generator::A,
            Some((_, 'b')) => Generator::B,
            Some((at, found)) => return Err(McgError::Syntax { input: s.to_string(), at, found }),
            None => return Err(McgError::UnexpectedEnd { input: s.to_string() }),
        };
        let rest = &head[1..];
        let multiplicity = if rest.is_empty() {
            1
        } else {
            rest.strip_prefix('^').and_then(|d| d.parse::<u32>().ok()).ok_or_else(|| McgError::Syntax {
                input: s.to_string(),
                at: 1,
                found: rest.chars().next().unwrap_or(' '),
            })?
        };
        if multiplicity == 0 {
            return Err(McgError::ZeroMultiplicity(s.to_string()));
        }
        Ok(Twist { cycle, conjugator: conj, multiplicity })
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle.letter())?;
        if self.multiplicity != 1 {
            write!(f, "^{}", self.multiplicity)?;
        }
        if !self.conjugator.is_empty() {
            let conj: String = self.conjugator.to_string().split_whitespace().collect();
            write!(f, "@{conj}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct TwistFactorization {
    pub twists: Vec<Twist>,
}

impl TwistFactorization {
    pub fn new(twists: Vec<Twist>) -> Self {
        TwistFactorization { twists }
    }

    pub fn twist_count(&self) -> u64 {
        self.twists.iter().map(|t| t.multiplicity as u64).sum()
    }

    /// Vanishing cycle of the `index`-th unit twist (1-based).
    pub fn unit_cycle(&self, index: usize) -> Option<CycleClass> {
        self.unit_twists().nth(index.checked_sub(1)?).map(vanishing_cycle)
    }

    /// Each factor as a single unit twist, in order.
    pub fn unit_twists(&self) -> impl Iterator<Item = &Twist> {
        self.twists.iter().flat_map(|t| std::iter::repeat_n(t, t.multiplicity as usize))
    }
}

impl FromStr for TwistFactorization {
    type Err = McgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split_whitespace().map(str::parse).collect::<Result<_, _>>().map(TwistFactorization::new)
    }
}

impl fmt::Display for TwistFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.twists.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

pub fn expand_factorization(f: &TwistFactorization) -> Word {
    f.twists.iter().fold(Word::identity(), |w, t| w.concat(&t.expand()))
}

/// Primitive homology class of a simple closed curve on the torus, up to
/// sign: the first nonzero coordinate is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleClass {
    pub u: BigInt,
    pub v: BigInt,
}

impl CycleClass {
    /// `None` for non-primitive vectors (including zero).
    pub fn new(u: BigInt, v: BigInt) -> Option<Self> {
        if !u.gcd(&v).is_one() {
            return None;
        }
        let flip = u.is_negative() || (u.is_zero() && v.is_negative());
        Some(if flip { CycleClass { u: -u, v: -v } } else { CycleClass { u, v } })
    }
}

impl fmt::Display for CycleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

pub fn vanishing_cycle(t: &Twist) -> CycleClass {
    let m = eval_word(&t.conjugator);
    let (x, y) = match t.cycle {
        Generator::A => (BigInt::one(), BigInt::zero()),
        Generator::B => (BigInt::zero(), BigInt::one()),
    };
    let (u, v) = m.apply(&x, &y);
    CycleClass::new(u, v).expect("SL(2,Z) maps primitive vectors to primitive vectors")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationReport {
    pub is_identity: bool,
    pub twist_count: u64,
    pub expected_twists: u64,
    pub monodromy: Sl2,
    /// One vanishing cycle per factor of the factorization.
    pub cycles: Vec<CycleClass>,
}

impl FibrationReport {
    pub fn passes(&self) -> bool {
        self.is_identity && self.twist_count == self.expected_twists
    }
}

pub fn verify_fibration(f: &TwistFactorization, expected_twists: u64) -> FibrationReport {
    let monodromy = eval_word(&expand_factorization(f));
    FibrationReport {
        is_identity: monodromy.is_identity(),
        twist_count: f.twist_count(),
        expected_twists,
        monodromy,
        cycles: f.twists.iter().map(vanishing_cycle).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

const IDENTITIES: [(&str, &str, &str); 7] = [
    ("(ab)^6 = 1", "(ab)^6", "1"),
    ("(a^3b)^3 = 1", "(a^3b)^3", "1"),
    ("(a^3b)^3 = a^7 b^{a^-4} b^{a^-1} a^2 b", "(a^3b)^3", "a^7 (A^4 b a^4) (A b a) a^2 b"),
    ("a^3ba^2b^2a^2ba = 1", "a^3ba^2b^2a^2ba", "1"),
    ("a^3ba^2b^2a^2ba = a^8 b^{a^-2} b^2 b^{a^2}", "a^3ba^2b^2a^2ba", "a^8 (A^2 b a^2) b^2 (a^2 b A^2)"),
    ("(a^3b)^3 = a^6 b^{a^-3} b^2 (a^{b^-1})^3", "(a^3b)^3", "a^6 (A^3 b a^3) b^2 (B a b)^3"),
    ("b = a^{ab}", "b", "(ab) a (ab)^-1"),
];

/// The relations behind the three elliptic fibrations (I_7, I_8 and I_6
/// fibers) plus the presentation relations of the group.
pub fn identity_suite() -> Vec<IdentityCheck> {
    IDENTITIES
        .iter()
        .map(|&(name, lhs, rhs)| {
            let l: Word = lhs.parse().expect("built-in word");
            let r: Word = rhs.parse().expect("built-in word");
            IdentityCheck { name, lhs: l.to_string(), rhs: r.to_string(), pass: words_equal_in_group(&l, &r) }
        })
        .collect()
}

/// The three fibration factorizations used by the constructions.
pub fn fibration_factorizations() -> Vec<(&'static str, TwistFactorization)> {
    [
        ("I7: a^7 b^{a^-4} b^{a^-1} a^2 b", "a^7 b@A^4 b@A a^2 b"),
        ("I8: a^8 b^{a^-2} b^2 b^{a^2}", "a^8 b@A^2 b^2 b@a^2"),
        ("I6: a^6 b^{a^-3} b^2 (a^{b^-1})^3", "a^6 b@A^3 b^2 a^3@B"),
    ]
    .into_iter()
    .map(|(name, s)| (name, s.parse().expect("built-in factorization")))
    .collect()
}
