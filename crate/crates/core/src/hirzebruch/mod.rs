//! Hirzebruch–Jung continued fractions and the linear plumbings `C_{p,q}`.
//!
//! `C_{p,q}` is the linear plumbing whose weights are the (negated)
//! continued fraction coefficients of `p²/(pq−1)`; its boundary is the lens
//! space `L(p², pq−1)`, which bounds a rational ball `B_{p,q}`. The
//! discriminant group of the plumbing lattice is cyclic of order `p²`, and a
//! characteristic class on the plumbing extends over `B_{p,q}` exactly when
//! its image lies in the subgroup of order `p`.

pub mod lattice;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HirzebruchError {
    #[error("continued fraction needs num > den >= 1, got {num}/{den}")]
    FractionOrder { num: i128, den: i128 },
    #[error("{num}/{den} is not in lowest terms")]
    NotCoprime { num: i128, den: i128 },
    #[error("C_{{p,q}} needs coprime p > q > 0, got ({p},{q})")]
    InvalidParams { p: u64, q: u64 },
    #[error("parameters ({p},{q}) overflow the supported range")]
    Overflow { p: u64, q: u64 },
    #[error("a chain needs at least one sphere")]
    EmptyChain,
    #[error("weight {weight} at position {index} is not <= -2")]
    WeightTooLarge { index: usize, weight: i64 },
    #[error("malformed chain `{0}`: expected (w1,w2,...)")]
    ChainSyntax(String),
    #[error("discriminant order {0} is not a perfect square")]
    NotSquareOrder(BigInt),
    #[error("discriminant group is not cyclic (invariant factors {0:?})")]
    NotCyclic(Vec<BigInt>),
    #[error("value vector has length {found}, chain has {expected} spheres")]
    LengthMismatch { expected: usize, found: usize },
}

type Result<T> = std::result::Result<T, HirzebruchError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CpqParams {
    p: u64,
    q: u64,
}

impl CpqParams {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if !(p > q && q > 0 && p.gcd(&q) == 1) {
            return Err(HirzebruchError::InvalidParams { p, q });
        }
        // p² must fit comfortably in the i128 continued-fraction arithmetic.
        if p > u32::MAX as u64 {
            return Err(HirzebruchError::Overflow { p, q });
        }
        Ok(CpqParams { p, q })
    }

    pub fn p(self) -> u64 {
        self.p
    }

    pub fn q(self) -> u64 {
        self.q
    }
}

impl fmt::Display for CpqParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C_{{{},{}}}", self.p, self.q)
    }
}

/// Weights of a linear plumbing of spheres, each `<= -2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Chain {
    weights: Vec<i64>,
}

impl Chain {
    pub fn new(weights: Vec<i64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(HirzebruchError::EmptyChain);
        }
        if let Some((index, &weight)) = weights.iter().enumerate().find(|(_, &w)| w > -2) {
            return Err(HirzebruchError::WeightTooLarge { index, weight });
        }
        Ok(Chain { weights })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Tridiagonal intersection form: weights on the diagonal, 1 between
    /// neighbours.
    pub fn gram_matrix(&self) -> Vec<Vec<i64>> {
        let k = self.len();
        let mut g = vec![vec![0; k]; k];
        for (i, &w) in self.weights.iter().enumerate() {
            g[i][i] = w;
            if i + 1 < k {
                g[i][i + 1] = 1;
                g[i + 1][i] = 1;
            }
        }
        g
    }

    /// Determinant via the continuant recurrence `Dᵢ = wᵢ·Dᵢ₋₁ − Dᵢ₋₂`.
    pub fn determinant(&self) -> BigInt {
        let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
        for &w in &self.weights {
            let next = BigInt::from(w) * &cur - &prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Evaluates `c₁ − 1/(c₂ − 1/(… − 1/c_k))` with `cᵢ = −wᵢ`, as a reduced
    /// fraction `(num, den)`.
    pub fn fraction(&self) -> (BigInt, BigInt) {
        let mut iter = self.weights.iter().rev();
        let last = -*iter.next().expect("chains are nonempty");
        let (mut num, mut den) = (BigInt::from(last), BigInt::one());
        for &w in iter {
            let next = BigInt::from(-w) * &num - &den;
            den = num;
            num = next;
        }
        (num, den)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Chain {
    type Err = HirzebruchError;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| HirzebruchError::ChainSyntax(s.to_string()))?;
        let weights = inner
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| HirzebruchError::ChainSyntax(s.to_string()))?;
        Chain::new(weights)
    }
}

/// Coefficients `c₁…c_k >= 2` with `num/den = c₁ − 1/(c₂ − …)`, by
/// ceiling-division recursion.
pub fn hj_expand(num: i128, den: i128) -> Result<Vec<i64>> {
    if !(num > den && den >= 1) {
        return Err(HirzebruchError::FractionOrder { num, den });
    }
    if num.gcd(&den) != 1 {
        return Err(HirzebruchError::NotCoprime { num, den });
    }
    let (mut a, mut b) = (num, den);
    let mut out = Vec::new();
    while b != 0 {
        let c = Integer::div_ceil(&a, &b);
        out.push(c as i64);
        (a, b) = (b, c * b - a);
    }
    Ok(out)
}

pub fn chain_for_cpq(params: CpqParams) -> Result<Chain> {
    let p = params.p as i128;
    let q = params.q as i128;
    let coeffs = hj_expand(p * p, p * q - 1)?;
    Chain::new(coeffs.into_iter().map(|c| -c).collect())
}

/// Recognises `C_{p,q}`: the fraction must be `p²/(pq−1)` and the chain must
/// round-trip through [`chain_for_cpq`].
pub fn identify_cpq(chain: &Chain) -> Option<CpqParams> {
    let (num, den) = chain.fraction();
    let p = num.sqrt();
    if &p * &p != num {
        return None;
    }
    let (q, rem) = (&den + 1u32).div_rem(&p);
    if !rem.is_zero() {
        return None;
    }
    let params = CpqParams::new(p.to_u64()?, q.to_u64()?).ok()?;
    (chain_for_cpq(params).ok()? == *chain).then_some(params)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLattice {
    pub gram: Vec<Vec<i64>>,
    pub det: BigInt,
}

impl ChainLattice {
    pub fn rank(&self) -> usize {
        self.gram.len()
    }
}

pub fn gram(chain: &Chain) -> ChainLattice {
    ChainLattice { gram: chain.gram_matrix(), det: chain.determinant() }
}

/// Pairings `vᵢ = ⟨K, uᵢ⟩` of a class with the chain spheres.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ValueVector(pub Vec<i64>);

impl ValueVector {
    pub fn negated(&self) -> ValueVector {
        ValueVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `vᵢ ≡ wᵢ (mod 2)` for every sphere.
    pub fn is_characteristic_for(&self, chain: &Chain) -> bool {
        self.0.len() == chain.len() && self.0.iter().zip(chain.weights()).all(|(v, w)| (v - w).rem_euclid(2) == 0)
    }
}

impl fmt::Display for ValueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The cokernel of the Gram matrix as `ℤ/order`, with `v ↦ Σ vᵢ·coeffsᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantData {
    pub order: BigInt,
    /// `√order`; the image of the rational ball is the subgroup of order `root`.
    pub root: BigInt,
    pub coeffs: Vec<BigInt>,
}

impl DiscriminantData {
    pub fn image(&self, v: &ValueVector) -> BigInt {
        let s: BigInt = v.0.iter().zip(&self.coeffs).map(|(&x, c)| BigInt::from(x) * c).sum();
        s.mod_floor(&self.order)
    }

    /// Characteristic and inside the index-`p` subgroup.
    pub fn extends(&self, chain: &Chain, v: &ValueVector) -> Result<bool> {
        if v.len() != chain.len() {
            return Err(HirzebruchError::LengthMismatch { expected: chain.len(), found: v.len() });
        }
        Ok(v.is_characteristic_for(chain) && self.image(v).is_multiple_of(&self.root))
    }
}

/// Solves the Gram relations `x₂ = −w₁x₁`, `xᵢ₊₁ = −xᵢ₋₁ − wᵢxᵢ` modulo the
/// determinant with `x₁ = 1`. Since `x₁` generates and `|coker G| = |det|`,
/// a consistent last row proves the cokernel is cyclic.
pub fn discriminant(chain: &Chain) -> Result<DiscriminantData> {
    let order = chain.determinant().abs();
    let root = order.sqrt();
    if &root * &root != order {
        return Err(HirzebruchError::NotSquareOrder(order));
    }
    let w = chain.weights();
    let k = w.len();
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(k);
    coeffs.push(BigInt::one());
    for i in 0..k - 1 {
        let prev = if i == 0 { BigInt::zero() } else { coeffs[i - 1].clone() };
        let next = (-prev - BigInt::from(w[i]) * &coeffs[i]).mod_floor(&order);
        coeffs.push(next);
    }
    let g = chain.gram_matrix();
    for row in &g {
        let s: BigInt = row.iter().zip(&coeffs).map(|(&a, c)| BigInt::from(a) * c).sum();
        if !s.mod_floor(&order).is_zero() {
            return Err(HirzebruchError::NotCyclic(lattice::smith_invariants(&g)));
        }
    }
    Ok(DiscriminantData { order, root, coeffs })
}

pub fn extends_over_ball(chain: &Chain, v: &ValueVector) -> Result<bool> {
    discriminant(chain)?.extends(chain, v)
}

/// `vᵢ = wᵢ + 2`: the restriction of a canonical class when every sphere
/// satisfies adjunction.
pub fn canonical_vector(chain: &Chain) -> ValueVector {
    ValueVector(chain.weights().iter().map(|w| w + 2).collect())
}

/// `vᵀ·G⁻¹·v`, the rational square of the class restricted to the
/// plumbing. Tridiagonal elimination in exact arithmetic.
pub fn inverse_form(chain: &Chain, v: &ValueVector) -> Result<BigRational> {
    if v.len() != chain.len() {
        return Err(HirzebruchError::LengthMismatch { expected: chain.len(), found: v.len() });
    }
    let w = chain.weights();
    let k = w.len();
    let r = |x: i64| BigRational::from_integer(x.into());
    // Forward sweep: dᵢ = wᵢ − 1/dᵢ₋₁, rhsᵢ = vᵢ − rhsᵢ₋₁/dᵢ₋₁.
    let mut d: Vec<BigRational> = Vec::with_capacity(k);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(k);
    for i in 0..k {
        if i == 0 {
            d.push(r(w[0]));
            rhs.push(r(v.0[0]));
        } else {
            let f = d[i - 1].recip();
            d.push(r(w[i]) - &f);
            rhs.push(r(v.0[i]) - &rhs[i - 1] * &f);
        }
    }
    let mut y = vec![BigRational::zero(); k];
    for i in (0..k).rev() {
        let upper = if i + 1 < k { y[i + 1].clone() } else { BigRational::zero() };
        y[i] = (&rhs[i] - upper) / &d[i];
    }
    Ok(v.0.iter().zip(&y).map(|(&a, b)| r(a) * b).sum())
}
