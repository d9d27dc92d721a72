//! Seiberg–Witten bookkeeping on a tracked sublattice: basic classes with
//! values linear in the twist parameter `n`, pushed through knot surgery,
//! blow-ups and rational blow-downs.

pub mod laurent;
pub mod linexpr;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hirzebruch::{discriminant, identify_cpq, inverse_form, Chain, HirzebruchError, ValueVector};
use crate::homcalc::Ambient;
use crate::par::Execution;

pub use laurent::LaurentPoly;
pub use linexpr::LinExpr;

#[derive(Debug, Error)]
pub enum LedgerError {
    #[error("product of {} and {} is not linear in n", .0.pretty(), .1.pretty())]
    Nonlinear(LinExpr, LinExpr),
    #[error("cannot parse linear expression `{0}`")]
    LinExprSyntax(String),
    #[error("Laurent division leaves a nonzero remainder")]
    InexactDivision,
    #[error("divisor must have extreme coefficients ±1")]
    UnsupportedDivisor,
    #[error("polynomial evaluates to {} at t=1, expected 1", .0.pretty())]
    NotNormalized(LinExpr),
    #[error("knot surgery needs an elliptic base with (e, sigma) = (12, -8), got ({e}, {sigma})")]
    NotElliptic { e: i64, sigma: i64 },
    #[error("class has {found} coordinates, ambient rank is {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("class {0:?} is not characteristic")]
    NotCharacteristic(Vec<i64>),
    #[error("basis name `{0}` already in use")]
    DuplicateName(String),
    #[error("blow-up count must be at least 1")]
    EmptyBlowUp,
    #[error("chain {0} is not a C_{{p,q}} plumbing")]
    NotCpq(Chain),
    #[error("{weights} chain weights but {classes} chain classes")]
    ChainLength { weights: usize, classes: usize },
    #[error("chain curve {index} has square {found}, chain weight is {expected}")]
    ChainSquare { index: usize, expected: i64, found: i64 },
    #[error("class {class:?} has dimension {dim}, expected a nonnegative integer")]
    BadDimension { class: Vec<i64>, dim: BigRational },
    #[error("exact value transfer needs both auxiliary invariants declared zero")]
    MissingZeroFlags,
    #[error("at most one wall crossing is supported, got {0}")]
    TooManyCrossings(u32),
    #[error("malformed ledger line `{0}`")]
    LineSyntax(String),
    #[error(transparent)]
    Hirzebruch(#[from] HirzebruchError),
}

type Result<T> = std::result::Result<T, LedgerError>;

/// A possible-values set produced by wall-crossing ambiguity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ValueSet(pub BTreeSet<LinExpr>);

impl ValueSet {
    pub fn contains(&self, v: LinExpr) -> bool {
        self.0.contains(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = LinExpr> + '_ {
        self.0.iter().copied()
    }

    pub fn eval(&self, n: i64) -> BTreeSet<i64> {
        self.0.iter().map(|v| v.eval(n)).collect()
    }

    pub fn is_subset(&self, other: &ValueSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl FromIterator<LinExpr> for ValueSet {
    fn from_iter<I: IntoIterator<Item = LinExpr>>(iter: I) -> Self {
        ValueSet(iter.into_iter().collect())
    }
}

impl fmt::Display for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.pretty()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// The plumbing a ledger was blown down along, kept so squares of the
/// blown-down classes can be recovered from their parent representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainCorrection {
    pub chain: Chain,
    pub classes: Vec<Vec<i64>>,
}

/// Basic classes (as vectors over `ambient.basis`) with their values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ledger {
    pub ambient: Ambient,
    pub entries: BTreeMap<Vec<i64>, LinExpr>,
    /// Classes whose value comes from arithmetic alone with no independent
    /// confirmation.
    pub unverified: BTreeSet<Vec<i64>>,
    /// Wall crossings separating the recorded values from the actual ones.
    pub crossings: u32,
    pub corrections: Vec<ChainCorrection>,
}

impl Ledger {
    pub fn empty(ambient: Ambient) -> Self {
        Ledger { ambient, entries: BTreeMap::new(), unverified: BTreeSet::new(), crossings: 0, corrections: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn value(&self, class: &[i64]) -> Option<LinExpr> {
        self.entries.get(class).copied()
    }

    pub fn is_conjugation_symmetric(&self) -> bool {
        self.entries.iter().all(|(k, &v)| self.value(&negate(k)) == Some(-v))
    }

    /// Square in the current manifold. After a blow-down the restriction to
    /// each removed plumbing is subtracted as `vᵀG⁻¹v`.
    pub fn square(&self, class: &[i64]) -> Result<BigRational> {
        let mut sq = BigRational::from_integer(BigInt::from(form(&self.ambient.gram, class, class)));
        for c in &self.corrections {
            let v = restrict_to_chain(class, &c.classes, &self.ambient.gram);
            sq -= inverse_form(&c.chain, &v)?;
        }
        Ok(sq)
    }

    pub fn dimension(&self, class: &[i64]) -> Result<BigRational> {
        Ok(dimension_from_square(self.square(class)?, self.ambient.e, self.ambient.sigma))
    }

    pub fn value_set(&self, class: &[i64]) -> Option<ValueSet> {
        let v = self.value(class)?;
        chamber_value_set(v, self.crossings).ok()
    }

    /// One `(a,b,…) = c0 + c1*n` line per entry in lexicographic class
    /// order; entries without independent confirmation carry `[unverified]`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(&format!("{} = {v}", ValueVector(k.clone())));
            if self.unverified.contains(k) {
                out.push_str(" [unverified]");
            }
            out.push('\n');
        }
        out
    }

    /// Inverse of `serialize` for the entry lines.
    pub fn parse_entries(text: &str) -> Result<BTreeMap<Vec<i64>, LinExpr>> {
        let mut out = BTreeMap::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let bad = || LedgerError::LineSyntax(line.to_string());
            let (class, value) = line.split_once('=').ok_or_else(bad)?;
            let class = class.trim().strip_prefix('(').and_then(|c| c.strip_suffix(')')).ok_or_else(bad)?;
            let class: Vec<i64> = class
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad())?;
            let value = value.trim().trim_end_matches("[unverified]");
            out.insert(class, value.parse()?);
        }
        Ok(out)
    }
}

fn negate(k: &[i64]) -> Vec<i64> {
    k.iter().map(|x| -x).collect()
}

fn form(gram: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
    x.iter()
        .zip(gram)
        .filter(|(&a, _)| a != 0)
        .map(|(&a, row)| a * row.iter().zip(y).map(|(g, b)| g * b).sum::<i64>())
        .sum()
}

/// `x·y ≡ y·y (mod 2)` for every basis vector `y`.
fn is_characteristic(gram: &[Vec<i64>], class: &[i64]) -> bool {
    (0..gram.len()).all(|i| {
        let xy: i64 = gram[i].iter().zip(class).map(|(g, c)| g * c).sum();
        (xy - gram[i][i]).rem_euclid(2) == 0
    })
}

/// `n·t − (2n−1) + n·t⁻¹`
pub fn alexander_twist() -> LaurentPoly {
    let n = LinExpr::N;
    LaurentPoly::from_terms([(1, n), (0, -(n * 2 - LinExpr::ONE)), (-1, n)])
}

/// Basic classes `j·T` of knot surgery on the fiber `T` of an elliptic
/// surface: the coefficient of `tʲ` in `(P(t²) − 1)/(t − t⁻¹)`. When more
/// than one knot enters, only the extreme classes are marked verified.
pub fn knot_surgery_ledger(polys: &[LaurentPoly], base: &Ambient, fiber: &[i64]) -> Result<Ledger> {
    if (base.e, base.sigma) != (12, -8) {
        return Err(LedgerError::NotElliptic { e: base.e, sigma: base.sigma });
    }
    if fiber.len() != base.rank() {
        return Err(LedgerError::RankMismatch { expected: base.rank(), found: fiber.len() });
    }
    let mut product = LaurentPoly::one();
    for p in polys {
        let at_one = p.eval_at_one();
        if at_one != LinExpr::ONE {
            return Err(LedgerError::NotNormalized(at_one));
        }
        product = product.mul(p)?;
    }
    let shifted = product.substitute_power(2).sub(&LaurentPoly::one());
    let denom = LaurentPoly::from_terms([(1, LinExpr::ONE), (-1, -LinExpr::ONE)]);
    let q = shifted.div_exact(&denom)?;

    let mut ledger = Ledger::empty(base.clone());
    let extreme = q.top().unwrap_or(0);
    for (j, c) in q.terms() {
        let class: Vec<i64> = fiber.iter().map(|x| x * j).collect();
        if !is_characteristic(&base.gram, &class) {
            return Err(LedgerError::NotCharacteristic(class));
        }
        if polys.len() > 1 && j.abs() != extreme {
            ledger.unverified.insert(class.clone());
        }
        ledger.entries.insert(class, c);
    }
    Ok(ledger)
}

/// Blow-up formula with `count` fresh exceptional classes `E1, E2, …`
/// (skipping names already in the basis).
pub fn blow_up_ledger(l: &Ledger, count: usize) -> Result<Ledger> {
    let mut names = Vec::with_capacity(count);
    let mut i = 1;
    while names.len() < count {
        let name = format!("E{i}");
        if l.ambient.index_of(&name).is_none() {
            names.push(name);
        }
        i += 1;
    }
    blow_up_ledger_named(l, &names)
}

/// Each entry `K` spawns `K + Σ aᵢEᵢ` for every sign pattern `aᵢ = ±1`.
pub fn blow_up_ledger_named(l: &Ledger, names: &[String]) -> Result<Ledger> {
    if names.is_empty() {
        return Err(LedgerError::EmptyBlowUp);
    }
    let mut ambient = l.ambient.clone();
    for name in names {
        if ambient.index_of(name).is_some() {
            return Err(LedgerError::DuplicateName(name.clone()));
        }
        ambient.push_exceptional(name);
    }
    let count = names.len();
    let pad = |k: &[i64], signs: u32| -> Vec<i64> {
        let mut v = k.to_vec();
        v.extend((0..count).map(|i| if signs >> i & 1 == 0 { 1 } else { -1 }));
        v
    };
    let mut out = Ledger { ambient, ..Ledger::empty(l.ambient.clone()) };
    out.crossings = l.crossings;
    out.corrections = l
        .corrections
        .iter()
        .map(|c| ChainCorrection {
            chain: c.chain.clone(),
            classes: c.classes.iter().map(|k| pad_zero(k, count)).collect(),
        })
        .collect();
    for (k, &v) in &l.entries {
        for signs in 0..(1u32 << count) {
            let class = pad(k, signs);
            if l.unverified.contains(k) {
                out.unverified.insert(class.clone());
            }
            out.entries.insert(class, v);
        }
    }
    Ok(out)
}

fn pad_zero(k: &[i64], count: usize) -> Vec<i64> {
    let mut v = k.to_vec();
    v.resize(k.len() + count, 0);
    v
}

fn dimension_from_square(square: BigRational, e: i64, sigma: i64) -> BigRational {
    (square - BigRational::from_integer(BigInt::from(3 * sigma + 2 * e))) / BigRational::from_integer(BigInt::from(4))
}

/// Characteristic with integral formal dimension.
pub fn is_admissible_class(class: &[i64], ambient: &Ambient) -> bool {
    is_characteristic(&ambient.gram, class) && dimension(class, ambient).is_integer()
}

/// `(K² − 3σ − 2e)/4`
pub fn dimension(class: &[i64], ambient: &Ambient) -> BigRational {
    let sq = BigRational::from_integer(BigInt::from(ambient.form(class, class)));
    dimension_from_square(sq, ambient.e, ambient.sigma)
}

pub fn restrict_to_chain(class: &[i64], chain_classes: &[Vec<i64>], gram: &[Vec<i64>]) -> ValueVector {
    ValueVector(chain_classes.iter().map(|u| form(gram, class, u)).collect())
}

/// Declared vanishing of the two auxiliary invariants entering the
/// blow-down difference formula: the rational-ball model and the rational
/// elliptic surface it sits in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ZeroFlags {
    pub model: bool,
    pub rational_elliptic: bool,
}

impl ZeroFlags {
    pub const BOTH: ZeroFlags = ZeroFlags { model: true, rational_elliptic: true };
}

/// How values move to the blown-down manifold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transfer {
    /// Values carried unchanged; requires both zero-flags.
    Exact(ZeroFlags),
    /// Values known only up to one wall crossing.
    UpToCrossing,
}

pub fn rational_blowdown_ledger(
    l: &Ledger,
    chain: &Chain,
    chain_classes: &[Vec<i64>],
    flags: ZeroFlags,
) -> Result<Ledger> {
    rational_blowdown_ledger_with(Execution::default(), l, chain, chain_classes, Transfer::Exact(flags), "")
}

/// Keeps the entries whose restriction to the plumbing extends over the
/// rational ball. The survivors keep their parent representatives and
/// values; the ambient loses `k` from `e` and gains `k` in `σ`.
pub fn rational_blowdown_ledger_with(
    exec: Execution,
    l: &Ledger,
    chain: &Chain,
    chain_classes: &[Vec<i64>],
    transfer: Transfer,
    label: &str,
) -> Result<Ledger> {
    if identify_cpq(chain).is_none() {
        return Err(LedgerError::NotCpq(chain.clone()));
    }
    if chain_classes.len() != chain.len() {
        return Err(LedgerError::ChainLength { weights: chain.len(), classes: chain_classes.len() });
    }
    for (index, (u, &w)) in chain_classes.iter().zip(chain.weights()).enumerate() {
        if u.len() != l.ambient.rank() {
            return Err(LedgerError::RankMismatch { expected: l.ambient.rank(), found: u.len() });
        }
        let found = form(&l.ambient.gram, u, u);
        if found != w {
            return Err(LedgerError::ChainSquare { index, expected: w, found });
        }
    }
    let crossings = match transfer {
        Transfer::Exact(f) if f.model && f.rational_elliptic => l.crossings,
        Transfer::Exact(_) => return Err(LedgerError::MissingZeroFlags),
        Transfer::UpToCrossing => l.crossings + 1,
    };
    if crossings > 1 {
        return Err(LedgerError::TooManyCrossings(crossings));
    }

    let disc = discriminant(chain)?;
    let entries: Vec<(Vec<i64>, LinExpr)> = l.entries.iter().map(|(k, &v)| (k.clone(), v)).collect();
    let survivors: Vec<(Vec<i64>, LinExpr)> = exec.filter_map(&entries, |(k, v)| {
        let r = restrict_to_chain(k, chain_classes, &l.ambient.gram);
        disc.extends(chain, &r).ok()?.then(|| (k.clone(), *v))
    });
    for (k, _) in &survivors {
        let dim = l.dimension(k)?;
        if !dim.is_integer() || dim.is_negative() {
            return Err(LedgerError::BadDimension { class: k.clone(), dim });
        }
    }

    let k = chain.len() as i64;
    let mut ambient = l.ambient.clone();
    ambient.e -= k;
    ambient.sigma += k;
    if !label.is_empty() {
        ambient.label = label.to_string();
    }
    let mut out = Ledger::empty(ambient);
    out.crossings = crossings;
    out.corrections = l.corrections.clone();
    out.corrections.push(ChainCorrection { chain: chain.clone(), classes: chain_classes.to_vec() });
    for (class, v) in survivors {
        if l.unverified.contains(&class) {
            out.unverified.insert(class.clone());
        }
        out.entries.insert(class, v);
    }
    Ok(out)
}

/// `{v}` with no crossing, `{v−1, v, v+1}` across one wall.
pub fn chamber_value_set(v: LinExpr, crossings: u32) -> Result<ValueSet> {
    match crossings {
        0 => Ok([v].into_iter().collect()),
        1 => Ok([v - LinExpr::ONE, v, v + LinExpr::ONE].into_iter().collect()),
        c => Err(LedgerError::TooManyCrossings(c)),
    }
}

/// Every integer the ledger allows as a basic-class value at twist `n`.
pub fn profile(l: &Ledger, n: i64) -> Result<BTreeSet<i64>> {
    let mut out = BTreeSet::new();
    for &v in l.entries.values() {
        out.extend(chamber_value_set(v, l.crossings)?.eval(n));
    }
    Ok(out)
}

pub fn distinguishable(a: &BTreeSet<i64>, b: &BTreeSet<i64>) -> bool {
    a.is_disjoint(b)
}

/// Exactly two classes `±L`, and they do not form a blow-up pair: either
/// `L² ≠ −1` or the possible values at `L` and `−L` are disjoint at `n`.
pub fn minimality_report(l: &Ledger, n: i64) -> Result<bool> {
    let entries: Vec<(&Vec<i64>, &LinExpr)> = l.entries.iter().collect();
    let [(a, &va), (b, &vb)] = entries[..] else {
        return Ok(false);
    };
    if *a != negate(b) || a.iter().all(|x| *x == 0) {
        return Ok(false);
    }
    let sa = chamber_value_set(va, l.crossings)?.eval(n);
    let sb = chamber_value_set(vb, l.crossings)?.eval(n);
    let minus_one = BigRational::from_integer(BigInt::from(-1));
    let pairs = l.square(a)? == minus_one && !sa.is_disjoint(&sb);
    Ok(!pairs)
}

/// Whether the ledger is the blow-up of something along some tracked
/// square −1 class: entries split into pairs `K ± E` with shared values.
pub fn has_blow_up_pairing(l: &Ledger) -> Result<bool> {
    let Some((first, _)) = l.entries.iter().next() else {
        return Ok(false);
    };
    let minus_one = BigRational::from_integer(BigInt::from(-1));
    for (other, _) in l.entries.iter().skip(1) {
        let diff: Vec<i64> = first.iter().zip(other).map(|(x, y)| x - y).collect();
        if diff.iter().any(|d| d % 2 != 0) {
            continue;
        }
        let e: Vec<i64> = diff.iter().map(|d| d / 2).collect();
        if l.square(&e)? != minus_one {
            continue;
        }
        let paired = l.entries.iter().all(|(k, v)| {
            let plus: Vec<i64> = k.iter().zip(&e).map(|(x, y)| x + 2 * y).collect();
            let minus: Vec<i64> = k.iter().zip(&e).map(|(x, y)| x - 2 * y).collect();
            l.value(&plus) == Some(*v) || l.value(&minus) == Some(*v)
        });
        if paired {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hirzebruch::{canonical_vector, chain_for_cpq, CpqParams};
    use num_traits::Zero;

    fn v_n_ambient() -> Ambient {
        // Fiber T and section S.
        let mut a = Ambient::new("V_n", vec!["T".into(), "S".into()], 12, -8).unwrap();
        a.set_pairing("T", "S", 1).unwrap();
        a.set_pairing("S", "S", -1).unwrap();
        a
    }

    fn n(c0: i64, c1: i64) -> LinExpr {
        LinExpr::new(c0, c1)
    }

    #[test]
    fn twist_knot_polynomial() {
        let p = alexander_twist();
        assert_eq!(p.eval_at_one(), LinExpr::ONE);
        assert!(p.is_symmetric());
        let trefoil = LaurentPoly::from_terms(p.terms().map(|(e, c)| (e, c.specialize(1))));
        let expect = LaurentPoly::from_terms([(1, LinExpr::ONE), (0, -LinExpr::ONE), (-1, LinExpr::ONE)]);
        assert_eq!(trefoil, expect);
    }

    #[test]
    fn single_knot_ledger() {
        let l = knot_surgery_ledger(&[alexander_twist()], &v_n_ambient(), &[1, 0]).unwrap();
        let expect: BTreeMap<_, _> = [(vec![1, 0], LinExpr::N), (vec![-1, 0], -LinExpr::N)].into();
        assert_eq!(l.entries, expect);
        assert!(l.unverified.is_empty());
        assert!(l.is_conjugation_symmetric());
    }

    #[test]
    fn two_knot_ledger() {
        let trefoil = LaurentPoly::from_terms(alexander_twist().terms().map(|(e, c)| (e, c.specialize(1))));
        let l = knot_surgery_ledger(&[trefoil, alexander_twist()], &v_n_ambient(), &[1, 0]).unwrap();
        let expect: BTreeMap<_, _> =
            [(vec![3, 0], n(0, 1)), (vec![1, 0], n(1, -2)), (vec![-1, 0], n(-1, 2)), (vec![-3, 0], n(0, -1))].into();
        assert_eq!(l.entries, expect);
        assert_eq!(l.unverified, [vec![1, 0], vec![-1, 0]].into());
        assert!(l.is_conjugation_symmetric());
    }

    #[test]
    fn empty_product_gives_empty_ledger() {
        let l = knot_surgery_ledger(&[], &v_n_ambient(), &[1, 0]).unwrap();
        assert!(l.is_empty());
    }

    #[test]
    fn knot_surgery_preconditions() {
        let bad = LaurentPoly::monomial(0, LinExpr::constant(2));
        assert!(matches!(knot_surgery_ledger(&[bad], &v_n_ambient(), &[1, 0]), Err(LedgerError::NotNormalized(_))));
        let mut amb = v_n_ambient();
        amb.e = 24;
        assert!(matches!(knot_surgery_ledger(&[], &amb, &[1, 0]), Err(LedgerError::NotElliptic { .. })));
        // S is not characteristic: S·S = −1 but S·T = 1 would need T·T odd.
        assert!(matches!(
            knot_surgery_ledger(&[alexander_twist()], &v_n_ambient(), &[0, 1]),
            Err(LedgerError::NotCharacteristic(_))
        ));
    }

    #[test]
    fn dimensions_on_v_n() {
        let amb = v_n_ambient();
        assert!(dimension(&[1, 0], &amb).is_zero());
        assert!(dimension(&[3, 0], &amb).is_zero());
        let blown = blow_up_ledger(&Ledger::empty(amb), 1).unwrap();
        let zero = dimension(&[0, 0, 0], &blown.ambient);
        let e1 = dimension(&[0, 0, 1], &blown.ambient);
        assert!(!zero.is_integer());
        assert_eq!(&zero - &e1, BigRational::new(1.into(), 4.into()));
        assert!(!is_admissible_class(&[0, 0, 1], &blown.ambient));
        assert!(!is_admissible_class(&[0, 0, 0], &blown.ambient));
        assert!(is_admissible_class(&[1, 0, 1], &blown.ambient));
    }

    fn v_n_two_blowups() -> Ledger {
        let trefoil = LaurentPoly::from_terms(alexander_twist().terms().map(|(e, c)| (e, c.specialize(1))));
        let l = knot_surgery_ledger(&[trefoil, alexander_twist()], &v_n_ambient(), &[1, 0]).unwrap();
        blow_up_ledger(&l, 2).unwrap()
    }

    #[test]
    fn blow_up_spawns_sign_patterns() {
        let b = v_n_two_blowups();
        assert_eq!(b.len(), 16);
        assert_eq!(b.ambient.basis, ["T", "S", "E1", "E2"]);
        assert_eq!((b.ambient.e, b.ambient.sigma), (14, -10));
        assert_eq!(b.value(&[3, 0, -1, 1]), Some(LinExpr::N));
        assert!(b.is_conjugation_symmetric());
        for k in b.entries.keys() {
            assert!(b.dimension(k).unwrap().is_zero());
        }
        let empty = blow_up_ledger(&Ledger::empty(v_n_ambient()), 3).unwrap();
        assert!(empty.is_empty());
        assert!(matches!(blow_up_ledger(&empty, 0), Err(LedgerError::EmptyBlowUp)));
    }

    /// Σ = S − 2E₁ − 2E₂ followed by an A₅ string orthogonal to T, E₁, E₂;
    /// the string is modelled by extending the basis.
    fn q_n_setup() -> (Ledger, Chain, Vec<Vec<i64>>) {
        let b = v_n_two_blowups();
        let mut amb = b.ambient.clone();
        let names = ["r1", "r2", "r3", "r4", "r5"];
        for name in names {
            amb.push_exceptional(name);
        }
        for (i, name) in names.iter().enumerate() {
            amb.set_pairing(name, name, -2).unwrap();
            if i > 0 {
                amb.set_pairing(names[i - 1], name, 1).unwrap();
            }
        }
        amb.set_pairing("S", "r1", 1).unwrap();
        amb.e = b.ambient.e;
        amb.sigma = b.ambient.sigma;
        let mut l = Ledger::empty(amb);
        for (k, v) in &b.entries {
            l.entries.insert(pad_zero(k, 5), *v);
        }
        l.unverified = b.unverified.iter().map(|k| pad_zero(k, 5)).collect();
        let mut classes = vec![vec![0, 1, -2, -2, 0, 0, 0, 0, 0]];
        for i in 0..5 {
            let mut u = vec![0; 9];
            u[4 + i] = 1;
            classes.push(u);
        }
        let chain = chain_for_cpq(CpqParams::new(7, 1).unwrap()).unwrap();
        (l, chain, classes)
    }

    #[test]
    fn restriction_examples() {
        let (l, _, classes) = q_n_setup();
        let g = &l.ambient.gram;
        assert_eq!(restrict_to_chain(&[-3, 0, -1, -1, 0, 0, 0, 0, 0], &classes, g).0, vec![-7, 0, 0, 0, 0, 0]);
        assert_eq!(restrict_to_chain(&[1, 0, 1, 1, 0, 0, 0, 0, 0], &classes, g).0, vec![5, 0, 0, 0, 0, 0]);
        assert_eq!(restrict_to_chain(&[0; 9], &classes, g).0, vec![0; 6]);
    }

    #[test]
    fn q_n_filter_keeps_two_classes() {
        let (l, chain, classes) = q_n_setup();
        let q = rational_blowdown_ledger(&l, &chain, &classes, ZeroFlags::BOTH).unwrap();
        let expect: BTreeMap<_, _> =
            [(vec![3, 0, 1, 1, 0, 0, 0, 0, 0], LinExpr::N), (vec![-3, 0, -1, -1, 0, 0, 0, 0, 0], -LinExpr::N)].into();
        assert_eq!(q.entries, expect);
        assert_eq!((q.ambient.e, q.ambient.sigma), (8, -4));
        assert!(q.unverified.is_empty());
        for k in q.entries.keys() {
            assert!(q.dimension(k).unwrap().is_zero());
            assert_eq!(q.square(k).unwrap(), BigRational::from_integer(4.into()));
        }
        for m in 2..6 {
            assert!(minimality_report(&q, m).unwrap());
        }
        assert_eq!(profile(&q, 3).unwrap(), [-3, 3].into());
    }

    #[test]
    fn blowdown_requires_flags_and_cpq() {
        let (l, chain, classes) = q_n_setup();
        let half = ZeroFlags { model: true, rational_elliptic: false };
        assert!(matches!(rational_blowdown_ledger(&l, &chain, &classes, half), Err(LedgerError::MissingZeroFlags)));
        let bogus = Chain::new(vec![-3, -3]).unwrap();
        assert!(matches!(
            rational_blowdown_ledger(&l, &bogus, &classes[..2], ZeroFlags::BOTH),
            Err(LedgerError::NotCpq(_))
        ));
        assert!(matches!(
            rational_blowdown_ledger(&l, &chain, &classes[..3], ZeroFlags::BOTH),
            Err(LedgerError::ChainLength { .. })
        ));
        let chambered =
            rational_blowdown_ledger_with(Execution::Sequential, &l, &chain, &classes, Transfer::UpToCrossing, "Q")
                .unwrap();
        assert_eq!(chambered.crossings, 1);
        assert_eq!(chambered.ambient.label, "Q");
        assert!(rational_blowdown_ledger_with(
            Execution::Sequential,
            &chambered,
            &chain,
            &classes,
            Transfer::UpToCrossing,
            ""
        )
        .is_err());
    }

    #[test]
    fn canonical_restriction_survives_alone() {
        // Lattice spanned by the (−4)-sphere u of C_{2,1} and a (−1)-class x
        // with x·u = 1; K = −2x restricts to the canonical vector (−2).
        let chain = chain_for_cpq(CpqParams::new(2, 1).unwrap()).unwrap();
        let mut amb = Ambient::new("P", vec!["u".into(), "x".into()], 12, -8).unwrap();
        amb.gram = vec![vec![-4, 1], vec![1, -1]];
        let mut l = Ledger::empty(amb);
        let k = vec![0, -2];
        let classes = [vec![1, 0]];
        assert_eq!(restrict_to_chain(&k, &classes, &l.ambient.gram), canonical_vector(&chain));
        l.entries.insert(k.clone(), LinExpr::N);
        // d(K) = (−4 + 24 − 24)/4 = −1 is screened out.
        assert!(matches!(
            rational_blowdown_ledger(&l, &chain, &classes, ZeroFlags::BOTH),
            Err(LedgerError::BadDimension { .. })
        ));
        (l.ambient.e, l.ambient.sigma) = (2, -4);
        let out = rational_blowdown_ledger(&l, &chain, &classes, ZeroFlags::BOTH).unwrap();
        assert_eq!(out.entries.keys().collect::<Vec<_>>(), vec![&k]);
        let empty = Ledger::empty(l.ambient.clone());
        assert!(rational_blowdown_ledger(&empty, &chain, &classes, ZeroFlags::BOTH).unwrap().is_empty());
    }

    #[test]
    fn chamber_sets() {
        let s = chamber_value_set(LinExpr::N, 1).unwrap();
        assert_eq!(s, [n(0, 1), n(1, 1), n(-1, 1)].into_iter().collect());
        assert_eq!(chamber_value_set(LinExpr::N, 0).unwrap(), [LinExpr::N].into_iter().collect());
        assert!(chamber_value_set(LinExpr::N, 2).is_err());
        assert_eq!(s.to_string(), "{n-1, n, n+1}");
    }

    #[test]
    fn distinguishing_profiles() {
        let x2: BTreeSet<i64> = [-3, -2, -1, 1, 2, 3].into();
        let x5: BTreeSet<i64> = [-6, -5, -4, 4, 5, 6].into();
        assert!(distinguishable(&x2, &x5));
        assert!(!distinguishable(&x2, &x2));
        assert!(distinguishable(&[-3, 3].into(), &[-4, 4].into()));
    }

    #[test]
    fn minimality_negative_cases() {
        let amb = v_n_ambient();
        assert!(!minimality_report(&Ledger::empty(amb.clone()), 2).unwrap());
        let mut one = Ledger::empty(amb);
        one.entries.insert(vec![1, 0], LinExpr::N);
        let blown = blow_up_ledger(&one, 1).unwrap();
        assert_eq!(blown.len(), 2);
        assert!(!minimality_report(&blown, 2).unwrap());
        assert!(has_blow_up_pairing(&blown).unwrap());
        let sym = knot_surgery_ledger(&[alexander_twist()], &v_n_ambient(), &[1, 0]).unwrap();
        assert!(minimality_report(&sym, 2).unwrap());
        assert!(!has_blow_up_pairing(&sym).unwrap());
    }

    #[test]
    fn serialization_round_trip() {
        let b = v_n_two_blowups();
        let text = b.serialize();
        assert_eq!(text.lines().count(), 16);
        assert!(text.lines().next().unwrap().starts_with("(-3,0,-1,-1) = 0 + -1*n"));
        assert!(text.contains("(1,0,1,1) = 1 + -2*n [unverified]"));
        assert_eq!(Ledger::parse_entries(&text).unwrap(), b.entries);
    }
}
