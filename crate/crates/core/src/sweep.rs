//! Seeded randomized sweeps over `C_{p,q}` plumbings and twist-knot ledgers.

use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::hirzebruch::{canonical_vector, chain_for_cpq, discriminant, identify_cpq, inverse_form, CpqParams};
use crate::homcalc::Ambient;
use crate::par::Execution;
use crate::swledger::{alexander_twist, knot_surgery_ledger, LaurentPoly, LinExpr};

/// `count` distinct coprime pairs `1 ≤ q < p`, `2 ≤ p ≤ max_p`.
pub fn random_coprime_pairs(seed: u64, count: usize, max_p: u64) -> Vec<CpqParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<CpqParams> = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count && attempts < count * 1000 {
        attempts += 1;
        let p = rng.gen_range(2..=max_p.max(2));
        let q = rng.gen_range(1..p);
        if p.gcd(&q) != 1 {
            continue;
        }
        let c = CpqParams::new(p, q).expect("coprime with q < p");
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Round trip through the chain, `|det| = p²`, and the canonical vector
/// extending with `vᵀG⁻¹v = −k`.
pub fn check_cpq(params: CpqParams) -> Result<(), String> {
    let chain = chain_for_cpq(params).map_err(|e| format!("{params}: {e}"))?;
    if identify_cpq(&chain) != Some(params) {
        return Err(format!("{params}: {chain} does not identify back"));
    }
    let p2 = num_bigint::BigInt::from(params.p()).pow(2);
    if chain.determinant().abs() != p2 {
        return Err(format!("{params}: |det| = {} instead of p^2", chain.determinant().abs()));
    }
    let disc = discriminant(&chain).map_err(|e| format!("{params}: {e}"))?;
    let v = canonical_vector(&chain);
    if !disc.extends(&chain, &v).map_err(|e| format!("{params}: {e}"))? {
        return Err(format!("{params}: canonical vector does not extend"));
    }
    let q = inverse_form(&chain, &v).map_err(|e| format!("{params}: {e}"))?;
    let minus_k = BigRational::from_integer(num_bigint::BigInt::from(-(chain.len() as i64)));
    if q != minus_k {
        return Err(format!("{params}: v^T G^-1 v = {q}, expected {minus_k}"));
    }
    Ok(())
}

/// Ledgers of 1 to 4 twist knots with random fixed parameters (or the
/// symbolic one, at most once) must divide exactly and be symmetric.
pub fn check_random_knot_product(rng: &mut impl Rng) -> Result<(), String> {
    let factors = rng.gen_range(1..=4);
    let mut polys = Vec::with_capacity(factors);
    let mut symbolic = false;
    for _ in 0..factors {
        if !symbolic && rng.gen_bool(0.3) {
            symbolic = true;
            polys.push(alexander_twist());
        } else {
            let m = rng.gen_range(-6..=6);
            polys.push(LaurentPoly::from_terms(alexander_twist().terms().map(|(e, c)| (e, c.specialize(m)))));
        }
    }
    let mut base = Ambient::new("V", vec!["T".into(), "S".into()], 12, -8).map_err(|e| e.to_string())?;
    base.set_pairing("T", "S", 1).map_err(|e| e.to_string())?;
    base.set_pairing("S", "S", -1).map_err(|e| e.to_string())?;
    let l = knot_surgery_ledger(&polys, &base, &[1, 0]).map_err(|e| format!("{factors} factors: {e}"))?;
    if !l.is_conjugation_symmetric() {
        return Err(format!("{factors} factors: ledger not symmetric"));
    }
    if l.entries.values().any(|v| *v == LinExpr::ZERO) {
        return Err(format!("{factors} factors: zero value stored"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub pairs: usize,
    pub max_p: u64,
    pub knot_products: usize,
    pub failures: Vec<String>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(
            f,
            "property sweep seed={}: {} pairs with p <= {}, {} knot products: {verdict} ({} failures)",
            self.seed,
            self.pairs,
            self.max_p,
            self.knot_products,
            self.failures.len()
        )?;
        for e in &self.failures {
            writeln!(f, "  {e}")?;
        }
        Ok(())
    }
}

pub fn property_sweep(seed: u64, pairs: usize, max_p: u64, knot_products: usize, exec: Execution) -> SweepReport {
    let sample = random_coprime_pairs(seed, pairs, max_p);
    let mut failures: Vec<String> = exec.filter_map(&sample, |&c| check_cpq(c).err());
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for _ in 0..knot_products {
        if let Err(e) = check_random_knot_product(&mut rng) {
            failures.push(e);
        }
    }
    SweepReport { seed, pairs: sample.len(), max_p, knot_products, failures }
}
