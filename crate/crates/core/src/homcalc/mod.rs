//! Homology-level curve configurations in a 4-manifold.
//!
//! The ambient lattice tracks only the classes a construction needs (fiber,
//! section, fiber components, exceptional spheres); `e` and `sigma` are kept
//! separately and updated by blow-ups and rational blow-downs. Intersections
//! between declared curves are assumed transverse and positive, so geometric
//! and algebraic counts agree.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hirzebruch::{chain_for_cpq, identify_cpq, Chain, CpqParams, HirzebruchError};

pub const SIMPLY_CONNECTED: &str = "simply-connected";
pub const ODD: &str = "odd";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomcalcError {
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("unknown generator or curve `{0}`")]
    UnknownName(String),
    #[error("name `{0}` is already in use")]
    DuplicateName(String),
    #[error("class of `{name}` has {found} coordinates, lattice rank is {expected}")]
    RankMismatch { name: String, expected: usize, found: usize },
    #[error("multiplicity {multiplicity} for `{curve}` must be at least 1")]
    InvalidMultiplicity { curve: String, multiplicity: u32 },
    #[error("curve `{curve}` listed twice in one blow-up")]
    RepeatedIncidence { curve: String },
    #[error("`{0}` has no double point left to blow up")]
    NoDoublePoint(String),
    #[error("blowing up a double point of `{curve}` needs multiplicity 2, got {multiplicity}")]
    DoublePointMultiplicity { curve: String, multiplicity: u32 },
    #[error("cannot smooth `{a}` and `{b}`: pairing is {pairing}")]
    Disjoint { a: String, b: String, pairing: i64 },
    #[error("cannot smooth `{0}` with itself")]
    SelfSmoothing(String),
    #[error("chain neighbours `{a}` and `{b}` pair to {pairing}, expected 1")]
    ChainAdjacency { a: String, b: String, pairing: i64 },
    #[error("non-adjacent chain members `{a}` and `{b}` pair to {pairing}, expected 0")]
    ChainCrossing { a: String, b: String, pairing: i64 },
    #[error("chain member `{curve}` has genus {genus}, expected a sphere")]
    ChainGenus { curve: String, genus: u32 },
    #[error("chain member `{curve}` still has {count} double point(s)")]
    ChainDoublePoints { curve: String, count: u32 },
    #[error("chain member `{curve}` has square {square}, expected <= -2")]
    ChainSquare { curve: String, square: i64 },
    #[error("chain {0} is not of the form C_{{p,q}}")]
    NotCpq(Chain),
    #[error(transparent)]
    Chain(#[from] HirzebruchError),
}

type Result<T> = std::result::Result<T, HomcalcError>;

/// The tracked lattice plus characteristic numbers of the manifold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ambient {
    pub label: String,
    pub basis: Vec<String>,
    pub gram: Vec<Vec<i64>>,
    pub e: i64,
    pub sigma: i64,
    pub flags: BTreeSet<String>,
}

impl Ambient {
    pub fn new(label: impl Into<String>, basis: Vec<String>, e: i64, sigma: i64) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for b in &basis {
            if !seen.insert(b) {
                return Err(HomcalcError::DuplicateName(b.clone()));
            }
        }
        let n = basis.len();
        Ok(Ambient { label: label.into(), basis, gram: vec![vec![0; n]; n], e, sigma, flags: BTreeSet::new() })
    }

    pub fn with_flags<I: IntoIterator<Item = S>, S: Into<String>>(mut self, flags: I) -> Self {
        self.flags.extend(flags.into_iter().map(Into::into));
        self
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == name)
    }

    pub fn unit(&self, name: &str) -> Option<Vec<i64>> {
        let i = self.index_of(name)?;
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        Some(v)
    }

    /// Sets a symmetric Gram entry.
    pub fn set_pairing(&mut self, a: &str, b: &str, value: i64) -> Result<()> {
        let i = self.index_of(a).ok_or_else(|| HomcalcError::UnknownName(a.to_string()))?;
        let j = self.index_of(b).ok_or_else(|| HomcalcError::UnknownName(b.to_string()))?;
        self.gram[i][j] = value;
        self.gram[j][i] = value;
        Ok(())
    }

    /// `xᵀ·G·y`
    pub fn form(&self, x: &[i64], y: &[i64]) -> i64 {
        x.iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(i, &a)| a * self.gram[i].iter().zip(y).map(|(g, b)| g * b).sum::<i64>())
            .sum()
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.contains(flag)
    }

    pub(crate) fn push_exceptional(&mut self, name: &str) {
        for row in self.gram.iter_mut() {
            row.push(0);
        }
        let mut row = vec![0; self.rank() + 1];
        row[self.rank()] = -1;
        self.gram.push(row);
        self.basis.push(name.to_string());
        self.e += 1;
        self.sigma -= 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    pub name: String,
    pub class: Vec<i64>,
    pub genus: u32,
    pub double_points: u32,
}

impl Curve {
    pub fn sphere(name: impl Into<String>, class: Vec<i64>) -> Self {
        Curve { name: name.into(), class, genus: 0, double_points: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveConfig {
    pub ambient: Ambient,
    pub curves: Vec<Curve>,
}

impl CurveConfig {
    pub fn new(ambient: Ambient) -> Self {
        CurveConfig { ambient, curves: Vec::new() }
    }

    pub fn curve(&self, name: &str) -> Result<&Curve> {
        self.curves.iter().find(|c| c.name == name).ok_or_else(|| HomcalcError::UnknownCurve(name.to_string()))
    }

    fn position(&self, name: &str) -> Result<usize> {
        self.curves.iter().position(|c| c.name == name).ok_or_else(|| HomcalcError::UnknownCurve(name.to_string()))
    }

    /// Adds a curve, replacing any existing curve of the same name in place.
    pub fn with_curve(&self, curve: Curve) -> Result<Self> {
        if curve.class.len() != self.ambient.rank() {
            return Err(HomcalcError::RankMismatch {
                name: curve.name,
                expected: self.ambient.rank(),
                found: curve.class.len(),
            });
        }
        let mut next = self.clone();
        match next.curves.iter_mut().find(|c| c.name == curve.name) {
            Some(slot) => *slot = curve,
            None => next.curves.push(curve),
        }
        Ok(next)
    }

    /// Class of a curve, or of a basis generator when no curve has that name.
    pub fn class_of(&self, name: &str) -> Result<Vec<i64>> {
        if let Ok(c) = self.curve(name) {
            return Ok(c.class.clone());
        }
        self.ambient.unit(name).ok_or_else(|| HomcalcError::UnknownName(name.to_string()))
    }

    /// Integer combination of curve/generator names.
    pub fn combine(&self, terms: &[(i64, String)]) -> Result<Vec<i64>> {
        let mut v = vec![0; self.ambient.rank()];
        for (k, name) in terms {
            for (acc, x) in v.iter_mut().zip(self.class_of(name)?) {
                *acc += k * x;
            }
        }
        Ok(v)
    }

    pub fn pairing(&self, a: &str, b: &str) -> Result<i64> {
        Ok(self.ambient.form(&self.curve(a)?.class, &self.curve(b)?.class))
    }

    pub fn square(&self, name: &str) -> Result<i64> {
        self.pairing(name, name)
    }

    /// Blows up one point. `at` lists the curves through the point with
    /// their multiplicities; `double_point_of` names a curve whose double
    /// point is the centre (implying multiplicity 2 on that curve). The new
    /// exceptional sphere becomes both a basis generator and a curve named
    /// `exceptional`.
    pub fn blow_up(&self, exceptional: &str, at: &[(String, u32)], double_point_of: Option<&str>) -> Result<Self> {
        if self.ambient.index_of(exceptional).is_some() || self.curve(exceptional).is_ok() {
            return Err(HomcalcError::DuplicateName(exceptional.to_string()));
        }
        let mut incidence: Vec<(usize, u32)> = Vec::new();
        for (name, m) in at {
            if *m == 0 {
                return Err(HomcalcError::InvalidMultiplicity { curve: name.clone(), multiplicity: *m });
            }
            let pos = self.position(name)?;
            if incidence.iter().any(|&(p, _)| p == pos) {
                return Err(HomcalcError::RepeatedIncidence { curve: name.clone() });
            }
            incidence.push((pos, *m));
        }
        let node = match double_point_of {
            Some(name) => {
                let pos = self.position(name)?;
                if self.curves[pos].double_points == 0 {
                    return Err(HomcalcError::NoDoublePoint(name.to_string()));
                }
                match incidence.iter().find(|&&(p, _)| p == pos) {
                    Some(&(_, 2)) => {}
                    Some(&(_, m)) => {
                        return Err(HomcalcError::DoublePointMultiplicity { curve: name.to_string(), multiplicity: m })
                    }
                    None => incidence.push((pos, 2)),
                }
                Some(pos)
            }
            None => None,
        };

        let mut next = self.clone();
        next.ambient.push_exceptional(exceptional);
        for (i, c) in next.curves.iter_mut().enumerate() {
            let m = incidence.iter().find(|&&(p, _)| p == i).map_or(0, |&(_, m)| m as i64);
            c.class.push(-m);
        }
        if let Some(pos) = node {
            next.curves[pos].double_points -= 1;
        }
        let unit = next.ambient.unit(exceptional).expect("just added");
        next.curves.push(Curve::sphere(exceptional, unit));
        Ok(next)
    }

    /// Resolves one transverse intersection point of `a` and `b`; the other
    /// intersection points become double points of the result, which takes
    /// the position of `a`.
    pub fn smooth(&self, result: &str, a: &str, b: &str) -> Result<Self> {
        if a == b {
            return Err(HomcalcError::SelfSmoothing(a.to_string()));
        }
        let pairing = self.pairing(a, b)?;
        if pairing < 1 {
            return Err(HomcalcError::Disjoint { a: a.to_string(), b: b.to_string(), pairing });
        }
        if result != a && result != b && self.curve(result).is_ok() {
            return Err(HomcalcError::DuplicateName(result.to_string()));
        }
        let (ca, cb) = (self.curve(a)?, self.curve(b)?);
        let merged = Curve {
            name: result.to_string(),
            class: ca.class.iter().zip(&cb.class).map(|(x, y)| x + y).collect(),
            genus: ca.genus + cb.genus,
            double_points: ca.double_points + cb.double_points + (pairing - 1) as u32,
        };
        let (pa, pb) = (self.position(a)?, self.position(b)?);
        let mut next = self.clone();
        next.curves[pa] = merged;
        next.curves.remove(pb);
        Ok(next)
    }

    /// Checks that the named curves form a linear plumbing of embedded
    /// spheres and returns its weights.
    pub fn extract_chain(&self, ordered: &[String]) -> Result<Chain> {
        let curves: Vec<&Curve> = ordered.iter().map(|n| self.curve(n)).collect::<Result<_>>()?;
        for c in &curves {
            if c.genus != 0 {
                return Err(HomcalcError::ChainGenus { curve: c.name.clone(), genus: c.genus });
            }
            if c.double_points != 0 {
                return Err(HomcalcError::ChainDoublePoints { curve: c.name.clone(), count: c.double_points });
            }
            let square = self.ambient.form(&c.class, &c.class);
            if square > -2 {
                return Err(HomcalcError::ChainSquare { curve: c.name.clone(), square });
            }
        }
        for i in 0..curves.len() {
            for j in i + 1..curves.len() {
                let pairing = self.ambient.form(&curves[i].class, &curves[j].class);
                let (a, b) = (curves[i].name.clone(), curves[j].name.clone());
                if j == i + 1 && pairing != 1 {
                    return Err(HomcalcError::ChainAdjacency { a, b, pairing });
                }
                if j > i + 1 && pairing != 0 {
                    return Err(HomcalcError::ChainCrossing { a, b, pairing });
                }
            }
        }
        Ok(Chain::new(curves.iter().map(|c| self.ambient.form(&c.class, &c.class)).collect())?)
    }

    /// Knot surgery leaves the tracked lattice, the curve data and the
    /// characteristic numbers untouched; only the label and the recorded
    /// assumptions change.
    pub fn knot_surgery_shadow(&self, label: &str, flags: &[String]) -> Self {
        let mut next = self.clone();
        if !label.is_empty() {
            next.ambient.label = label.to_string();
        }
        next.ambient.flags.extend(flags.iter().cloned());
        next
    }

    /// Replaces the named chain (which must be a `C_{p,q}`) by a rational
    /// ball. Curve data is dropped; only the characteristic numbers survive.
    pub fn rational_blowdown(&self, ordered: &[String], label: &str) -> Result<Blowdown> {
        let chain = self.extract_chain(ordered)?;
        let params = identify_cpq(&chain).ok_or_else(|| HomcalcError::NotCpq(chain.clone()))?;
        debug_assert_eq!(chain_for_cpq(params).ok().as_ref(), Some(&chain));
        let k = chain.len() as i64;
        let ambient = Ambient {
            label: if label.is_empty() { self.ambient.label.clone() } else { label.to_string() },
            basis: Vec::new(),
            gram: Vec::new(),
            e: self.ambient.e - k,
            sigma: self.ambient.sigma + k,
            flags: self.ambient.flags.clone(),
        };
        Ok(Blowdown { ambient, chain, params })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blowdown {
    pub ambient: Ambient,
    pub chain: Chain,
    pub params: CpqParams,
}

/// Freedman-type fingerprint for simply connected manifolds with odd form
/// and `b⁺ = 1`: `(e, σ) = (3+k, 1−k)` identifies `CP2 # k CP2bar`.
pub fn homeo_fingerprint(a: &Ambient) -> Option<String> {
    if !(a.has_flag(SIMPLY_CONNECTED) && a.has_flag(ODD)) {
        return None;
    }
    let k = a.e - 3;
    (k >= 0 && a.sigma == 1 - k).then(|| format!("CP2 # {k} CP2bar"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn at(v: &[(&str, u32)]) -> Vec<(String, u32)> {
        v.iter().map(|&(n, m)| (n.to_string(), m)).collect()
    }

    /// Fiber F, section S and two fishtail fibers.
    fn e1_model() -> CurveConfig {
        let mut amb = Ambient::new("E(1)", names(&["F", "S"]), 12, -8).unwrap().with_flags([SIMPLY_CONNECTED, ODD]);
        amb.set_pairing("S", "S", -1).unwrap();
        amb.set_pairing("F", "S", 1).unwrap();
        let cfg = CurveConfig::new(amb);
        let cfg = cfg.with_curve(Curve::sphere("S", vec![0, 1])).unwrap();
        let fishtail = |n: &str| Curve { name: n.to_string(), class: vec![1, 0], genus: 0, double_points: 1 };
        cfg.with_curve(fishtail("F1")).unwrap().with_curve(fishtail("F2")).unwrap()
    }

    #[test]
    fn fiber_section_pairing() {
        let cfg = e1_model();
        assert_eq!(cfg.pairing("S", "F1").unwrap(), 1);
        assert_eq!(cfg.square("F1").unwrap(), 0);
        assert_eq!(cfg.square("S").unwrap(), -1);
    }

    #[test]
    fn generic_blow_up() {
        let cfg = e1_model();
        let b = cfg.blow_up("e", &[], None).unwrap();
        assert_eq!((b.ambient.e, b.ambient.sigma), (13, -9));
        assert_eq!(b.pairing("S", "F1").unwrap(), 1);
        assert_eq!(b.square("e").unwrap(), -1);
        assert_eq!(b.pairing("e", "S").unwrap(), 0);
    }

    #[test]
    fn pseudo_section_pipeline_gives_minus_nine() {
        let cfg = e1_model();
        let cfg = cfg.with_curve(Curve { name: "S".into(), class: vec![0, 1], genus: 0, double_points: 1 }).unwrap();
        let cfg = cfg.blow_up("e1", &[], Some("S")).unwrap();
        assert_eq!(cfg.square("S").unwrap(), -5);
        assert_eq!(cfg.curve("S").unwrap().double_points, 0);
        let cfg = cfg.blow_up("e2", &[], Some("F1")).unwrap();
        let cfg = cfg.blow_up("e3", &at(&[("F2", 2)]), Some("F2")).unwrap();
        assert_eq!(cfg.square("F1").unwrap(), -4);
        let cfg = cfg.smooth("Sigma", "S", "F1").unwrap();
        assert_eq!(cfg.square("Sigma").unwrap(), -7);
        let cfg = cfg.smooth("Sigma", "Sigma", "F2").unwrap();
        assert_eq!(cfg.square("Sigma").unwrap(), -9);
        let sigma = cfg.curve("Sigma").unwrap();
        assert_eq!(sigma.class, vec![2, 1, -2, -2, -2]);
        assert_eq!(sigma.double_points, 0);
        assert!(cfg.curve("F1").is_err());
        assert!(cfg.curve("F2").is_err());
    }

    #[test]
    fn blow_up_errors() {
        let cfg = e1_model();
        assert!(matches!(cfg.blow_up("e", &[], Some("S")), Err(HomcalcError::NoDoublePoint(_))));
        assert!(matches!(cfg.blow_up("e", &at(&[("X", 1)]), None), Err(HomcalcError::UnknownCurve(_))));
        assert!(matches!(cfg.blow_up("e", &at(&[("S", 0)]), None), Err(HomcalcError::InvalidMultiplicity { .. })));
        assert!(matches!(
            cfg.blow_up("e", &at(&[("F1", 1)]), Some("F1")),
            Err(HomcalcError::DoublePointMultiplicity { .. })
        ));
        assert!(matches!(cfg.blow_up("S", &[], None), Err(HomcalcError::DuplicateName(_))));
        assert!(matches!(
            cfg.blow_up("e", &at(&[("S", 1), ("S", 1)]), None),
            Err(HomcalcError::RepeatedIncidence { .. })
        ));
    }

    #[test]
    fn smoothing_disjoint_curves_fails() {
        let cfg = e1_model();
        assert!(matches!(cfg.smooth("X", "F1", "F2"), Err(HomcalcError::Disjoint { pairing: 0, .. })));
        assert!(matches!(cfg.smooth("X", "F1", "F1"), Err(HomcalcError::SelfSmoothing(_))));
    }

    #[test]
    fn smoothing_records_extra_points_as_double_points() {
        let cfg = e1_model();
        // 2S + F: S·(S+F) ... build two curves meeting twice
        let cfg = cfg.with_curve(Curve::sphere("A", vec![2, 1])).unwrap();
        assert_eq!(cfg.pairing("A", "F1").unwrap(), 1);
        let cfg = cfg.with_curve(Curve::sphere("B", vec![0, 2])).unwrap();
        assert_eq!(cfg.pairing("A", "B").unwrap(), 2);
        let s = cfg.smooth("AB", "A", "B").unwrap();
        assert_eq!(s.curve("AB").unwrap().double_points, 1);
        let sq_a = cfg.square("A").unwrap();
        let sq_b = cfg.square("B").unwrap();
        assert_eq!(s.square("AB").unwrap(), sq_a + sq_b + 2 * 2);
    }

    #[test]
    fn chain_extraction_checks() {
        let cfg = e1_model();
        let cfg = cfg.with_curve(Curve { name: "S".into(), class: vec![0, 1], genus: 0, double_points: 1 }).unwrap();
        let cfg = cfg.blow_up("e1", &[], Some("S")).unwrap();
        let chain = cfg.extract_chain(&names(&["S"])).unwrap();
        assert_eq!(chain.weights(), &[-5]);
        assert!(matches!(cfg.extract_chain(&names(&["e1"])), Err(HomcalcError::ChainSquare { square: -1, .. })));
        assert!(matches!(cfg.extract_chain(&names(&["F1"])), Err(HomcalcError::ChainDoublePoints { .. })));
        let cfg = cfg.blow_up("e2", &[], Some("F1")).unwrap();
        assert_eq!(cfg.extract_chain(&names(&["S", "F1"])).unwrap().weights(), &[-5, -4]);
        let cfg = cfg.blow_up("e3", &[], Some("F2")).unwrap();
        assert!(matches!(
            cfg.extract_chain(&names(&["F1", "F2"])),
            Err(HomcalcError::ChainAdjacency { pairing: 0, .. })
        ));
        assert!(cfg.extract_chain(&names(&["F1", "S", "F2"])).is_ok());
        let g = Curve { name: "T".into(), class: vec![0, 0, -1, -1, -1], genus: 1, double_points: 0 };
        let cfg = cfg.with_curve(g).unwrap();
        assert!(matches!(cfg.extract_chain(&names(&["T"])), Err(HomcalcError::ChainGenus { .. })));
    }

    #[test]
    fn knot_surgery_relabels_only() {
        let cfg = e1_model();
        let y = cfg.knot_surgery_shadow("Y_n", &[]);
        assert_eq!(y.ambient.label, "Y_n");
        assert_eq!((y.ambient.e, y.ambient.sigma), (12, -8));
        assert_eq!(y.curves, cfg.curves);
        let v = y.knot_surgery_shadow("V_n", &names(&["has-section"]));
        assert_eq!(v.ambient.label, "V_n");
        assert!(v.ambient.has_flag("has-section"));
        assert_eq!(cfg.knot_surgery_shadow("", &[]), cfg);
    }

    #[test]
    fn single_minus_four_blowdown() {
        let cfg = e1_model();
        let cfg = cfg.with_curve(Curve { name: "S".into(), class: vec![0, 1], genus: 0, double_points: 0 }).unwrap();
        let cfg = cfg.blow_up("e1", &[], Some("F1")).unwrap();
        let bd = cfg.rational_blowdown(&names(&["F1"]), "Z").unwrap();
        assert_eq!(bd.params, CpqParams::new(2, 1).unwrap());
        assert_eq!((bd.ambient.e, bd.ambient.sigma), (12, -8));
        assert_eq!(bd.ambient.label, "Z");
        let cfg = cfg.blow_up("e2", &[], Some("F2")).unwrap();
        let cfg = cfg.blow_up("e3", &at(&[("F2", 1)]), None).unwrap();
        assert!(matches!(cfg.rational_blowdown(&names(&["F2"]), "Z"), Err(HomcalcError::NotCpq(_))));
    }

    #[test]
    fn fingerprints() {
        let mk =
            |e, sigma, flags: &[&str]| Ambient::new("M", vec![], e, sigma).unwrap().with_flags(flags.iter().copied());
        let both = [SIMPLY_CONNECTED, ODD];
        assert_eq!(homeo_fingerprint(&mk(8, -4, &both)).as_deref(), Some("CP2 # 5 CP2bar"));
        assert_eq!(homeo_fingerprint(&mk(12, -8, &both)).as_deref(), Some("CP2 # 9 CP2bar"));
        assert_eq!(homeo_fingerprint(&mk(4, 0, &both)).as_deref(), Some("CP2 # 1 CP2bar"));
        assert_eq!(homeo_fingerprint(&mk(5, 0, &both)), None);
        assert_eq!(homeo_fingerprint(&mk(2, 2, &both)), None);
        assert_eq!(homeo_fingerprint(&mk(8, -4, &[ODD])), None);
    }
}
