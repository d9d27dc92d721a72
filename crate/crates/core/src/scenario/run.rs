use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::{Assertion, ClassExpr, Item, Scenario, Step, TransferSpec};
use crate::hirzebruch::{identify_cpq, Chain};
use crate::homcalc::{homeo_fingerprint, Ambient, Curve, CurveConfig};
use crate::mcg::{verify_fibration, words_equal_in_group, FibrationReport, TwistFactorization};
use crate::par::Execution;
use crate::swledger::{
    alexander_twist, blow_up_ledger_named, chamber_value_set, distinguishable, knot_surgery_ledger, minimality_report,
    profile, rational_blowdown_ledger_with, restrict_to_chain, LaurentPoly, Ledger, Transfer, ZeroFlags,
};

/// Ledgers at or below this size are listed in full in the step log.
const LISTED_ENTRIES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub line: usize,
    pub directive: String,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssertionRecord {
    pub line: usize,
    pub description: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub steps: Vec<StepRecord>,
    pub assertions: Vec<AssertionRecord>,
    /// A step that could not be carried out; later items are skipped.
    pub error: Option<String>,
    pub skipped: usize,
    pub passed: usize,
    pub failed: usize,
}

impl Report {
    /// A report for input that never got as far as running.
    pub fn failure(scenario: impl Into<String>, error: impl Into<String>) -> Self {
        Report {
            scenario: scenario.into(),
            steps: Vec::new(),
            assertions: Vec::new(),
            error: Some(error.into()),
            skipped: 0,
            passed: 0,
            failed: 0,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.error.is_none()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {}", self.scenario)?;
        let mut steps = self.steps.iter().peekable();
        let mut asserts = self.assertions.iter().peekable();
        loop {
            let take_step = match (steps.peek(), asserts.peek()) {
                (Some(s), Some(a)) => s.line < a.line,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            if take_step {
                let s = steps.next().expect("peeked");
                writeln!(f, "  step {:>3}  {}", s.line, s.directive)?;
                for n in &s.notes {
                    writeln!(f, "            {n}")?;
                }
            } else {
                let a = asserts.next().expect("peeked");
                let tag = if a.passed { "PASS" } else { "FAIL" };
                writeln!(
                    f,
                    "  [{tag}] {:>3}  {}: expected {}, actual {}",
                    a.line, a.description, a.expected, a.actual
                )?;
            }
        }
        if let Some(e) = &self.error {
            writeln!(f, "  error: {e}")?;
        }
        if self.skipped > 0 {
            writeln!(f, "  skipped: {} items after the error", self.skipped)?;
        }
        let verdict = if self.all_passed() { "PASS" } else { "FAIL" };
        writeln!(f, "  result: {verdict} ({} passed, {} failed)", self.passed, self.failed)
    }
}

/// A chain as extracted: its curve classes over the basis current at the
/// time, kept so later ledger steps can restrict to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainRecord {
    pub curves: Vec<String>,
    pub chain: Chain,
    pub basis: Vec<String>,
    pub classes: Vec<Vec<i64>>,
}

/// Final state of a run, for callers that want more than the report.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub config: CurveConfig,
    pub chains: BTreeMap<String, ChainRecord>,
    pub fibrations: BTreeMap<String, (TwistFactorization, FibrationReport)>,
    pub ledgers: BTreeMap<String, Ledger>,
}

pub fn run_scenario(s: &Scenario) -> Report {
    run_scenario_with_state(s, Execution::default()).0
}

pub fn run_scenario_with_state(s: &Scenario, exec: Execution) -> (Report, Outcome) {
    let mut report = Report::failure(s.name.clone(), String::new());
    report.error = None;
    let ambient = match Ambient::new(s.ambient.label.clone(), s.ambient.basis.clone(), s.ambient.e, s.ambient.sigma) {
        Ok(a) => a.with_flags(s.ambient.flags.iter().cloned()),
        Err(e) => {
            report.error = Some(format!("ambient: {e}"));
            let outcome = Outcome {
                config: CurveConfig::new(Ambient::new("", Vec::new(), 0, 0).expect("empty ambient")),
                chains: BTreeMap::new(),
                fibrations: BTreeMap::new(),
                ledgers: BTreeMap::new(),
            };
            return (report, outcome);
        }
    };
    let mut st = Outcome {
        config: CurveConfig::new(ambient),
        chains: BTreeMap::new(),
        fibrations: BTreeMap::new(),
        ledgers: BTreeMap::new(),
    };
    for (idx, (item, &line)) in s.items.iter().zip(&s.lines).enumerate() {
        match item {
            Item::Step(step) => match apply_step(&mut st, step, exec) {
                Ok(notes) => report.steps.push(StepRecord { line, directive: step.to_string(), notes }),
                Err(e) => {
                    report.error = Some(format!("line {line}: `{step}` failed: {e}"));
                    report.skipped = s.items.len() - idx - 1;
                    break;
                }
            },
            Item::Assert(a) => {
                let (expected, actual, passed) = check(&st, a);
                if passed {
                    report.passed += 1;
                } else {
                    report.failed += 1;
                }
                report.assertions.push(AssertionRecord { line, description: a.to_string(), expected, actual, passed });
            }
        }
    }
    (report, st)
}

type StepResult<T> = Result<T, String>;

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ledger<'a>(st: &'a Outcome, name: &str) -> StepResult<&'a Ledger> {
    st.ledgers.get(name).ok_or_else(|| format!("unknown ledger `{name}`"))
}

fn chain_record<'a>(st: &'a Outcome, name: &str) -> StepResult<&'a ChainRecord> {
    st.chains.get(name).ok_or_else(|| format!("unknown chain `{name}`"))
}

fn fibration<'a>(st: &'a Outcome, name: &str) -> StepResult<&'a (TwistFactorization, FibrationReport)> {
    st.fibrations.get(name).ok_or_else(|| format!("unknown factorization `{name}`"))
}

fn config_class(cfg: &CurveConfig, expr: &ClassExpr) -> StepResult<Vec<i64>> {
    cfg.combine(&expr.0).map_err(err)
}

/// Class over the ledger's own basis; curve names are not visible here.
fn ledger_class(l: &Ledger, expr: &ClassExpr) -> StepResult<Vec<i64>> {
    let mut v = vec![0; l.ambient.rank()];
    for (k, name) in &expr.0 {
        let i = l.ambient.index_of(name).ok_or_else(|| format!("ledger does not track `{name}`"))?;
        v[i] += k;
    }
    Ok(v)
}

/// Re-expresses chain curve classes over the ledger basis by name.
fn align(record: &ChainRecord, l: &Ledger) -> StepResult<Vec<Vec<i64>>> {
    record
        .classes
        .iter()
        .zip(&record.curves)
        .map(|(class, curve)| {
            let mut v = vec![0; l.ambient.rank()];
            for (k, name) in class.iter().zip(&record.basis).filter(|(k, _)| **k != 0) {
                let i = l.ambient.index_of(name).ok_or_else(|| {
                    format!("chain curve `{curve}` involves `{name}`, which the ledger does not track")
                })?;
                v[i] = *k;
            }
            Ok(v)
        })
        .collect()
}

fn class_text(basis: &[String], v: &[i64]) -> String {
    let terms: Vec<(i64, String)> =
        v.iter().zip(basis).filter(|(k, _)| **k != 0).map(|(k, b)| (*k, b.clone())).collect();
    ClassExpr(terms).to_string()
}

/// Generators that are orthogonal to everything else and square to −1.
fn exceptional_generators(a: &Ambient) -> BTreeSet<usize> {
    (0..a.rank())
        .filter(|&i| a.gram[i][i] == -1 && a.gram[i].iter().enumerate().all(|(j, &g)| j == i || g == 0))
        .collect()
}

fn ledger_notes(l: &Ledger) -> Vec<String> {
    let mut notes = vec![format!(
        "{}: {} entries, (e, sigma) = ({}, {}), crossings {}",
        l.ambient.label,
        l.len(),
        l.ambient.e,
        l.ambient.sigma,
        l.crossings
    )];
    if l.len() <= LISTED_ENTRIES {
        let exc = exceptional_generators(&l.ambient);
        for (k, v) in &l.entries {
            let mut line = format!("{} = {}", class_text(&l.ambient.basis, k), v.pretty());
            if !exc.is_empty() && k.iter().enumerate().any(|(i, x)| *x != 0 && exc.contains(&i)) {
                let flipped: Vec<i64> =
                    k.iter().enumerate().map(|(i, x)| if exc.contains(&i) { -x } else { *x }).collect();
                line.push_str(&format!("  (exceptional signs flipped: {})", class_text(&l.ambient.basis, &flipped)));
            }
            if l.unverified.contains(k) {
                line.push_str("  [unverified]");
            }
            notes.push(line);
        }
    }
    notes
}

fn twist_poly(k: &super::KnotSpec) -> LaurentPoly {
    let p = alexander_twist();
    if k.0.is_constant() {
        LaurentPoly::from_terms(p.terms().map(|(e, c)| (e, c.specialize(k.0.c0))))
    } else {
        p
    }
}

fn apply_step(st: &mut Outcome, step: &Step, exec: Execution) -> StepResult<Vec<String>> {
    let cfg = &st.config;
    let square_note = |cfg: &CurveConfig, name: &str| -> StepResult<String> {
        Ok(format!("{name}: square {}", cfg.square(name).map_err(err)?))
    };
    let notes = match step {
        Step::Pair { a, b, value } => {
            let mut next = cfg.clone();
            next.ambient.set_pairing(a, b, *value).map_err(err)?;
            st.config = next;
            Vec::new()
        }
        Step::Curve { name, class, genus, double_points } => {
            let class = config_class(cfg, class)?;
            let curve = Curve { name: name.clone(), class, genus: *genus, double_points: *double_points };
            st.config = cfg.with_curve(curve).map_err(err)?;
            vec![square_note(&st.config, name)?]
        }
        Step::Blowup { name, at, double } => {
            let next = cfg.blow_up(name, at, double.as_deref()).map_err(err)?;
            let mut touched: Vec<&str> = at.iter().map(|(c, _)| c.as_str()).collect();
            if let Some(d) = double {
                if !touched.contains(&d.as_str()) {
                    touched.push(d);
                }
            }
            let notes = touched.iter().map(|c| square_note(&next, c)).collect::<StepResult<Vec<_>>>()?;
            st.config = next;
            notes
        }
        Step::Smooth { result, a, b } => {
            st.config = cfg.smooth(result, a, b).map_err(err)?;
            let c = st.config.curve(result).map_err(err)?;
            vec![format!("{}, double points {}", square_note(&st.config, result)?, c.double_points)]
        }
        Step::Surgery { label, flags, .. } => {
            st.config = cfg.knot_surgery_shadow(label, flags);
            let a = &st.config.ambient;
            vec![format!("{}: (e, sigma) = ({}, {})", a.label, a.e, a.sigma)]
        }
        Step::Chain { name, curves } => {
            let chain = cfg.extract_chain(curves).map_err(err)?;
            let classes =
                curves.iter().map(|c| cfg.curve(c).map(|c| c.class.clone())).collect::<Result<_, _>>().map_err(err)?;
            let id = identify_cpq(&chain).map_or_else(|| "not a C_{p,q}".to_string(), |p| p.to_string());
            let note = format!("{chain} = {id}");
            let record = ChainRecord { curves: curves.clone(), chain, basis: cfg.ambient.basis.clone(), classes };
            st.chains.insert(name.clone(), record);
            vec![note]
        }
        Step::Blowdown { chain, label } => {
            let record = chain_record(st, chain)?;
            let bd = cfg.rational_blowdown(&record.curves, label).map_err(err)?;
            let note = format!(
                "{}: removed {}, (e, sigma) = ({}, {})",
                bd.ambient.label, bd.params, bd.ambient.e, bd.ambient.sigma
            );
            st.config = CurveConfig::new(bd.ambient);
            vec![note]
        }
        Step::Mcg { name, expect, factorization } => {
            let r = verify_fibration(factorization, *expect);
            let note = format!(
                "monodromy {} ({}), {} twists",
                r.monodromy,
                if r.is_identity { "identity" } else { "not identity" },
                r.twist_count
            );
            st.fibrations.insert(name.clone(), (factorization.clone(), r));
            vec![note]
        }
        Step::SwKnots { name, knots, fiber } => {
            let fiber = config_class(cfg, fiber)?;
            let polys: Vec<LaurentPoly> = knots.iter().map(twist_poly).collect();
            let l = knot_surgery_ledger(&polys, &cfg.ambient, &fiber).map_err(err)?;
            let notes = ledger_notes(&l);
            st.ledgers.insert(name.clone(), l);
            notes
        }
        Step::SwBlowup { name, source, exceptionals } => {
            let l = blow_up_ledger_named(ledger(st, source)?, exceptionals).map_err(err)?;
            let notes = ledger_notes(&l);
            st.ledgers.insert(name.clone(), l);
            notes
        }
        Step::SwBlowdown { name, source, chain, transfer, label } => {
            let src = ledger(st, source)?;
            let record = chain_record(st, chain)?;
            let classes = align(record, src)?;
            let transfer = match transfer {
                TransferSpec::Crossings(0) => Transfer::Exact(ZeroFlags::BOTH),
                TransferSpec::Crossings(1) => Transfer::UpToCrossing,
                TransferSpec::Crossings(c) => return Err(format!("at most one wall crossing is supported, got {c}")),
                TransferSpec::Vanishing(flags) => {
                    let mut z = ZeroFlags::default();
                    for f in flags {
                        match f.as_str() {
                            "model" => z.model = true,
                            "rational-elliptic" => z.rational_elliptic = true,
                            other => return Err(format!("unknown vanishing flag `{other}`")),
                        }
                    }
                    Transfer::Exact(z)
                }
            };
            let l = rational_blowdown_ledger_with(
                exec,
                src,
                &record.chain,
                &classes,
                transfer,
                label.as_deref().unwrap_or(""),
            )
            .map_err(err)?;
            let notes = ledger_notes(&l);
            st.ledgers.insert(name.clone(), l);
            notes
        }
    };
    Ok(notes)
}

fn outcome(expected: impl fmt::Display, actual: StepResult<String>) -> (String, String, bool) {
    let expected = expected.to_string();
    match actual {
        Ok(a) => {
            let pass = a == expected;
            (expected, a, pass)
        }
        Err(e) => (expected, format!("error: {e}"), false),
    }
}

fn yes_no(expected: &str, actual: StepResult<(bool, String)>) -> (String, String, bool) {
    match actual {
        Ok((pass, detail)) => (expected.to_string(), detail, pass),
        Err(e) => (expected.to_string(), format!("error: {e}"), false),
    }
}

fn set_text(s: &BTreeSet<i64>) -> String {
    let parts: Vec<String> = s.iter().map(i64::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

fn check(st: &Outcome, a: &Assertion) -> (String, String, bool) {
    let cfg = &st.config;
    match a {
        Assertion::Square { curve, expect } => outcome(expect, cfg.square(curve).map(|x| x.to_string()).map_err(err)),
        Assertion::Pairing { a, b, expect } => outcome(expect, cfg.pairing(a, b).map(|x| x.to_string()).map_err(err)),
        Assertion::Genus { curve, expect } => {
            outcome(expect, cfg.curve(curve).map(|c| c.genus.to_string()).map_err(err))
        }
        Assertion::DoublePoints { curve, expect } => {
            outcome(expect, cfg.curve(curve).map(|c| c.double_points.to_string()).map_err(err))
        }
        Assertion::ChainWeights { chain, expect } => {
            outcome(expect, chain_record(st, chain).map(|r| r.chain.to_string()))
        }
        Assertion::ChainIs { chain, expect } => outcome(
            expect,
            chain_record(st, chain)
                .map(|r| identify_cpq(&r.chain).map_or_else(|| "not a C_{p,q}".into(), |p| p.to_string())),
        ),
        Assertion::Euler(e) => outcome(e, Ok(cfg.ambient.e.to_string())),
        Assertion::Signature(s) => outcome(s, Ok(cfg.ambient.sigma.to_string())),
        Assertion::Label(l) => outcome(l, Ok(cfg.ambient.label.clone())),
        Assertion::Fingerprint(fp) => {
            let show = |f: &Option<String>| f.clone().unwrap_or_else(|| "none".into());
            outcome(show(fp), Ok(show(&homeo_fingerprint(&cfg.ambient))))
        }
        Assertion::McgIdentity { name } => outcome(
            "identity",
            fibration(st, name).map(|(_, r)| if r.is_identity { "identity".into() } else { r.monodromy.to_string() }),
        ),
        Assertion::McgTwists { name, expect } => {
            outcome(expect, fibration(st, name).map(|(_, r)| r.twist_count.to_string()))
        }
        Assertion::McgSameCycle { name, units } => yes_no(
            "one vanishing cycle",
            fibration(st, name).and_then(|(f, _)| {
                let cycles = units
                    .iter()
                    .map(|&u| f.unit_cycle(u).ok_or_else(|| format!("no twist number {u}")))
                    .collect::<StepResult<Vec<_>>>()?;
                let distinct: BTreeSet<_> = cycles.iter().collect();
                let text: Vec<String> = distinct.iter().map(|c| c.to_string()).collect();
                let one = distinct.len() == 1;
                let detail = if one { "one vanishing cycle" } else { "distinct cycles" };
                Ok((one, format!("{detail} {}", text.join(" "))))
            }),
        ),
        Assertion::WordsEqual { lhs, rhs } => {
            let eq = words_equal_in_group(lhs, rhs);
            outcome("equal", Ok(if eq { "equal" } else { "different" }.to_string()))
        }
        Assertion::SwCount { name, expect } => outcome(expect, ledger(st, name).map(|l| l.len().to_string())),
        Assertion::SwUnverified { name, expect } => {
            outcome(expect, ledger(st, name).map(|l| l.unverified.len().to_string()))
        }
        Assertion::SwValue { name, class, expect } => outcome(
            expect.pretty(),
            ledger(st, name)
                .and_then(|l| Ok(l.value(&ledger_class(l, class)?).map_or_else(|| "absent".into(), |v| v.pretty()))),
        ),
        Assertion::SwValueSet { name, class, expect } => outcome(
            expect,
            ledger(st, name).and_then(|l| {
                Ok(l.value_set(&ledger_class(l, class)?).map_or_else(|| "absent".into(), |v| v.to_string()))
            }),
        ),
        Assertion::SwSymmetric { name } => yes_no(
            "symmetric",
            ledger(st, name).map(|l| {
                let ok = l.is_conjugation_symmetric();
                (ok, if ok { "symmetric" } else { "not symmetric" }.to_string())
            }),
        ),
        Assertion::SwWithin { name, envelope } => yes_no(
            &format!("within {envelope}"),
            ledger(st, name).and_then(|l| {
                let mut all = BTreeSet::new();
                for &v in l.entries.values() {
                    all.extend(chamber_value_set(v, l.crossings).map_err(err)?.0);
                }
                let all: crate::swledger::ValueSet = all.into_iter().collect();
                Ok((all.is_subset(envelope), format!("values {all}")))
            }),
        ),
        Assertion::SwMinimal { name, from, to } => yes_no(
            "minimal",
            ledger(st, name).and_then(|l| {
                for n in *from..=*to {
                    if !minimality_report(l, n).map_err(err)? {
                        return Ok((false, format!("not established at n={n}")));
                    }
                }
                Ok((true, "minimal".into()))
            }),
        ),
        Assertion::SwDistinguishes { name, a, b } => yes_no(
            "disjoint profiles",
            ledger(st, name).and_then(|l| {
                let pa = profile(l, *a).map_err(err)?;
                let pb = profile(l, *b).map_err(err)?;
                let ok = distinguishable(&pa, &pb);
                let verdict = if ok { "disjoint profiles" } else { "overlapping profiles" };
                Ok((ok, format!("{verdict} {} / {}", set_text(&pa), set_text(&pb))))
            }),
        ),
        Assertion::SwDimension { name, class, expect } => outcome(
            expect,
            ledger(st, name).and_then(|l| l.dimension(&ledger_class(l, class)?).map(|d| d.to_string()).map_err(err)),
        ),
        Assertion::SwRestriction { name, class, chain, expect } => outcome(
            expect,
            ledger(st, name).and_then(|l| {
                let record = chain_record(st, chain)?;
                let classes = align(record, l)?;
                Ok(restrict_to_chain(&ledger_class(l, class)?, &classes, &l.ambient.gram).to_string())
            }),
        ),
    }
}
