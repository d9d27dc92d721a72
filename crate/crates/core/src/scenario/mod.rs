//! Line-oriented scenario files: an ambient declaration followed by steps
//! and assertions, evaluated in order.

pub mod corpus;
mod parse;
mod run;

use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::hirzebruch::{Chain, CpqParams, ValueVector};
use crate::mcg::{TwistFactorization, Word};
use crate::swledger::{LinExpr, ValueSet};

pub use parse::parse_scenario;
pub use run::{run_scenario, run_scenario_with_state, AssertionRecord, ChainRecord, Outcome, Report, StepRecord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}{}", token_suffix(.token))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub token: String,
    pub message: String,
}

fn token_suffix(token: &str) -> String {
    if token.is_empty() {
        String::new()
    } else {
        format!(" (at `{token}`)")
    }
}

/// Integer combination of names, e.g. `S+2F-2e1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClassExpr(pub Vec<(i64, String)>);

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, name)) in self.0.iter().enumerate() {
            let sign = if *k < 0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            let mag = k.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{mag}{name}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbientDecl {
    pub label: String,
    pub e: i64,
    pub sigma: i64,
    pub basis: Vec<String>,
    pub flags: Vec<String>,
}

/// Twist knot with parameter `n` (symbolic) or a fixed integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnotSpec(pub LinExpr);

impl fmt::Display for KnotSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K{}", self.0.pretty())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransferSpec {
    Vanishing(Vec<String>),
    Crossings(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Pair { a: String, b: String, value: i64 },
    Curve { name: String, class: ClassExpr, genus: u32, double_points: u32 },
    Blowup { name: String, at: Vec<(String, u32)>, double: Option<String> },
    Smooth { result: String, a: String, b: String },
    Surgery { label: String, knot: Option<String>, flags: Vec<String> },
    Chain { name: String, curves: Vec<String> },
    Blowdown { chain: String, label: String },
    Mcg { name: String, expect: u64, factorization: TwistFactorization },
    SwKnots { name: String, knots: Vec<KnotSpec>, fiber: ClassExpr },
    SwBlowup { name: String, source: String, exceptionals: Vec<String> },
    SwBlowdown { name: String, source: String, chain: String, transfer: TransferSpec, label: Option<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Assertion {
    Square { curve: String, expect: i64 },
    Pairing { a: String, b: String, expect: i64 },
    Genus { curve: String, expect: u32 },
    DoublePoints { curve: String, expect: u32 },
    ChainWeights { chain: String, expect: Chain },
    ChainIs { chain: String, expect: CpqParams },
    Euler(i64),
    Signature(i64),
    Label(String),
    Fingerprint(Option<String>),
    McgIdentity { name: String },
    McgTwists { name: String, expect: u64 },
    McgSameCycle { name: String, units: Vec<usize> },
    WordsEqual { lhs: Word, rhs: Word },
    SwCount { name: String, expect: usize },
    SwUnverified { name: String, expect: usize },
    SwValue { name: String, class: ClassExpr, expect: LinExpr },
    SwValueSet { name: String, class: ClassExpr, expect: ValueSet },
    SwSymmetric { name: String },
    SwWithin { name: String, envelope: ValueSet },
    SwMinimal { name: String, from: i64, to: i64 },
    SwDistinguishes { name: String, a: i64, b: i64 },
    SwDimension { name: String, class: ClassExpr, expect: BigRational },
    SwRestriction { name: String, class: ClassExpr, chain: String, expect: ValueVector },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Step(Step),
    Assert(Assertion),
}

/// A parsed scenario. Equality ignores source line numbers.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub ambient: AmbientDecl,
    pub items: Vec<Item>,
    /// Source line of each item.
    pub lines: Vec<usize>,
}

impl PartialEq for Scenario {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.ambient == other.ambient && self.items == other.items
    }
}

impl Eq for Scenario {}

impl Scenario {
    pub fn step_count(&self) -> usize {
        self.items.iter().filter(|i| matches!(i, Item::Step(_))).count()
    }

    pub fn assertion_count(&self) -> usize {
        self.items.len() - self.step_count()
    }
}

fn join(v: &[String], sep: &str) -> String {
    v.join(sep)
}

fn value_set_text(s: &ValueSet) -> String {
    let parts: Vec<String> = s.iter().map(|v| v.pretty()).collect();
    format!("{{{}}}", parts.join(", "))
}

impl fmt::Display for AmbientDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ambient {} e={} sigma={} basis={}", self.label, self.e, self.sigma, join(&self.basis, ","))?;
        if !self.flags.is_empty() {
            write!(f, " flags={}", join(&self.flags, ","))?;
        }
        Ok(())
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Pair { a, b, value } => write!(f, "pair {a} {b} {value}"),
            Step::Curve { name, class, genus, double_points } => {
                write!(f, "curve {name} {class}")?;
                if *genus != 0 {
                    write!(f, " genus={genus}")?;
                }
                if *double_points != 0 {
                    write!(f, " dp={double_points}")?;
                }
                Ok(())
            }
            Step::Blowup { name, at, double } => {
                write!(f, "blowup {name}")?;
                if !at.is_empty() {
                    f.write_str(" at")?;
                    for (c, m) in at {
                        if *m == 1 {
                            write!(f, " {c}")?;
                        } else {
                            write!(f, " {c}:{m}")?;
                        }
                    }
                }
                if let Some(d) = double {
                    write!(f, " double {d}")?;
                }
                Ok(())
            }
            Step::Smooth { result, a, b } => write!(f, "smooth {result} {a} {b}"),
            Step::Surgery { label, knot, flags } => {
                write!(f, "surgery {label}")?;
                if let Some(k) = knot {
                    write!(f, " knot={k}")?;
                }
                if !flags.is_empty() {
                    write!(f, " flags={}", join(flags, ","))?;
                }
                Ok(())
            }
            Step::Chain { name, curves } => write!(f, "chain {name} {}", join(curves, " ")),
            Step::Blowdown { chain, label } => write!(f, "blowdown {chain} {label}"),
            Step::Mcg { name, expect, factorization } => write!(f, "mcg {name} expect={expect} : {factorization}"),
            Step::SwKnots { name, knots, fiber } => {
                let ks: Vec<String> = knots.iter().map(|k| k.to_string()).collect();
                let ks = if ks.is_empty() { "none".to_string() } else { ks.join(" ") };
                write!(f, "sw {name} knots {ks} fiber={fiber}")
            }
            Step::SwBlowup { name, source, exceptionals } => {
                write!(f, "sw {name} blowup {source} {}", join(exceptionals, " "))
            }
            Step::SwBlowdown { name, source, chain, transfer, label } => {
                write!(f, "sw {name} blowdown {source} chain={chain}")?;
                match transfer {
                    TransferSpec::Vanishing(v) => write!(f, " vanishing={}", join(v, ","))?,
                    TransferSpec::Crossings(c) => write!(f, " crossings={c}")?,
                }
                if let Some(l) = label {
                    write!(f, " label={l}")?;
                }
                Ok(())
            }
        }
    }
}

/// Assertion text without the leading `assert`.
impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Square { curve, expect } => write!(f, "square {curve} = {expect}"),
            Assertion::Pairing { a, b, expect } => write!(f, "pairing {a} {b} = {expect}"),
            Assertion::Genus { curve, expect } => write!(f, "genus {curve} = {expect}"),
            Assertion::DoublePoints { curve, expect } => write!(f, "double-points {curve} = {expect}"),
            Assertion::ChainWeights { chain, expect } => write!(f, "chain {chain} = {expect}"),
            Assertion::ChainIs { chain, expect } => write!(f, "chain {chain} is {expect}"),
            Assertion::Euler(e) => write!(f, "e = {e}"),
            Assertion::Signature(s) => write!(f, "sigma = {s}"),
            Assertion::Label(l) => write!(f, "label = {l}"),
            Assertion::Fingerprint(Some(fp)) => write!(f, "fingerprint = \"{fp}\""),
            Assertion::Fingerprint(None) => write!(f, "fingerprint = none"),
            Assertion::McgIdentity { name } => write!(f, "mcg {name} identity"),
            Assertion::McgTwists { name, expect } => write!(f, "mcg {name} twists = {expect}"),
            Assertion::McgSameCycle { name, units } => {
                let u: Vec<String> = units.iter().map(usize::to_string).collect();
                write!(f, "mcg {name} same-cycle {}", u.join(" "))
            }
            Assertion::WordsEqual { lhs, rhs } => write!(f, "words \"{lhs}\" = \"{rhs}\""),
            Assertion::SwCount { name, expect } => write!(f, "sw {name} count = {expect}"),
            Assertion::SwUnverified { name, expect } => write!(f, "sw {name} unverified = {expect}"),
            Assertion::SwValue { name, class, expect } => write!(f, "sw {name} value {class} = {}", expect.pretty()),
            Assertion::SwValueSet { name, class, expect } => {
                write!(f, "sw {name} value-set {class} = {}", value_set_text(expect))
            }
            Assertion::SwSymmetric { name } => write!(f, "sw {name} symmetric"),
            Assertion::SwWithin { name, envelope } => write!(f, "sw {name} values-within {}", value_set_text(envelope)),
            Assertion::SwMinimal { name, from, to } if from == to => write!(f, "sw {name} minimal n={from}"),
            Assertion::SwMinimal { name, from, to } => write!(f, "sw {name} minimal n={from}..{to}"),
            Assertion::SwDistinguishes { name, a, b } => write!(f, "sw {name} distinguishes n={a} n={b}"),
            Assertion::SwDimension { name, class, expect } => write!(f, "sw {name} dimension {class} = {expect}"),
            Assertion::SwRestriction { name, class, chain, expect } => {
                write!(f, "sw {name} restriction {class} {chain} = {expect}")
            }
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Step(s) => s.fmt(f),
            Item::Assert(a) => write!(f, "assert {a}"),
        }
    }
}

/// Canonical text; parsing it yields an equal scenario.
impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {}", self.name)?;
        writeln!(f, "{}", self.ambient)?;
        for item in &self.items {
            writeln!(f, "{item}")?;
        }
        Ok(())
    }
}
