use num_rational::BigRational;

use super::{AmbientDecl, Assertion, ClassExpr, Item, KnotSpec, ParseError, Scenario, Step, TransferSpec};
use crate::hirzebruch::{Chain, CpqParams, ValueVector};
use crate::mcg::{TwistFactorization, Word};
use crate::swledger::{LinExpr, ValueSet};

#[derive(Debug, Clone)]
struct Token {
    text: String,
    column: usize,
}

/// Splits a line into whitespace-separated tokens. Brackets `(..)`/`{..}`
/// and double quotes group across spaces; `#` at the start of a token opens
/// a comment. Quotes are stripped from fully quoted tokens.
fn tokenize(line_no: usize, line: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = line.chars().enumerate().collect();
    let mut i = 0;
    while i < chars.len() {
        let (col, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        let start = col + 1;
        let mut text = String::new();
        let mut depth: Vec<char> = Vec::new();
        let mut quoted = false;
        while i < chars.len() {
            let (_, c) = chars[i];
            if !quoted && depth.is_empty() && c.is_whitespace() {
                break;
            }
            match c {
                '"' => quoted = !quoted,
                '(' | '{' if !quoted => depth.push(if c == '(' { ')' } else { '}' }),
                ')' | '}' if !quoted && depth.pop() != Some(c) => {
                    return Err(ParseError {
                        line: line_no,
                        column: chars[i].0 + 1,
                        token: c.to_string(),
                        message: "unbalanced bracket".into(),
                    });
                }
                _ => {}
            }
            text.push(c);
            i += 1;
        }
        if quoted || !depth.is_empty() {
            let what = if quoted { "unterminated string" } else { "unclosed bracket" };
            return Err(ParseError { line: line_no, column: start, token: text, message: what.into() });
        }
        if text.len() >= 2 && text.starts_with('"') && text.ends_with('"') {
            text = text[1..text.len() - 1].to_string();
        }
        out.push(Token { text, column: start });
    }
    Ok(out)
}

struct Cursor<'a> {
    line: usize,
    toks: &'a [Token],
    pos: usize,
    /// Column just past the end of the line, for errors about missing input.
    eol: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, tok: Option<&Token>, message: impl Into<String>) -> ParseError {
        match tok {
            Some(t) => ParseError { line: self.line, column: t.column, token: t.text.clone(), message: message.into() },
            None => ParseError { line: self.line, column: self.eol, token: String::new(), message: message.into() },
        }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self, what: &str) -> Result<&'a Token, ParseError> {
        let t = self.toks.get(self.pos).ok_or_else(|| self.err(None, format!("expected {what}")))?;
        self.pos += 1;
        Ok(t)
    }

    fn name(&mut self, what: &str) -> Result<String, ParseError> {
        let t = self.next(what)?;
        if !is_name(&t.text) {
            return Err(self.err(Some(t), format!("expected {what}")));
        }
        Ok(t.text.clone())
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let t = self.next(&format!("`{kw}`"))?;
        if t.text != kw {
            return Err(self.err(Some(t), format!("expected `{kw}`")));
        }
        Ok(())
    }

    fn int<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, ParseError> {
        let t = self.next(what)?;
        t.text.parse().map_err(|_| self.err(Some(t), format!("expected {what}")))
    }

    fn parse_with<T>(&mut self, what: &str, f: impl FnOnce(&str) -> Option<T>) -> Result<T, ParseError> {
        let t = self.next(what)?;
        f(&t.text).ok_or_else(|| self.err(Some(t), format!("expected {what}")))
    }

    fn rest(&mut self) -> &'a [Token] {
        let r = &self.toks[self.pos..];
        self.pos = self.toks.len();
        r
    }

    fn end(&self) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) => Err(self.err(Some(t), "unexpected trailing token")),
            None => Ok(()),
        }
    }

    /// `key=value` options in any order, each at most once.
    fn options(&mut self, allowed: &[&str]) -> Result<Vec<(String, &'a Token, String)>, ParseError> {
        let mut out: Vec<(String, &Token, String)> = Vec::new();
        while let Some(t) = self.peek() {
            let Some((k, v)) = t.text.split_once('=') else {
                return Err(self.err(Some(t), "expected key=value option"));
            };
            if !allowed.contains(&k) {
                return Err(self.err(Some(t), format!("unknown option `{k}`")));
            }
            if out.iter().any(|(seen, _, _)| seen == k) {
                return Err(self.err(Some(t), format!("option `{k}` given twice")));
            }
            out.push((k.to_string(), t, v.to_string()));
            self.pos += 1;
        }
        Ok(out)
    }
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || matches!(c, '_' | '\'' | '(' | ')' | '#' | '.'))
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

fn list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}

/// `S+2F-2e1`, `-3T`, `2*E1`, or `0`.
pub(crate) fn parse_class(s: &str) -> Option<ClassExpr> {
    if s == "0" {
        return Some(ClassExpr::default());
    }
    if s.is_empty() {
        return None;
    }
    let mut terms = Vec::new();
    let mut rest = s;
    let mut first = true;
    while !rest.is_empty() {
        let sign = match rest.as_bytes()[0] {
            b'+' if !first => 1,
            b'-' => -1,
            _ if first => 0,
            _ => return None,
        };
        if sign != 0 {
            rest = &rest[1..];
        }
        first = false;
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let term = &rest[..end];
        rest = &rest[end..];
        let split = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(term.len());
        let (digits, name) = term.split_at(split);
        let name = name.strip_prefix('*').unwrap_or(name);
        let k: i64 = if digits.is_empty() { 1 } else { digits.parse().ok()? };
        if k == 0 || !is_identifier(name) {
            return None;
        }
        terms.push((if sign < 0 { -k } else { k }, name.to_string()));
    }
    Some(ClassExpr(terms))
}

fn parse_value_set(s: &str) -> Option<ValueSet> {
    let inner = s.strip_prefix('{')?.strip_suffix('}')?;
    let set: Option<ValueSet> = inner.split(',').map(|x| x.trim().parse::<LinExpr>().ok()).collect();
    set.filter(|s| !s.0.is_empty())
}

fn parse_tuple(s: &str) -> Option<Vec<i64>> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    inner.split(',').map(|x| x.trim().parse().ok()).collect()
}

fn parse_cpq(s: &str) -> Option<CpqParams> {
    let inner = s.strip_prefix("C_{")?.strip_suffix('}')?;
    let (p, q) = inner.split_once(',')?;
    CpqParams::new(p.trim().parse().ok()?, q.trim().parse().ok()?).ok()
}

fn parse_knot(s: &str) -> Option<KnotSpec> {
    let body = s.strip_prefix('K')?;
    let param: LinExpr = body.parse().ok()?;
    (param == LinExpr::N || param.is_constant()).then_some(KnotSpec(param))
}

/// `n=3` or `n=2..20`
fn parse_n_range(s: &str) -> Option<(i64, i64)> {
    let v = s.strip_prefix("n=")?;
    match v.split_once("..") {
        Some((a, b)) => Some((a.parse().ok()?, b.parse().ok()?)),
        None => {
            let x = v.parse().ok()?;
            Some((x, x))
        }
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    let mut name: Option<String> = None;
    let mut ambient: Option<AmbientDecl> = None;
    let mut items = Vec::new();
    let mut lines = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let toks = tokenize(line_no, raw)?;
        if toks.is_empty() {
            continue;
        }
        let mut c = Cursor { line: line_no, toks: &toks, pos: 1, eol: raw.chars().count() + 1 };
        let head = &toks[0];
        match head.text.as_str() {
            "scenario" => {
                if name.is_some() {
                    return Err(c.err(Some(head), "scenario name declared twice"));
                }
                name = Some(c.name("scenario name")?);
                c.end()?;
                continue;
            }
            "ambient" => {
                if ambient.is_some() {
                    return Err(c.err(Some(head), "ambient declared twice"));
                }
                ambient = Some(parse_ambient(&mut c)?);
                continue;
            }
            _ => {}
        }
        if ambient.is_none() {
            return Err(c.err(Some(head), "no ambient declared before this directive"));
        }
        let item = match head.text.as_str() {
            "assert" => Item::Assert(parse_assertion(&mut c)?),
            "sw" => Item::Step(parse_sw(&mut c)?),
            _ => Item::Step(parse_step(&mut c, head)?),
        };
        items.push(item);
        lines.push(line_no);
    }
    let Some(ambient) = ambient else {
        return Err(ParseError {
            line: last_line.max(1),
            column: 1,
            token: String::new(),
            message: "no ambient declared".into(),
        });
    };
    if !items.iter().any(|i| matches!(i, Item::Assert(_))) {
        return Err(ParseError {
            line: last_line,
            column: 1,
            token: String::new(),
            message: "scenario has no assertions".into(),
        });
    }
    Ok(Scenario { name: name.unwrap_or_else(|| "unnamed".into()), ambient, items, lines })
}

fn parse_ambient(c: &mut Cursor) -> Result<AmbientDecl, ParseError> {
    let label = c.name("ambient label")?;
    let opts = c.options(&["e", "sigma", "basis", "flags"])?;
    let mut decl = AmbientDecl { label, e: 0, sigma: 0, basis: Vec::new(), flags: Vec::new() };
    let mut seen_e = false;
    let mut seen_sigma = false;
    for (k, tok, v) in opts {
        let bad = |what: &str| c.err(Some(tok), format!("expected {what}"));
        match k.as_str() {
            "e" => {
                decl.e = v.parse().map_err(|_| bad("integer e"))?;
                seen_e = true;
            }
            "sigma" => {
                decl.sigma = v.parse().map_err(|_| bad("integer sigma"))?;
                seen_sigma = true;
            }
            "basis" => {
                decl.basis = list(&v);
                if let Some(b) = decl.basis.iter().find(|b| !is_identifier(b)) {
                    return Err(c.err(Some(tok), format!("invalid basis name `{b}`")));
                }
            }
            _ => decl.flags = list(&v),
        }
    }
    if !seen_e || !seen_sigma {
        return Err(c.err(None, "ambient needs e= and sigma="));
    }
    Ok(decl)
}

fn parse_step(c: &mut Cursor, head: &Token) -> Result<Step, ParseError> {
    let step = match head.text.as_str() {
        "pair" => Step::Pair { a: c.name("generator")?, b: c.name("generator")?, value: c.int("integer pairing")? },
        "curve" => {
            let name = c.name("curve name")?;
            let class = c.parse_with("class expression", parse_class)?;
            let mut genus = 0;
            let mut double_points = 0;
            for (k, tok, v) in c.options(&["genus", "dp"])? {
                let n: u32 = v.parse().map_err(|_| c.err(Some(tok), "expected a nonnegative integer"))?;
                if k == "genus" {
                    genus = n;
                } else {
                    double_points = n;
                }
            }
            Step::Curve { name, class, genus, double_points }
        }
        "blowup" => {
            let name = c.name("exceptional curve name")?;
            let mut at = Vec::new();
            let mut double = None;
            if c.peek().is_some_and(|t| t.text == "at") {
                c.pos += 1;
                while let Some(t) = c.peek() {
                    if t.text == "double" {
                        break;
                    }
                    c.pos += 1;
                    let (curve, m) = match t.text.split_once(':') {
                        Some((curve, m)) => {
                            (curve, m.parse::<u32>().map_err(|_| c.err(Some(t), "expected multiplicity"))?)
                        }
                        None => (t.text.as_str(), 1),
                    };
                    if !is_name(curve) {
                        return Err(c.err(Some(t), "expected curve name"));
                    }
                    at.push((curve.to_string(), m));
                }
                if at.is_empty() {
                    return Err(c.err(c.peek(), "expected at least one curve after `at`"));
                }
            }
            if c.peek().is_some_and(|t| t.text == "double") {
                c.pos += 1;
                double = Some(c.name("curve with a double point")?);
            }
            Step::Blowup { name, at, double }
        }
        "smooth" => Step::Smooth { result: c.name("result name")?, a: c.name("curve")?, b: c.name("curve")? },
        "surgery" => {
            let label = c.name("manifold label")?;
            let mut knot = None;
            let mut flags = Vec::new();
            for (k, _, v) in c.options(&["knot", "flags"])? {
                if k == "knot" {
                    knot = Some(v);
                } else {
                    flags = list(&v);
                }
            }
            Step::Surgery { label, knot, flags }
        }
        "chain" => {
            let name = c.name("chain name")?;
            let mut curves = Vec::new();
            while c.peek().is_some() {
                curves.push(c.name("curve name")?);
            }
            if curves.is_empty() {
                return Err(c.err(None, "chain needs at least one curve"));
            }
            Step::Chain { name, curves }
        }
        "blowdown" => Step::Blowdown { chain: c.name("chain name")?, label: c.name("manifold label")? },
        "mcg" => {
            let name = c.name("factorization name")?;
            let expect = c.parse_with("expect=<twists>", |s| s.strip_prefix("expect=")?.parse().ok())?;
            c.keyword(":")?;
            let toks = c.rest();
            if toks.is_empty() {
                return Err(c.err(None, "expected twist factors"));
            }
            let text: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
            let factorization: TwistFactorization =
                text.join(" ").parse().map_err(|e| c.err(Some(&toks[0]), format!("bad factorization: {e}")))?;
            Step::Mcg { name, expect, factorization }
        }
        _ => return Err(c.err(Some(head), format!("unknown directive `{}`", head.text))),
    };
    c.end()?;
    Ok(step)
}

fn parse_sw(c: &mut Cursor) -> Result<Step, ParseError> {
    let name = c.name("ledger name")?;
    let kind = c.next("sw operation")?;
    let step = match kind.text.as_str() {
        "knots" => {
            let mut knots = Vec::new();
            let mut none = false;
            while let Some(t) = c.peek() {
                if t.text.contains('=') {
                    break;
                }
                c.pos += 1;
                if t.text == "none" {
                    none = true;
                } else {
                    knots.push(
                        parse_knot(&t.text).ok_or_else(|| c.err(Some(t), "expected a twist knot `K<int>` or `Kn`"))?,
                    );
                }
            }
            if none == !knots.is_empty() {
                return Err(c.err(c.peek(), "expected knots or `none`"));
            }
            let mut fiber = None;
            for (_, tok, v) in c.options(&["fiber"])? {
                fiber = Some(parse_class(&v).ok_or_else(|| c.err(Some(tok), "expected fiber class"))?);
            }
            let fiber = fiber.ok_or_else(|| c.err(None, "expected fiber=<class>"))?;
            Step::SwKnots { name, knots, fiber }
        }
        "blowup" => {
            let source = c.name("source ledger")?;
            let mut exceptionals = Vec::new();
            while c.peek().is_some() {
                exceptionals.push(c.name("exceptional generator")?);
            }
            if exceptionals.is_empty() {
                return Err(c.err(None, "expected exceptional generator names"));
            }
            Step::SwBlowup { name, source, exceptionals }
        }
        "blowdown" => {
            let source = c.name("source ledger")?;
            let mut chain = None;
            let mut transfer = None;
            let mut label = None;
            for (k, tok, v) in c.options(&["chain", "vanishing", "crossings", "label"])? {
                match k.as_str() {
                    "chain" => chain = Some(v),
                    "label" => label = Some(v),
                    _ if transfer.is_some() => {
                        return Err(c.err(Some(tok), "give either vanishing= or crossings=, not both"));
                    }
                    "vanishing" => transfer = Some(TransferSpec::Vanishing(list(&v))),
                    _ => {
                        let n = v.parse().map_err(|_| c.err(Some(tok), "expected crossing count"))?;
                        transfer = Some(TransferSpec::Crossings(n));
                    }
                }
            }
            let chain = chain.ok_or_else(|| c.err(None, "expected chain=<name>"))?;
            let transfer = transfer.ok_or_else(|| c.err(None, "expected vanishing=<flags> or crossings=<n>"))?;
            Step::SwBlowdown { name, source, chain, transfer, label }
        }
        _ => return Err(c.err(Some(kind), format!("unknown sw operation `{}`", kind.text))),
    };
    c.end()?;
    Ok(step)
}

fn parse_assertion(c: &mut Cursor) -> Result<Assertion, ParseError> {
    let kind = c.next("assertion kind")?;
    let a = match kind.text.as_str() {
        "square" => {
            let curve = c.name("curve")?;
            c.keyword("=")?;
            Assertion::Square { curve, expect: c.int("integer")? }
        }
        "pairing" => {
            let (a, b) = (c.name("curve")?, c.name("curve")?);
            c.keyword("=")?;
            Assertion::Pairing { a, b, expect: c.int("integer")? }
        }
        "genus" => {
            let curve = c.name("curve")?;
            c.keyword("=")?;
            Assertion::Genus { curve, expect: c.int("integer")? }
        }
        "double-points" => {
            let curve = c.name("curve")?;
            c.keyword("=")?;
            Assertion::DoublePoints { curve, expect: c.int("integer")? }
        }
        "chain" => {
            let chain = c.name("chain")?;
            let op = c.next("`=` or `is`")?;
            match op.text.as_str() {
                "=" => Assertion::ChainWeights {
                    chain,
                    expect: c.parse_with("chain weights", |s| s.parse::<Chain>().ok())?,
                },
                "is" => Assertion::ChainIs { chain, expect: c.parse_with("C_{p,q}", parse_cpq)? },
                _ => return Err(c.err(Some(op), "expected `=` or `is`")),
            }
        }
        "e" | "sigma" | "label" | "fingerprint" => {
            c.keyword("=")?;
            match kind.text.as_str() {
                "e" => Assertion::Euler(c.int("integer")?),
                "sigma" => Assertion::Signature(c.int("integer")?),
                "label" => Assertion::Label(c.name("label")?),
                _ => {
                    let t = c.next("fingerprint text or `none`")?;
                    Assertion::Fingerprint((t.text != "none").then(|| t.text.clone()))
                }
            }
        }
        "mcg" => {
            let name = c.name("factorization name")?;
            let what = c.next("mcg property")?;
            match what.text.as_str() {
                "identity" => Assertion::McgIdentity { name },
                "twists" => {
                    c.keyword("=")?;
                    Assertion::McgTwists { name, expect: c.int("integer")? }
                }
                "same-cycle" => {
                    let mut units = Vec::new();
                    while c.peek().is_some() {
                        units.push(c.int::<usize>("unit index")?);
                    }
                    if units.len() < 2 {
                        return Err(c.err(None, "same-cycle needs at least two unit indices"));
                    }
                    Assertion::McgSameCycle { name, units }
                }
                _ => return Err(c.err(Some(what), format!("unknown mcg property `{}`", what.text))),
            }
        }
        "words" => {
            let lhs = c.parse_with("word", |s| s.parse::<Word>().ok())?;
            c.keyword("=")?;
            let rhs = c.parse_with("word", |s| s.parse::<Word>().ok())?;
            Assertion::WordsEqual { lhs, rhs }
        }
        "sw" => parse_sw_assertion(c)?,
        _ => return Err(c.err(Some(kind), format!("unknown assertion `{}`", kind.text))),
    };
    c.end()?;
    Ok(a)
}

fn parse_sw_assertion(c: &mut Cursor) -> Result<Assertion, ParseError> {
    let name = c.name("ledger name")?;
    let what = c.next("ledger property")?;
    Ok(match what.text.as_str() {
        "count" | "unverified" => {
            c.keyword("=")?;
            let expect = c.int("integer")?;
            if what.text == "count" {
                Assertion::SwCount { name, expect }
            } else {
                Assertion::SwUnverified { name, expect }
            }
        }
        "value" => {
            let class = c.parse_with("class expression", parse_class)?;
            c.keyword("=")?;
            Assertion::SwValue { name, class, expect: c.parse_with("value c0+c1*n", |s| s.parse().ok())? }
        }
        "value-set" => {
            let class = c.parse_with("class expression", parse_class)?;
            c.keyword("=")?;
            Assertion::SwValueSet { name, class, expect: c.parse_with("value set {..}", parse_value_set)? }
        }
        "symmetric" => Assertion::SwSymmetric { name },
        "values-within" => Assertion::SwWithin { name, envelope: c.parse_with("value set {..}", parse_value_set)? },
        "minimal" => {
            let (from, to) = c.parse_with("n=<a> or n=<a>..<b>", parse_n_range)?;
            Assertion::SwMinimal { name, from, to }
        }
        "distinguishes" => {
            let a = c.parse_with("n=<int>", |s| s.strip_prefix("n=")?.parse().ok())?;
            let b = c.parse_with("n=<int>", |s| s.strip_prefix("n=")?.parse().ok())?;
            Assertion::SwDistinguishes { name, a, b }
        }
        "dimension" => {
            let class = c.parse_with("class expression", parse_class)?;
            c.keyword("=")?;
            Assertion::SwDimension { name, class, expect: c.parse_with("rational", |s| s.parse::<BigRational>().ok())? }
        }
        "restriction" => {
            let class = c.parse_with("class expression", parse_class)?;
            let chain = c.name("chain")?;
            c.keyword("=")?;
            Assertion::SwRestriction {
                name,
                class,
                chain,
                expect: ValueVector(c.parse_with("tuple (..)", parse_tuple)?),
            }
        }
        _ => return Err(c.err(Some(what), format!("unknown ledger property `{}`", what.text))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAD: &str = "scenario t\nambient E e=12 sigma=-8 basis=F,S\n";

    fn parse(body: &str) -> Result<Scenario, ParseError> {
        parse_scenario(&format!("{HEAD}{body}"))
    }

    #[test]
    fn tokenizer_groups_and_comments() {
        let toks = tokenize(1, r#"assert fingerprint = "CP2 # 5 CP2bar"  # trailing"#).unwrap();
        let texts: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, ["assert", "fingerprint", "=", "CP2 # 5 CP2bar"]);
        let toks = tokenize(1, "assert sw X values-within {n, -n, n+1}").unwrap();
        assert_eq!(toks[4].text, "{n, -n, n+1}");
        assert_eq!(toks[4].column, 27);
        assert!(tokenize(3, "chain (1,2").is_err());
        assert!(tokenize(3, "chain 1,2)").is_err());
    }

    #[test]
    fn class_expressions() {
        let c = parse_class("S+2F-2e1").unwrap();
        assert_eq!(c.0, vec![(1, "S".into()), (2, "F".into()), (-2, "e1".into())]);
        assert_eq!(c.to_string(), "S+2F-2e1");
        assert_eq!(parse_class("-3*T").unwrap().to_string(), "-3T");
        assert_eq!(parse_class("0").unwrap(), ClassExpr::default());
        for bad in ["", "+S", "S+", "2", "S++F", "0F", "S-2"] {
            assert!(parse_class(bad).is_none(), "{bad}");
        }
    }

    #[test]
    fn empty_input() {
        let e = parse_scenario("").unwrap_err();
        assert_eq!(e.message, "no ambient declared");
        let e = parse_scenario("# only a comment\n\n").unwrap_err();
        assert_eq!(e.message, "no ambient declared");
    }

    #[test]
    fn typo_directive_is_located() {
        let e = parse("curve S S\n  blowdwn c X\n").unwrap_err();
        assert_eq!((e.line, e.column), (4, 3));
        assert_eq!(e.token, "blowdwn");
        assert!(e.to_string().contains("unknown directive `blowdwn`"));
    }

    #[test]
    fn directive_before_ambient() {
        let e = parse_scenario("curve S S\nambient E e=12 sigma=-8 basis=F,S\n").unwrap_err();
        assert_eq!(e.line, 1);
    }

    #[test]
    fn needs_an_assertion() {
        assert!(parse("curve S S\n").is_err());
        assert!(parse("curve S S\nassert square S = -1\n").is_ok());
    }

    #[test]
    fn option_errors() {
        assert!(parse("curve S S dp=x\nassert e = 1\n").is_err());
        assert!(parse("curve S S colour=red\nassert e = 1\n").is_err());
        let e = parse("sw X blowdown Y chain=c\nassert e = 1\n").unwrap_err();
        assert!(e.message.contains("vanishing"));
        let e = parse("sw X knots fiber=F\nassert e = 1\n").unwrap_err();
        assert!(e.message.contains("none"));
    }

    #[test]
    fn round_trip_fixed_point() {
        let src = r#"
scenario demo   # a comment
ambient E(1) e=12 sigma=-8 basis=F,S flags=simply-connected,odd
pair F S 1
pair S S -1
curve S S dp=1
curve F1 F dp=1
mcg m expect=12 : a^3 b a^3 b a^3 b
blowup e1 double S
blowup e2 at S:1 F1:2
smooth Sigma S F1
surgery Y_n knot=K_n flags=odd
sw Y knots Kn K1 fiber=F
sw Y2 blowup Y E1 E2
chain c Sigma
blowdown c Q
sw Q blowdown Y2 chain=c vanishing=model,rational-elliptic label=Q_n
sw X blowdown Y2 chain=c crossings=1
assert fingerprint = "CP2 # 5 CP2bar"
assert fingerprint = none
assert chain c = (-9,-2)
assert chain c is C_{7,1}
assert mcg m same-cycle 1 2 3
assert words "(a b)^6" = "1"
assert sw Q value 3F+E1+E2 = n
assert sw Q value-set F = {n-1, n, n+1}
assert sw Q values-within {0, 1, -1, n, -n}
assert sw Q minimal n=2..20
assert sw Q minimal n=4
assert sw Q distinguishes n=2 n=5
assert sw Q dimension F = -1/4
assert sw Q restriction 3F+E1+E2 c = (7,0)
assert sw Q unverified = 0
"#;
        let s = parse_scenario(src).unwrap();
        let printed = s.to_string();
        let again = parse_scenario(&printed).unwrap();
        assert_eq!(s, again);
        assert_eq!(printed, again.to_string());
        assert_eq!(s.name, "demo");
        assert_eq!(s.assertion_count(), 15);
    }
}
