//! Words in the two standard Dehn twists of the torus.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::McgError;

/// One of the two standard right-handed Dehn twists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    A,
    B,
}

impl Generator {
    pub fn letter(self) -> char {
        match self {
            Generator::A => 'a',
            Generator::B => 'b',
        }
    }

    fn inverse_letter(self) -> char {
        match self {
            Generator::A => 'A',
            Generator::B => 'B',
        }
    }
}

/// A word kept in run-length normal form: adjacent letters never share a
/// generator and no exponent is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<(Generator, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(g: Generator) -> Self {
        Word::power(g, 1)
    }

    pub fn power(g: Generator, exponent: i64) -> Self {
        Word::from_letters([(g, exponent)])
    }

    /// Builds a word from arbitrary letters, merging runs and dropping zero
    /// exponents.
    pub fn from_letters<I: IntoIterator<Item = (Generator, i64)>>(letters: I) -> Self {
        let mut w = Word::default();
        for (g, e) in letters {
            w.push(g, e);
        }
        w
    }

    fn push(&mut self, g: Generator, e: i64) {
        if e == 0 {
            return;
        }
        match self.letters.last_mut() {
            Some((last, exp)) if *last == g => {
                *exp += e;
                if *exp == 0 {
                    self.letters.pop();
                }
            }
            _ => self.letters.push((g, e)),
        }
    }

    pub fn letters(&self) -> &[(Generator, i64)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Free length (sum of absolute exponents).
    pub fn length(&self) -> u64 {
        self.letters.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &(g, e) in &other.letters {
            w.push(g, e);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word::from_letters(self.letters.iter().rev().map(|&(g, e)| (g, -e)))
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..n.unsigned_abs() {
            w = w.concat(&base);
        }
        w
    }

    /// `x · self · x⁻¹`
    pub fn conjugate_by(&self, x: &Word) -> Word {
        x.concat(self).concat(&x.inverse())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, &(g, e)) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let c = if e > 0 { g.letter() } else { g.inverse_letter() };
            if e.abs() == 1 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}^{}", e.abs())?;
            }
        }
        Ok(())
    }
}

/// Parses `a`, `b`, `A` (= a⁻¹), `B` (= b⁻¹), `^k` exponents (possibly
/// negative), parenthesised groups and `1` for the identity. Whitespace is
/// ignored.
impl FromStr for Word {
    type Err = McgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        let mut parser = WordParser { src: s, chars, pos: 0 };
        let w = parser.sequence()?;
        if let Some(&(at, c)) = parser.chars.get(parser.pos) {
            return Err(McgError::Syntax { input: s.to_string(), at, found: c });
        }
        Ok(w)
    }
}

struct WordParser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl WordParser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn error(&self) -> McgError {
        match self.chars.get(self.pos) {
            Some(&(at, c)) => McgError::Syntax { input: self.src.to_string(), at, found: c },
            None => McgError::UnexpectedEnd { input: self.src.to_string() },
        }
    }

    fn sequence(&mut self) -> Result<Word, McgError> {
        let mut w = Word::identity();
        while let Some(c) = self.peek() {
            let atom = match c {
                'a' => Word::power(Generator::A, 1),
                'b' => Word::power(Generator::B, 1),
                'A' => Word::power(Generator::A, -1),
                'B' => Word::power(Generator::B, -1),
                '1' => Word::identity(),
                '(' => {
                    self.pos += 1;
                    let inner = self.sequence()?;
                    if self.peek() != Some(')') {
                        return Err(self.error());
                    }
                    inner
                }
                ')' => break,
                _ => return Err(self.error()),
            };
            self.pos += 1;
            let exp = self.exponent()?;
            w = w.concat(&atom.pow(exp));
        }
        Ok(w)
    }

    fn exponent(&mut self) -> Result<i64, McgError> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        let mut digits = String::new();
        if self.peek() == Some('-') {
            digits.push('-');
            self.pos += 1;
        }
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.pos += 1;
        }
        digits.parse().map_err(|_| self.error())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_merges_and_cancels() {
        let w: Word = "a a^2 A^3 b".parse().unwrap();
        assert_eq!(w.letters(), &[(Generator::B, 1)]);
        assert!("aA".parse::<Word>().unwrap().is_empty());
    }

    #[test]
    fn parses_groups_and_negative_exponents() {
        let w: Word = "(a^3b)^3".parse().unwrap();
        assert_eq!(w.length(), 12);
        let v: Word = "a^-4 b a^4".parse().unwrap();
        assert_eq!(v.to_string(), "A^4 b a^4");
        assert_eq!(v.to_string().parse::<Word>().unwrap(), v);
    }

    #[test]
    fn rejects_bad_input() {
        assert!("ac".parse::<Word>().is_err());
        assert!("(ab".parse::<Word>().is_err());
        assert!("a^".parse::<Word>().is_err());
    }

    #[test]
    fn inverse_and_conjugate() {
        let x: Word = "ab".parse().unwrap();
        assert_eq!(x.inverse().to_string(), "B A");
        let c = Word::generator(Generator::A).conjugate_by(&x);
        assert_eq!(c.to_string(), "a b a B A");
    }
}
