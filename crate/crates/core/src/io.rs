//! Text syntax for biwords and expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)* | '0'
//! term   := ['+' | '-'] ( [coeff '*'] biword | coeff )
//! coeff  := int | [int '*'] 'q' ['^' int]
//! biword := digits '/' digits | '(' ints ')' '/' '(' ints ')' | 'e'
//! ```
//!
//! In the digit form each digit is one letter. `e` is the empty biword and a
//! bare coefficient is a multiple of `e`. Whitespace between tokens is
//! ignored.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::biword::{Alphabet, Biword, Letter};
use crate::coeff::{write_monomial, LaurentCoeff};
use crate::expr::Expression;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: String, found: String },
    LengthMismatch { top: usize, bottom: usize },
    LetterOutOfRange { letter: Letter, r: Letter },
}

/// A parse failure at a byte offset of the original input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn expected(&self) -> Option<&str> {
        match &self.kind {
            ParseErrorKind::Syntax { expected, .. } => Some(expected),
            _ => None,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax { expected, found } => {
                write!(f, "at byte {}: expected {expected}, found {found}", self.position)
            }
            ParseErrorKind::LengthMismatch { top, bottom } => write!(
                f,
                "at byte {}: top word has {top} letters but bottom word has {bottom}",
                self.position
            ),
            ParseErrorKind::LetterOutOfRange { letter, r } => {
                write!(f, "at byte {}: letter {letter} is outside 1..={r}", self.position)
            }
        }
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    alphabet: Alphabet,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, alphabet: Alphabet) -> Self {
        Parser { src, pos: 0, alphabet }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn found(&self) -> String {
        match self.rest().chars().next() {
            None => "end of input".to_string(),
            Some(_) => {
                let snippet: String = self.rest().chars().take(8).collect();
                format!("{snippet:?}")
            }
        }
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError {
            position: self.pos,
            kind: ParseErrorKind::Syntax {
                expected: expected.to_string(),
                found: self.found(),
            },
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("'{c}'")))
        }
    }

    /// A run of ASCII digits starting at the current position (no skipping).
    fn digits(&mut self) -> &'a str {
        let rest = self.rest();
        let len = rest.bytes().take_while(u8::is_ascii_digit).count();
        self.pos += len;
        &rest[..len]
    }

    fn signed_int(&mut self) -> Result<(usize, BigInt), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let negative = self.eat('-');
        self.skip_ws();
        let at = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            self.pos = at;
            return Err(self.error("an integer"));
        }
        let v: BigInt = digits.parse().expect("ascii digits");
        Ok((start, if negative { -v } else { v }))
    }

    fn letter(&self, text: &str, position: usize) -> Result<Letter, ParseError> {
        let out_of_range = |letter| ParseError {
            position,
            kind: ParseErrorKind::LetterOutOfRange {
                letter,
                r: self.alphabet.size(),
            },
        };
        let letter: Letter = text.parse().map_err(|_| out_of_range(Letter::MAX))?;
        self.alphabet.check(letter).map_err(|_| out_of_range(letter))
    }

    fn digit_word(&mut self) -> Result<Vec<Letter>, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.error("a digit word"));
        }
        digits
            .char_indices()
            .map(|(k, c)| self.letter(c.encode_utf8(&mut [0; 4]), start + k))
            .collect()
    }

    fn tuple_word(&mut self) -> Result<Vec<Letter>, ParseError> {
        self.expect('(')?;
        let mut out = Vec::new();
        if self.eat(')') {
            return Ok(out);
        }
        loop {
            self.skip_ws();
            let at = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("a letter"));
            }
            out.push(self.letter(digits, at)?);
            if self.eat(')') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn finish_biword(&mut self, start: usize, top: Vec<Letter>, tuple: bool) -> Result<Biword, ParseError> {
        self.expect('/')?;
        let bottom = if tuple { self.tuple_word()? } else { self.digit_word()? };
        let (t, b) = (top.len(), bottom.len());
        Biword::from_letters(top, bottom).map_err(|_| ParseError {
            position: start,
            kind: ParseErrorKind::LengthMismatch { top: t, bottom: b },
        })
    }

    fn biword(&mut self) -> Result<Biword, ParseError> {
        match self.peek() {
            Some('e') => {
                self.pos += 1;
                Ok(Biword::empty())
            }
            Some('(') => {
                let start = self.pos;
                let top = self.tuple_word()?;
                self.finish_biword(start, top, true)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let top = self.digit_word()?;
                self.finish_biword(start, top, false)
            }
            _ => Err(self.error("a biword")),
        }
    }

    /// `'q' ['^' int]`, returning the exponent.
    fn q_power(&mut self) -> Result<i64, ParseError> {
        self.expect('q')?;
        if !self.eat('^') {
            return Ok(1);
        }
        let (at, e) = self.signed_int()?;
        i64::try_from(&e).map_err(|_| ParseError {
            position: at,
            kind: ParseErrorKind::Syntax {
                expected: "an exponent that fits in 64 bits".into(),
                found: e.to_string(),
            },
        })
    }

    fn term(&mut self) -> Result<(LaurentCoeff, Biword), ParseError> {
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let (coeff, biword) = match self.peek() {
            Some('e') | Some('(') => (LaurentCoeff::one(), self.biword()?),
            Some('q') => {
                let exp = self.q_power()?;
                let b = if self.eat('*') { self.biword()? } else { Biword::empty() };
                (LaurentCoeff::q_pow(exp), b)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let digits = self.digits();
                if self.peek() == Some('/') {
                    self.pos = start;
                    (LaurentCoeff::one(), self.biword()?)
                } else {
                    let c: BigInt = digits.parse().expect("ascii digits");
                    if !self.eat('*') {
                        (LaurentCoeff::constant(c), Biword::empty())
                    } else if self.peek() == Some('q') {
                        let exp = self.q_power()?;
                        let b = if self.eat('*') { self.biword()? } else { Biword::empty() };
                        (LaurentCoeff::monomial(c, exp), b)
                    } else {
                        (LaurentCoeff::constant(c), self.biword()?)
                    }
                }
            }
            _ => return Err(self.error("a term")),
        };
        Ok((if negate { -coeff } else { coeff }, biword))
    }

    fn expression(&mut self) -> Result<Expression, ParseError> {
        let mut out = Expression::zero();
        let (c, b) = self.term()?;
        out.add_term(b, c);
        loop {
            match self.peek() {
                None => return Ok(out),
                Some('+') => {
                    self.pos += 1;
                }
                Some('-') => {
                    self.pos += 1;
                    let (c, b) = self.term()?;
                    out.add_term(b, -c);
                    continue;
                }
                _ => return Err(self.error("'+', '-' or end of input")),
            }
            let (c, b) = self.term()?;
            out.add_term(b, c);
        }
    }

    fn end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("end of input")),
        }
    }
}

/// Parses a single biword, checking letters against `alphabet`.
pub fn parse_biword_in(text: &str, alphabet: Alphabet) -> Result<Biword, ParseError> {
    let mut p = Parser::new(text, alphabet);
    let b = p.biword()?;
    p.end()?;
    Ok(b)
}

pub fn parse_biword(text: &str) -> Result<Biword, ParseError> {
    parse_biword_in(text, Alphabet::unbounded())
}

/// Parses an expression, merging like terms.
pub fn parse_expression_in(text: &str, alphabet: Alphabet) -> Result<Expression, ParseError> {
    let mut p = Parser::new(text, alphabet);
    let e = p.expression()?;
    p.end()?;
    Ok(e)
}

pub fn parse_expression(text: &str) -> Result<Expression, ParseError> {
    parse_expression_in(text, Alphabet::unbounded())
}

/// Canonical text: biwords in canonical order, then exponents ascending.
/// `parse_expression(&print_expression(e)) == e` for every expression.
pub fn print_expression(e: &Expression) -> String {
    let mut out = String::new();
    for (b, c) in e {
        for (exp, k) in c.terms() {
            let negative = k.is_negative();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mag = k.abs();
            if b.is_empty() {
                if mag.is_one() && exp == 0 {
                    out.push('e');
                } else {
                    write_monomial(&mut out, &mag, exp).expect("string write");
                }
            } else {
                if !(mag.is_one() && exp == 0) {
                    write_monomial(&mut out, &mag, exp).expect("string write");
                    out.push('*');
                }
                out.push_str(&b.to_string());
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn print_biword(b: &Biword) -> String {
    b.to_string()
}

/// Convenience for the coefficient text `c*q^e` used in reports.
pub fn print_coefficient(c: &LaurentCoeff) -> String {
    if c.is_zero() {
        "0".into()
    } else {
        c.to_string()
    }
}
