//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr     := ['-'] term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' nat)?
//! base     := rational | symbol | '(' expr ')'
//! rational := nat ('/' nat)?
//! ```
//!
//! Whitespace is insignificant. The nine symbols are `x y z a b c d m
//! alpha`. A leading `-` (also directly after `(`) is accepted so canonical
//! printing of negative leading coefficients round-trips.

use super::{Integer, Monomial, Poly, Rational, VarId};
use num_traits::Zero;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ParseError {
    /// Unexpected character or token; `pos` is a byte offset into the input.
    Syntax { pos: usize, message: String },
    UnknownSymbol { pos: usize, name: String },
    /// `^` with anything but a non-negative integer literal.
    BadExponent { pos: usize },
    ZeroDenominator { pos: usize },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { pos, message } => write!(f, "syntax error at {pos}: {message}"),
            ParseError::UnknownSymbol { pos, name } => {
                write!(f, "unknown symbol `{name}` at {pos}")
            }
            ParseError::BadExponent { pos } => {
                write!(f, "exponent at {pos} must be a non-negative integer")
            }
            ParseError::ZeroDenominator { pos } => write!(f, "zero denominator at {pos}"),
        }
    }
}

impl std::error::Error for ParseError {}

pub fn parse_poly(text: &str) -> Result<Poly, ParseError> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0 };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("trailing input"));
    }
    Ok(poly)
}

/// Parse `p`, `p/q`, or `-p/q` as an exact rational. Used for command-line
/// parameter values.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let mut p = Parser { bytes: text.trim().as_bytes(), pos: 0 };
    let neg = p.eat(b'-');
    let num = p.nat()?;
    let den = if p.eat(b'/') { p.nat()? } else { Integer::from(1) };
    if p.pos != p.bytes.len() {
        return Err(p.err("trailing input"));
    }
    if den.is_zero() {
        return Err(ParseError::ZeroDenominator { pos: 0 });
    }
    let r = Rational::new(num, den);
    Ok(if neg { -r } else { r })
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> ParseError {
        ParseError::Syntax { pos: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = if self.eat(b'-') {
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.base()?;
        if self.eat(b'^') {
            match self.peek() {
                Some(b) if b.is_ascii_digit() => {
                    let n = self.nat()?;
                    let n: u32 = n
                        .try_into()
                        .map_err(|_| ParseError::BadExponent { pos: self.pos })?;
                    Ok(base.pow(n))
                }
                _ => Err(ParseError::BadExponent { pos: self.pos }),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            Some(b) if b.is_ascii_digit() => {
                let num = self.nat()?;
                if self.eat(b'/') {
                    let dpos = self.pos;
                    let den = self.nat()?;
                    if den.is_zero() {
                        return Err(ParseError::ZeroDenominator { pos: dpos });
                    }
                    Ok(Poly::constant(Rational::new(num, den)))
                } else {
                    Ok(Poly::constant(Rational::from_integer(num)))
                }
            }
            Some(b) if b.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                match VarId::from_name(name) {
                    Some(v) => Ok(Poly::term(Monomial::var(v), Rational::from_integer(1.into()))),
                    None => Err(ParseError::UnknownSymbol { pos: start, name: name.to_string() }),
                }
            }
            Some(_) => Err(self.err("expected a number, symbol, or `(`")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn nat(&mut self) -> Result<Integer, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }
}
