//! Parser for the identity-manifest expression grammar over
//! `u, w, sqrtQ, sqrt2, A, B, C`, rationals, `+ - * / ^`, parentheses, and
//! `ln(...)`.

use super::elem::{CalcElem, DiffElem, SqrtQScalar};
use super::q2::Q2;
use super::ratfunc::{QPoly2, RatFunc};
use crate::expr::Rational;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CalcError {
    Syntax { pos: usize, message: String },
    UnknownSymbol { pos: usize, name: String },
    BadExponent { pos: usize },
    /// Product of two transcendental-bearing elements.
    NonScalarProduct,
    /// Division by anything but a nonzero scalar.
    DivisorNotScalar,
    /// `ln` of something outside the scalar field.
    LogOfNonScalar,
    /// Differentiating `c * ln(g)` with non-constant `c`.
    NonConstantLogCoefficient,
}

impl fmt::Display for CalcError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CalcError::Syntax { pos, message } => write!(f, "syntax error at {pos}: {message}"),
            CalcError::UnknownSymbol { pos, name } => write!(f, "unknown symbol `{name}` at {pos}"),
            CalcError::BadExponent { pos } => {
                write!(f, "exponent at {pos} must be a non-negative integer")
            }
            CalcError::NonScalarProduct => write!(f, "cannot multiply two transcendental elements"),
            CalcError::DivisorNotScalar => write!(f, "divisor must be a nonzero scalar"),
            CalcError::LogOfNonScalar => write!(f, "ln argument must be a scalar"),
            CalcError::NonConstantLogCoefficient => {
                write!(f, "logarithm coefficients must be constants")
            }
        }
    }
}

impl std::error::Error for CalcError {}

pub fn parse_calc(text: &str) -> Result<CalcElem, CalcError> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> CalcError {
        CalcError::Syntax { pos: self.pos, message: message.to_string() }
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

    /// Whether the character after the current one (skipping whitespace) is
    /// a digit; used to disambiguate rational literals from division.
    fn next_nonspace_is_digit(&self) -> bool {
        self.bytes[self.pos + 1..]
            .iter()
            .find(|b| !b.is_ascii_whitespace())
            .is_some_and(|b| b.is_ascii_digit())
    }

    fn expr(&mut self) -> Result<CalcElem, CalcError> {
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

    fn term(&mut self) -> Result<CalcElem, CalcError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.factor()?)?;
            } else if self.eat(b'/') {
                acc = acc.div(&self.factor()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<CalcElem, CalcError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            match self.peek() {
                Some(b) if b.is_ascii_digit() => {
                    let n = self.nat()?;
                    let n: u32 = n.try_into().map_err(|_| CalcError::BadExponent { pos: self.pos })?;
                    base.pow(n)
                }
                _ => Err(CalcError::BadExponent { pos: self.pos }),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<CalcElem, CalcError> {
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
                // `p/q` is a rational literal only when a digit follows the
                // slash; otherwise the slash is field division.
                let r = if self.peek() == Some(b'/') && self.next_nonspace_is_digit() {
                    self.pos += 1;
                    let dpos = self.pos;
                    let den = self.nat()?;
                    if den == 0 {
                        return Err(CalcError::Syntax {
                            pos: dpos,
                            message: "zero denominator".into(),
                        });
                    }
                    Rational::new(num.into(), den.into())
                } else {
                    Rational::from_integer(num.into())
                };
                Ok(CalcElem::from_scalar(SqrtQScalar::from_plain(RatFunc::constant(
                    Q2::from_rational(r),
                ))))
            }
            Some(b) if b.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric())
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                match name {
                    "u" => Ok(CalcElem::from_scalar(SqrtQScalar::from_plain(
                        RatFunc::from_poly(QPoly2::var_u()),
                    ))),
                    "w" => Ok(CalcElem::from_scalar(SqrtQScalar::from_plain(
                        RatFunc::from_poly(QPoly2::var_w()),
                    ))),
                    "sqrtQ" => Ok(CalcElem::from_scalar(SqrtQScalar::sqrt_q())),
                    "sqrt2" => Ok(CalcElem::from_scalar(SqrtQScalar::from_plain(
                        RatFunc::constant(Q2::sqrt2()),
                    ))),
                    "A" => Ok(CalcElem::from_elem(DiffElem::primitive_a())),
                    "B" => Ok(CalcElem::from_elem(DiffElem::primitive_b())),
                    "C" => Ok(CalcElem::from_elem(DiffElem::primitive_c())),
                    "ln" => {
                        if !self.eat(b'(') {
                            return Err(self.err("expected `(` after ln"));
                        }
                        let arg = self.expr()?;
                        if !self.eat(b')') {
                            return Err(self.err("expected `)`"));
                        }
                        match arg.as_scalar() {
                            Some(s) => Ok(CalcElem::ln(s.clone())),
                            None => Err(CalcError::LogOfNonScalar),
                        }
                    }
                    _ => Err(CalcError::UnknownSymbol { pos: start, name: name.to_string() }),
                }
            }
            Some(_) => Err(self.err("expected a number, symbol, or `(`")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn nat(&mut self) -> Result<u64, CalcError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("number too large"))
    }
}
