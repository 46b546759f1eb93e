//! Parser for rational-function strings such as `"3/7*a^2*b - 1/2*b + 1"`
//! or `"(a)/(a - 2*b)"`, the format produced by `Display`.

use num::{BigInt, One};
use thiserror::Error;

use super::poly2::{Poly2, Q};
use super::ratfunc::RatFunc;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {0:?} at offset {1}")]
    Unexpected(char, usize),
    #[error("unexpected end of input")]
    Eof,
    #[error("division by zero")]
    DivByZero,
    #[error("invalid exponent at offset {0}")]
    BadExponent(usize),
    #[error("expected a rational constant, found {0:?}")]
    NotConstant(String),
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                b'/' => {
                    self.pos += 1;
                    let d = self.unary()?;
                    if d.is_zero() {
                        return Err(ParseError::DivByZero);
                    }
                    acc = acc.div(&d);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let n: u32 = std::str::from_utf8(&self.s[start..self.pos])
                .ok()
                .and_then(|t| t.parse().ok())
                .ok_or(ParseError::BadExponent(start))?;
            let mut acc = RatFunc::one();
            for _ in 0..n {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc, ParseError> {
        let c = self.peek().ok_or(ParseError::Eof)?;
        match c {
            b'(' => {
                self.pos += 1;
                let v = self.expr()?;
                match self.peek() {
                    Some(b')') => {
                        self.pos += 1;
                        Ok(v)
                    }
                    Some(o) => Err(ParseError::Unexpected(o as char, self.pos)),
                    None => Err(ParseError::Eof),
                }
            }
            b'a' => {
                self.pos += 1;
                Ok(RatFunc::from_poly(Poly2::a()))
            }
            b'b' => {
                self.pos += 1;
                Ok(RatFunc::from_poly(Poly2::b()))
            }
            b'0'..=b'9' => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
                let n: BigInt = digits.parse().expect("digits");
                Ok(RatFunc::constant(Q::from_integer(n)))
            }
            o => Err(ParseError::Unexpected(o as char, self.pos)),
        }
    }
}

pub fn parse_ratfunc(s: &str) -> Result<RatFunc, ParseError> {
    let mut p = Parser {
        s: s.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    match p.peek() {
        None => Ok(v),
        Some(c) => Err(ParseError::Unexpected(c as char, p.pos)),
    }
}

/// A rational number: `"p/q"`, `"-3"`, or any constant expression.
pub fn parse_rational(s: &str) -> Result<Q, ParseError> {
    let r = parse_ratfunc(s)?;
    r.constant_value()
        .ok_or_else(|| ParseError::NotConstant(s.to_string()))
}

pub fn rational_to_string(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::super::poly2::q;
    use super::*;

    #[test]
    fn parses_polynomial_display_format() {
        let p = Poly2::from_terms([((2, 1), q(3, 7)), ((0, 1), q(-1, 2)), ((0, 0), q(1, 1))]);
        let s = p.to_string();
        assert_eq!(parse_ratfunc(&s).unwrap(), RatFunc::from_poly(p));
    }

    #[test]
    fn round_trips_fraction() {
        let r = RatFunc::new(
            Poly2::a().scale(&q(2, 3)),
            Poly2::linear(1, -2).mul(&Poly2::b()),
        );
        assert_eq!(parse_ratfunc(&r.to_string()).unwrap(), r);
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("-3/4").unwrap(), q(-3, 4));
        assert_eq!(parse_rational(" 5 ").unwrap(), q(5, 1));
        assert!(parse_rational("a").is_err());
        assert!(parse_ratfunc("1/0").is_err());
        assert!(parse_ratfunc("(a+").is_err());
    }
}
