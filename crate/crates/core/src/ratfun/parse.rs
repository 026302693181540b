//! Parser for rational expressions in `y1, ..., yn` with `+ - * / ^`,
//! parentheses and integer literals.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::RatFun;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn expr(&mut self) -> Result<RatFun> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFun> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == b'*' { acc * rhs } else { acc.div(&rhs)? };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFun> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFun> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let negative = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let e: i64 = self
                .digits()?
                .parse()
                .map_err(|_| self.err("exponent too large"))?;
            return base.pow(if negative { -e } else { e });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFun> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'y') => {
                self.pos += 1;
                let idx: usize = self
                    .digits()?
                    .parse()
                    .map_err(|_| self.err("bad variable index"))?;
                if idx == 0 || idx > self.nvars {
                    return Err(Error::Parse(format!(
                        "variable y{idx} outside y1..y{}",
                        self.nvars
                    )));
                }
                Ok(RatFun::var(self.nvars, idx - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let v: BigInt = self.digits()?.parse().map_err(|_| self.err("bad integer"))?;
                Ok(RatFun::constant(self.nvars, BigRational::from_integer(v)))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses an expression such as `(3*y1*y2 + 4*y2 + 4)/(y1*y2 + y2 + 1)`.
pub fn parse_ratfun(src: &str, nvars: usize) -> Result<RatFun> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        nvars,
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}
