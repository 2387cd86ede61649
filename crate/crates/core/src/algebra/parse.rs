//! Recursive-descent parser for polynomial and rational-function expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'x' | 'y' | '(' expr ')'
//! ```
//!
//! Multiplication is always explicit; `2x` is a syntax error. A rational
//! constant is written `a/b`. Whitespace is ignored.

use num_bigint::BigInt;

use super::poly::{Poly2, DEFAULT_DEGREE_CAP};
use super::ratfunc::RatFunc;
use super::Rat;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    cap: u32,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                b'-' => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.bump();
                    let t = self.unary()?;
                    acc = acc.mul(&t)?;
                }
                b'/' => {
                    self.bump();
                    let at = self.pos;
                    let t = self.unary()?;
                    if t.is_zero() {
                        self.pos = at;
                        return self.err("division by zero");
                    }
                    acc = acc.div(&t)?;
                }
                b'x' | b'y' | b'(' | b'0'..=b'9' => {
                    return self.err("implicit multiplication is not allowed; use '*'");
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(b'-') => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.bump();
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return self.err("expected a nonnegative integer exponent");
            }
            let e: u64 = match digits.parse() {
                Ok(v) => v,
                Err(_) => {
                    self.pos = start;
                    return Err(Error::DegreeCap {
                        degree: u64::MAX,
                        cap: self.cap,
                    });
                }
            };
            if e > self.cap as u64 {
                return Err(Error::DegreeCap {
                    degree: e,
                    cap: self.cap,
                });
            }
            return base.pow(e as u32, self.cap);
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(b'x') => {
                self.bump();
                Ok(RatFunc::from_poly(Poly2::x()))
            }
            Some(b'y') => {
                self.bump();
                Ok(RatFunc::from_poly(Poly2::y()))
            }
            Some(b'(') => {
                self.bump();
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.bump();
                Ok(e)
            }
            Some(b'0'..=b'9') => {
                let d = self.digits();
                let v: BigInt = d.parse().expect("digits");
                Ok(RatFunc::from_poly(Poly2::constant(Rat::from_integer(v))))
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a rational function such as `(y - (x/2)^5)/(x/2)^3`.
pub fn parse_ratfunc_capped(text: &str, cap: u32) -> Result<RatFunc> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        cap,
    };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let r = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    if let Some(d) = r.num().total_degree().max(r.den().total_degree()) {
        if d > cap {
            return Err(Error::DegreeCap {
                degree: d as u64,
                cap,
            });
        }
    }
    Ok(r)
}

pub fn parse_ratfunc(text: &str) -> Result<RatFunc> {
    parse_ratfunc_capped(text, DEFAULT_DEGREE_CAP)
}

/// Parses a polynomial in `x`, `y` with rational coefficients and expands it.
pub fn parse_poly(text: &str) -> Result<Poly2> {
    parse_poly_capped(text, DEFAULT_DEGREE_CAP)
}

pub fn parse_poly_capped(text: &str, cap: u32) -> Result<Poly2> {
    parse_ratfunc_capped(text, cap)?
        .into_poly()
        .ok_or(Error::NotPolynomial)
}

/// Parses a rational number `a` or `a/b` (optionally signed).
pub fn parse_rat(text: &str) -> Result<Rat> {
    let p = parse_poly(text)?;
    if !p.is_constant() {
        return Err(Error::Invalid(format!("'{text}' is not a rational constant")));
    }
    Ok(p.constant_term())
}

/// Parses a comma-separated list of rationals, e.g. `"3/2, 5"`.
pub fn parse_rat_list(text: &str) -> Result<Vec<Rat>> {
    let t = text.trim().trim_start_matches('[').trim_end_matches(']');
    let sep = if t.contains(':') { ':' } else { ',' };
    t.split(sep).map(|s| parse_rat(s.trim())).collect()
}
