use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::AlgebraError;
use crate::monomial::Monomial;
use crate::poly::Polynomial;

/// Recursive-descent parser for `expr := term (('+'|'-') term)*`,
/// `term := factor ('*' factor)*`,
/// `factor := int ['/' int] | name ['^' int] | '(' expr ')' ['^' int]`.
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
    vars: &'a HashMap<&'a str, usize>,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, AlgebraError> {
        Err(AlgebraError::Parse {
            offset: self.pos,
            message: message.into(),
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

    fn integer(&mut self) -> Result<BigInt, AlgebraError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn exponent(&mut self) -> Result<u32, AlgebraError> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        let e = self.integer()?;
        u32::try_from(e).or_else(|_| self.err("exponent too large"))
    }

    fn expr(&mut self) -> Result<Polynomial, AlgebraError> {
        let mut acc = Polynomial::zero(self.dim);
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if negate { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Polynomial, AlgebraError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, AlgebraError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let den = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.integer()?
                } else {
                    BigInt::one()
                };
                if den == BigInt::from(0) {
                    return Err(AlgebraError::DivisionByZero);
                }
                Ok(Polynomial::constant(self.dim, BigRational::new(num, den)))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                let e = self.exponent()?;
                Ok(inner.pow(e))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let Some(&v) = self.vars.get(name) else {
                    self.pos = start;
                    return self.err(format!("unknown variable {name:?}"));
                };
                let e = self.exponent()?;
                let e = u16::try_from(e).or_else(|_| self.err("exponent too large"))?;
                Ok(Polynomial::term(
                    self.dim,
                    Monomial::var(self.dim, v, e),
                    BigRational::one(),
                ))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub(crate) fn parse_polynomial(
    text: &str,
    dim: usize,
    vars: &HashMap<&str, usize>,
) -> Result<Polynomial, AlgebraError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        dim,
        vars,
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}
