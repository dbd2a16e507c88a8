//! Scalar literal grammar.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' ['-'] int)?
//! atom   := int ['/' int] | 'z' int | 'u' | 'x' | 'y' | 'w' | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::scalar::{CycScalar, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse scalar {input:?} at offset {offset}: {reason}")]
pub struct ParseScalarError {
    pub input: String,
    pub offset: usize,
    pub reason: String,
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, reason: impl Into<String>) -> Result<T, ParseScalarError> {
        Err(ParseScalarError { input: self.src.to_string(), offset: self.pos, reason: reason.into() })
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<BigInt, ParseScalarError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(self.src[start..self.pos].parse().expect("ascii digits"))
    }

    fn small_int(&mut self) -> Result<i64, ParseScalarError> {
        let neg = self.eat(b'-');
        let d = self.digits()?;
        let v: i64 = match i64::try_from(d) {
            Ok(v) => v,
            Err(_) => return self.err("integer out of range"),
        };
        Ok(if neg { -v } else { v })
    }

    fn expr(&mut self) -> Result<CycScalar, ParseScalarError> {
        let mut neg = false;
        if self.eat(b'-') {
            neg = true;
        } else {
            self.eat(b'+');
        }
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        loop {
            if self.eat(b'+') {
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<CycScalar, ParseScalarError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<CycScalar, ParseScalarError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.small_int()?;
            match base.pow(e) {
                Some(v) => Ok(v),
                None => self.err("negative power of a non-unit"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<CycScalar, ParseScalarError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits()?;
                let save = self.pos;
                if self.eat(b'/') {
                    if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        let d = self.digits()?;
                        if d.is_zero() {
                            return self.err("zero denominator");
                        }
                        return Ok(CycScalar::from_rational(BigRational::new(n, d)));
                    }
                    self.pos = save;
                    return self.err("expected denominator after '/'");
                }
                Ok(CycScalar::from_rational(BigRational::from_integer(n)))
            }
            Some(b'z') => {
                self.pos += 1;
                let m = self.digits()?;
                match u32::try_from(m) {
                    Ok(m) if (1..=100_000).contains(&m) => Ok(CycScalar::zeta(m, 1)),
                    _ => self.err("root-of-unity order out of range"),
                }
            }
            Some(c) => {
                let v = match c {
                    b'u' => Var::U,
                    b'x' => Var::X,
                    b'y' => Var::Y,
                    b'w' => Var::W,
                    _ => return self.err(format!("unexpected character {:?}", c as char)),
                };
                self.pos += 1;
                Ok(CycScalar::var(v, 1))
            }
            None => self.err("unexpected end of input"),
        }
    }
}

impl std::str::FromStr for CycScalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s, bytes: s.as_bytes(), pos: 0 };
        let v = p.expr()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(v)
    }
}

pub fn parse_scalar(s: &str) -> Result<CycScalar, ParseScalarError> {
    s.parse()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar_examples() {
        let v = parse_scalar("-1/2*z5^3*u^-2*x").unwrap();
        assert_eq!(v.to_string(), "-1/2*z5^3*u^-2*x");
        assert_eq!(parse_scalar("z5^5").unwrap(), CycScalar::one());
        assert_eq!(parse_scalar("(1 + x)^2").unwrap(), parse_scalar("1 + 2*x + x^2").unwrap());
        assert_eq!(parse_scalar("-(u)").unwrap(), -CycScalar::var(Var::U, 1));
        assert!(parse_scalar("0").unwrap().is_zero());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_scalar("").is_err());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("q").is_err());
        assert!(parse_scalar("(1 + x)^-1").is_err());
        assert!(parse_scalar("2 3").is_err());
    }

    #[test]
    fn display_round_trip() {
        for s in ["0", "1", "-7/3", "z7 + z7^3 - 2*u*y^-1", "(z5 - 1)^3*w^2 + x^-4"] {
            let v = parse_scalar(s).unwrap();
            assert_eq!(parse_scalar(&v.to_string()).unwrap(), v, "{s}");
        }
    }
}
