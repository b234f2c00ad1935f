//! Recursive-descent parser for polynomial strings such as `3*C1^2*L - 5/2*V2 + (x - 1)^3`.
//!
//! Identifiers must be declared up front; division is only allowed by constants.

use crate::error::{Error, Result};
use crate::poly::{Poly, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn parse_poly<S: AsRef<str>>(src: &str, names: &[S]) -> Result<Poly> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, names };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a, S> {
    src: &'a [u8],
    pos: usize,
    names: &'a [S],
}

impl<S: AsRef<str>> Parser<'_, S> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
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

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -&self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.factor()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(self.err("division only by non-zero constants"));
                    }
                    acc = acc.scale(&d.constant_term().recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-&self.factor()?);
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer overflow"))
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigInt = digits.parse().map_err(|_| self.err("bad number"))?;
                Ok(Poly::constant(self.nvars(), Rat::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.names.iter().position(|n| n.as_ref() == ident) {
                    Some(i) => Ok(Poly::var(self.nvars(), i)),
                    None => {
                        self.pos = start;
                        Err(self.err(&format!("unknown variable '{ident}'")))
                    }
                }
            }
            _ => Err(self.err("expected a number, variable or '('")),
        }
    }
}

/// Parses a single monomial like `c1^2*v1` into an exponent vector (coefficient must be 1).
pub fn parse_monomial<S: AsRef<str>>(src: &str, names: &[S]) -> Result<Vec<u32>> {
    let p = parse_poly(src, names)?;
    if p.len() != 1 {
        return Err(Error::Parse { pos: 0, msg: format!("'{src}' is not a monomial") });
    }
    let (m, c) = p.terms().next().unwrap();
    if !c.is_one() {
        return Err(Error::Parse { pos: 0, msg: format!("'{src}' carries a coefficient") });
    }
    Ok(m.clone())
}

/// Parses an exact rational such as `-7/3` or `12`.
pub fn parse_rational(src: &str) -> Result<Rat> {
    let p = parse_poly::<&str>(src, &[])?;
    debug_assert!(p.is_constant());
    if p.is_zero() {
        Ok(Rat::zero())
    } else {
        Ok(p.constant_term())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    #[test]
    fn parses_rationals_and_powers() {
        let names = ["a", "b"];
        let p = parse_poly("-(a - b)^2 + 3/4*a*b", &names).unwrap();
        assert_eq!(p.coeff(&[2, 0]), int(-1));
        assert_eq!(p.coeff(&[1, 1]), rat(11, 4));
        assert_eq!(p.coeff(&[0, 2]), int(-1));
    }

    #[test]
    fn rejects_unknown_names_and_garbage() {
        assert!(matches!(parse_poly("a + q", &["a"]), Err(Error::Parse { pos: 4, .. })));
        assert!(parse_poly("a +", &["a"]).is_err());
        assert!(parse_poly("a / a", &["a"]).is_err());
        assert!(parse_poly("(a", &["a"]).is_err());
    }

    #[test]
    fn monomials() {
        assert_eq!(parse_monomial("c1^2*v1", &["c1", "v1"]).unwrap(), vec![2, 1]);
        assert!(parse_monomial("2*c1", &["c1"]).is_err());
        assert!(parse_monomial("c1 + v1", &["c1", "v1"]).is_err());
        assert_eq!(parse_rational("-7/3").unwrap(), rat(-7, 3));
    }
}
