//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar:
//! ```text
//!   expr   := ['-'] term (('+' | '-') term)*
//!   term   := factor ('*' factor)*
//!   factor := primary ('^' nat)*
//!   primary:= rational | ident | '(' expr ')'
//! ```
//! `rational` is `digits` or `digits/digits`; identifiers are declared
//! variable names, or the reserved `t` over a function field. There is no
//! implicit multiplication. Errors carry the byte offset.

use crate::error::{Error, Result};
use crate::poly::{Poly, WeightedRing};
use crate::scalars::Scalar;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a WeightedRing,
}

/// Parses an expression into an exact polynomial over the ring.
pub fn parse_poly(src: &str, ring: &WeightedRing) -> Result<Poly> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, ring };
    p.skip_ws();
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::SyntaxError(p.pos));
    }
    Ok(poly)
}

/// Parses a scalar: an expression with no variables other than `t`.
pub fn parse_scalar(src: &str, field: crate::scalars::FieldId) -> Result<Scalar> {
    let ring = WeightedRing::new(field, vec!["__c".into()], vec![1])?;
    let poly = parse_poly(src, &ring)?;
    let mut value = Scalar::zero(field);
    for (m, c) in poly.terms() {
        if m.total_degree() != 0 {
            return Err(Error::InvalidInput("expected a scalar, found a variable".into()));
        }
        value = &value + c;
    }
    Ok(value)
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut negate_first = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            self.skip_ws();
            negate_first = true;
        }
        let mut acc = self.term()?;
        if negate_first {
            acc = acc.neg();
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    self.skip_ws();
                    let rhs = self.term()?;
                    acc = acc.add(&rhs);
                }
                Some(b'-') => {
                    self.pos += 1;
                    self.skip_ws();
                    let rhs = self.term()?;
                    acc = acc.sub(&rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                let rhs = self.factor()?;
                acc = acc.mul(&rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let mut base = self.primary()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'^') {
                self.pos += 1;
                self.skip_ws();
                let n = self.natural()?;
                base = base.pow(n);
            } else {
                return Ok(base);
            }
        }
    }

    fn primary(&mut self) -> Result<Poly> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(Error::SyntaxError(self.pos));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let q = self.rational()?;
                let s = Scalar::from_rational(q, self.ring.field())?;
                Ok(Poly::constant(self.ring, s))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self
                    .peek()
                    .map(|c| c.is_ascii_alphanumeric() || c == b'_')
                    .unwrap_or(false)
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii ident");
                if name == "t" {
                    let t = Scalar::t(self.ring.field())
                        .map_err(|_| Error::UnknownVariable("t".into()))?;
                    return Ok(Poly::constant(self.ring, t));
                }
                match self.ring.variable_index(name) {
                    Some(i) => Ok(Poly::variable(self.ring, i)),
                    None => Err(Error::UnknownVariable(name.to_string())),
                }
            }
            _ => Err(Error::SyntaxError(self.pos)),
        }
    }

    fn natural(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::SyntaxError(self.pos));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::SyntaxError(start))
    }

    fn rational(&mut self) -> Result<num_rational::BigRational> {
        let start = self.pos;
        while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::SyntaxError(self.pos));
        }
        let numer: num_bigint::BigInt = std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::SyntaxError(start))?;
        let mut denom = num_bigint::BigInt::from(1);
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let dstart = self.pos;
            while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
                self.pos += 1;
            }
            if dstart == self.pos {
                return Err(Error::SyntaxError(self.pos));
            }
            denom = std::str::from_utf8(&self.src[dstart..self.pos])
                .expect("ascii digits")
                .parse()
                .map_err(|_| Error::SyntaxError(dstart))?;
            if denom == num_bigint::BigInt::from(0) {
                return Err(Error::DivisionByZero);
            }
        }
        Ok(num_rational::BigRational::new(numer, denom))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FieldId;

    fn std_ring(vars: &[&str]) -> WeightedRing {
        WeightedRing::standard(FieldId::Rationals, vars.iter().map(|s| s.to_string()).collect())
            .unwrap()
    }

    #[test]
    fn fermat_cubic_round_trips() {
        let r = std_ring(&["x0", "x1", "x2"]);
        let f = parse_poly("x0^3 + x1^3 + x2^3", &r).unwrap();
        assert_eq!(f.num_terms(), 3);
        assert_eq!(f.weighted_degree().unwrap(), 3);
        let printed = f.to_string();
        assert_eq!(parse_poly(&printed, &r).unwrap(), f);
    }

    #[test]
    fn cone_family_over_qt() {
        let r = WeightedRing::standard(
            FieldId::RationalFunctions,
            vec!["x0".into(), "x1".into(), "x2".into(), "x3".into()],
        )
        .unwrap();
        let f = parse_poly("x0^3 + x1^3 + x2^3 - t*x3^3", &r).unwrap();
        assert_eq!(f.num_terms(), 4);
        assert_eq!(f.weighted_degree().unwrap(), 3);
        let printed = f.to_string();
        assert_eq!(parse_poly(&printed, &r).unwrap(), f);
    }

    #[test]
    fn syntax_error_offsets() {
        let r = std_ring(&["x0", "x1"]);
        assert_eq!(parse_poly("x0 + + x1", &r), Err(Error::SyntaxError(5)));
        assert_eq!(parse_poly("x0 +", &r), Err(Error::SyntaxError(4)));
        assert_eq!(
            parse_poly("x0 * y9", &r),
            Err(Error::UnknownVariable("y9".to_string()))
        );
    }

    #[test]
    fn t_is_rejected_outside_function_fields() {
        let r = std_ring(&["x0"]);
        assert_eq!(parse_poly("t*x0", &r), Err(Error::UnknownVariable("t".to_string())));
    }

    #[test]
    fn rationals_and_parens() {
        let r = std_ring(&["x", "y"]);
        let f = parse_poly("3*x^2*y - 1/2*(x + y)^2", &r).unwrap();
        let g = parse_poly("3*x^2*y - 1/2*x^2 - x*y - 1/2*y^2", &r).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn leading_minus_and_scalars() {
        let s = parse_scalar("-6*t", FieldId::RationalFunctions).unwrap();
        let k = FieldId::RationalFunctions;
        let expected = Scalar::t(k).unwrap().checked_mul(&Scalar::from_int(-6, k)).unwrap();
        assert_eq!(s, expected);
        let c = parse_scalar("2 + t", k).unwrap();
        assert_eq!(c.t_order_and_unit().unwrap().0, 0);
    }
}
