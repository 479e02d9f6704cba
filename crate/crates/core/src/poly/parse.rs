//! Text format for polynomials.
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := coeff | var ('^' uint)? | '(' poly ')' ('^' uint)?
//! coeff  := int ('/' uint)?
//! ```
//!
//! Parenthesized products and powers are expanded on the fly, so factored
//! forms can be entered verbatim.

use std::sync::Arc;

use num_bigint::BigInt;

use super::polynomial::{Polynomial, Ring};
use crate::arith::{Field, Rational};
use crate::error::{Error, Result};

pub fn parse_polynomial<F: Field>(text: &str, ring: &Arc<Ring<F>>) -> Result<Polynomial<F>> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ring };
    let poly = p.poly()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a, F: Field> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<Ring<F>>,
}

impl<F: Field> Parser<'_, F> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax { position: self.pos, message: message.to_string() }
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn poly(&mut self) -> Result<Polynomial<F>> {
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            self.eat(b'+');
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            if self.eat(b'+') {
                let t = self.term()?;
                acc = acc.add(&t)?;
            } else if self.eat(b'-') {
                let t = self.term()?;
                acc = acc.sub(&t)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial<F>> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let f = self.factor()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial<F>> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.poly()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                let e = self.exponent()?;
                inner.pow(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let q = self.coefficient()?;
                let field = self.ring.field();
                Ok(Polynomial::constant(self.ring, field.from_rational(&q)?))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let idx = self.ring.var_index(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
                let e = self.exponent()?;
                let mut exps = vec![0u16; self.ring.nvars()];
                exps[idx] = u16::try_from(e).map_err(|_| Error::ExponentOverflow)?;
                Ok(Polynomial::monomial(self.ring, self.ring.field().one(), super::Monomial::from_vec(exps)))
            }
            Some(_) => Err(self.error("expected a coefficient, variable or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn exponent(&mut self) -> Result<u32> {
        if !self.eat(b'^') {
            return Ok(1);
        }
        self.skip_ws();
        let Some(digits) = self.digits() else {
            return Err(self.error("expected exponent"));
        };
        digits.parse().map_err(|_| self.error("exponent too large"))
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            None
        } else {
            Some(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
        }
    }

    fn coefficient(&mut self) -> Result<Rational> {
        let num: BigInt = self.digits().expect("caller checked digit").parse().expect("digits");
        let save = self.pos;
        if self.eat(b'/') {
            self.skip_ws();
            match self.digits() {
                Some(d) => {
                    let den: BigInt = d.parse().expect("digits");
                    return Rational::new(num, den).map_err(|_| self.error("zero denominator"));
                }
                None => {
                    self.pos = save;
                    return Err(self.error("expected denominator after `/`"));
                }
            }
        }
        Ok(Rational::from_integer(num))
    }
}

/// Canonical text form: terms in descending order, `*` between factors,
/// unit coefficients omitted, prime-field coefficients as residues.
pub fn print_polynomial<F: Field>(f: &Polynomial<F>) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let field = f.field();
    let vars = f.ring().vars();
    let mut out = String::new();
    for (k, (c, m)) in f.terms().iter().enumerate() {
        let mut cs = field.format(c);
        let negative = cs.starts_with('-');
        if negative {
            cs.remove(0);
        }
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        if cs != "1" || m.is_one() {
            factors.push(cs);
        }
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(vars[i].clone()),
                _ => factors.push(format!("{}^{}", vars[i], e)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{PrimeField, Rationals};
    use crate::poly::{Monomial, MonomialOrder};

    fn qring(vars: &[&str]) -> Arc<Ring<Rationals>> {
        Ring::new(vars, Rationals, MonomialOrder::GrevLex).unwrap()
    }

    #[test]
    fn monomial_text() {
        let r = qring(&["x1", "x2"]);
        let f = parse_polynomial("x1^3*x2^2", &r).unwrap();
        assert_eq!(f.terms().len(), 1);
        assert_eq!(f.leading_monomial().unwrap(), &Monomial::new(&[3, 2]));
    }

    #[test]
    fn canonical_round_trip() {
        let r = qring(&["x1", "x2"]);
        let f = parse_polynomial("3*x1 - 5/7*x2 + 1", &r).unwrap();
        let s = print_polynomial(&f);
        assert_eq!(s, "3*x1 - 5/7*x2 + 1");
        assert_eq!(parse_polynomial(&s, &r).unwrap(), f);
    }

    #[test]
    fn expands_factored_forms() {
        let r = qring(&["x", "y", "xb", "yb"]);
        let f = parse_polynomial("(x - y)*(yb - xb)", &r).unwrap();
        let g = parse_polynomial("x*yb - x*xb - y*yb + y*xb", &r).unwrap();
        assert_eq!(f, g);
        assert_eq!(f.len(), 4);
        let h = parse_polynomial("-(x+y)^2 + 2*x*y", &r).unwrap();
        assert_eq!(print_polynomial(&h), "-x^2 - y^2");
    }

    #[test]
    fn prime_field_residues() {
        let r = Ring::new(&["x1", "x2"], PrimeField::new(7).unwrap(), MonomialOrder::GrevLex).unwrap();
        let f = parse_polynomial("3/2*x1 - x2", &r).unwrap();
        assert_eq!(print_polynomial(&f), "5*x1 + 6*x2");
    }

    #[test]
    fn errors_carry_positions() {
        let r = qring(&["x", "y"]);
        assert_eq!(parse_polynomial("x + z", &r), Err(Error::UnknownVariable("z".into())));
        match parse_polynomial("x + * y", &r) {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_polynomial("(x + y", &r), Err(Error::Syntax { .. })));
        assert!(matches!(parse_polynomial("x y", &r), Err(Error::Syntax { .. })));
        assert!(matches!(parse_polynomial("", &r), Err(Error::Syntax { .. })));
    }

    #[test]
    fn zero_prints_as_zero() {
        let r = qring(&["x"]);
        let f = parse_polynomial("x - x", &r).unwrap();
        assert!(f.is_zero());
        assert_eq!(print_polynomial(&f), "0");
    }
}
