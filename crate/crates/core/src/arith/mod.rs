//! Coefficient fields: word-sized prime fields and exact rationals behind a
//! single [`Field`] abstraction.

mod prime;
mod rational;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use prime::{is_prime, PrimeField, MAX_MODULUS};
pub use rational::{Rational, Rationals};

/// Identifies the coefficient domain of a polynomial or basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldDescriptor {
    PrimeField(u64),
    Rationals,
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::PrimeField(p) => write!(f, "Fp:{p}"),
            FieldDescriptor::Rationals => f.write_str("Q"),
        }
    }
}

impl FromStr for FieldDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" || s == "QQ" {
            return Ok(FieldDescriptor::Rationals);
        }
        let p = s
            .strip_prefix("Fp:")
            .or_else(|| s.strip_prefix("GF:"))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown field `{s}`")))?;
        let p: u64 = p
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad modulus `{p}`")))?;
        PrimeField::new(p)?;
        Ok(FieldDescriptor::PrimeField(p))
    }
}

/// A coefficient field. Elements carry no context; the field value does.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + std::hash::Hash + Send + Sync;

    fn descriptor(&self) -> FieldDescriptor;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    /// Image of a rational number; fails when the denominator is not
    /// invertible in this field.
    fn from_rational(&self, q: &Rational) -> Result<Self::Elem>;

    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    /// Scalar that brings a coefficient list into canonical form: monic for
    /// prime fields, integer-primitive with positive leading coefficient for
    /// the rationals. `coeffs` must be non-empty and start with the leading
    /// coefficient.
    fn normalizer(&self, coeffs: &[&Self::Elem]) -> Self::Elem;

    /// Cofactors `(a, b)` with `a * c = b * lc`, used to cancel a leading
    /// coefficient `c` against a reducer with leading coefficient `lc`.
    /// Fields with expensive division return a non-unit `a`.
    fn reduction_cofactors(&self, c: &Self::Elem, lc: &Self::Elem) -> (Self::Elem, Self::Elem) {
        (self.one(), self.div(c, lc).expect("leading coefficient is nonzero"))
    }

    /// Whether basis elements are kept monic during the computation.
    fn monic_in_engine(&self) -> bool {
        true
    }
}

/// `field_inv` as a free function over any field.
pub fn field_inv<F: Field>(field: &F, a: &F::Elem) -> Result<F::Elem> {
    field.inv(a)
}

/// Maps `q` into `F_p`; fails with [`Error::DenominatorVanishes`] when
/// `p | den(q)`.
pub fn reduce_rational_mod_p(q: &Rational, p: u64) -> Result<u64> {
    PrimeField::new(p)?.from_rational(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_round_trip() {
        for s in ["Q", "Fp:7", "Fp:32003"] {
            let d: FieldDescriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("Fp:8".parse::<FieldDescriptor>().is_err());
        assert!("R".parse::<FieldDescriptor>().is_err());
    }

    #[test]
    fn field_inv_examples() {
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(field_inv(&f7, &1).unwrap(), 1);
        assert_eq!(field_inv(&f7, &3).unwrap(), 5);
        assert_eq!(field_inv(&f7, &0), Err(Error::ZeroInversion));
        let q = Rationals;
        let two_thirds: Rational = "2/3".parse().unwrap();
        assert_eq!(field_inv(&q, &two_thirds).unwrap().to_string(), "3/2");
        assert_eq!(field_inv(&q, &Rational::zero()), Err(Error::ZeroInversion));
    }

    #[test]
    fn reduce_examples() {
        let q: Rational = "3/2".parse().unwrap();
        assert_eq!(reduce_rational_mod_p(&q, 7).unwrap(), 5);
        assert_eq!(reduce_rational_mod_p(&Rational::zero(), 101).unwrap(), 0);
        assert_eq!(reduce_rational_mod_p(&q, 2), Err(Error::DenominatorVanishes(2)));
        let neg: Rational = "-1/3".parse().unwrap();
        assert_eq!(reduce_rational_mod_p(&neg, 7).unwrap(), 2);
    }
}
