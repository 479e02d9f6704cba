use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{Field, FieldDescriptor, Rational};
use crate::error::{Error, Result};

/// Exclusive upper bound on supported moduli; products of two residues fit
/// in a `u128` intermediate.
pub const MAX_MODULUS: u64 = 1 << 62;

/// `Z/pZ` for a word-sized prime `p`. Elements are canonical residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
    // products of two residues fit in a u64
    narrow: bool,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..MAX_MODULUS).contains(&p) {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p, narrow: p < (1 << 32) })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn elem(&self, v: u64) -> u64 {
        v % self.p
    }

    /// Centered representative in `(-p/2, p/2]`.
    pub fn to_signed(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::PrimeField(self.p)
    }

    #[inline]
    fn zero(&self) -> u64 {
        0
    }

    #[inline]
    fn one(&self) -> u64 {
        1
    }

    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        if self.narrow {
            (a * b) % self.p
        } else {
            mul_mod(*a, *b, self.p)
        }
    }

    fn inv(&self, a: &u64) -> Result<u64> {
        if *a == 0 {
            return Err(Error::ZeroInversion);
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(t0.rem_euclid(self.p as i128) as u64)
    }

    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    fn from_bigint(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.p)).to_u64().expect("residue fits")
    }

    fn from_rational(&self, q: &Rational) -> Result<u64> {
        let den = self.from_bigint(q.denom());
        if den == 0 {
            return Err(Error::DenominatorVanishes(self.p));
        }
        let num = self.from_bigint(q.numer());
        Ok(self.mul(&num, &self.inv(&den)?))
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<u64> {
        let q: Rational = s.parse()?;
        self.from_rational(&q)
    }

    fn normalizer(&self, coeffs: &[&u64]) -> u64 {
        self.inv(coeffs[0]).expect("leading coefficient is nonzero")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..5000u64 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn known_primes() {
        for p in [32003, 251, 8191, (1 << 15) + 3, (1 << 31) + 11, (1 << 61) - 1] {
            assert!(is_prime(p), "{p}");
        }
        // strong pseudoprimes to several small bases
        for c in [3215031751u64, 3825123056546413051, 341550071728321] {
            assert!(!is_prime(c), "{c}");
        }
    }

    #[test]
    fn modulus_limits() {
        assert_eq!(PrimeField::new(1), Err(Error::ModulusOutOfRange(1)));
        assert_eq!(PrimeField::new(9), Err(Error::NotPrime(9)));
        assert!(PrimeField::new(2).is_ok());
        // above the limit, rejected before any primality test
        assert_eq!(
            PrimeField::new((1 << 62) + 135),
            Err(Error::ModulusOutOfRange((1 << 62) + 135))
        );
    }

    #[test]
    fn wide_modulus_arithmetic() {
        let p = (1u64 << 61) - 1;
        let f = PrimeField::new(p).unwrap();
        let a = p - 2;
        let b = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &b), 1);
        assert_eq!(f.add(&a, &5), 3);
        assert_eq!(f.sub(&3, &5), p - 2);
    }

    #[test]
    fn centered_representative() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.to_signed(6), -1);
        assert_eq!(f.to_signed(3), 3);
    }
}
