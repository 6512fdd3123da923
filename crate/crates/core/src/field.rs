//! Exact scalar fields: the rationals and prime fields.
//!
//! Every computation in the crate is generic over [`Field`]. The two
//! implementations are [`Rationals`] (arbitrary-precision, the default) and
//! [`PrimeField`] (integers modulo a prime, used to probe characteristic
//! hypotheses). Field elements are plain values; the field itself carries
//! whatever context is needed (the modulus).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + std::hash::Hash + Ord + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// None exactly when `a` is zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// 0 for the rationals, p for a prime field.
    fn characteristic(&self) -> u64;
    /// Embed an integer. The receiver carries the field context (modulus),
    /// so these constructors are methods.
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Embed num/den; fails when den vanishes in the field.
    #[allow(clippy::wrong_self_convention)]
    fn from_ratio(&self, num: i64, den: i64) -> Result<Self::Elem>;
    fn display(&self, a: &Self::Elem) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let binv = self
            .inv(b)
            .ok_or_else(|| Error::Field("division by zero".into()))?;
        Ok(self.mul(a, &binv))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// The field of rational numbers with arbitrary-precision arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }
    fn from_ratio(&self, num: i64, den: i64) -> Result<BigRational> {
        if den == 0 {
            return Err(Error::Field("zero denominator".into()));
        }
        Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
    fn display(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else if a.is_negative() {
            format!("-{}/{}", a.numer().magnitude(), a.denom())
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

/// The prime field of order `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || !is_prime(p) {
            return Err(Error::Field(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn order(&self) -> u64 {
        self.p
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2) mod p.
        let mut base = *a as u128;
        let mut exp = self.p - 2;
        let m = self.p as u128;
        let mut acc: u128 = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        Some(acc as u64)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn from_ratio(&self, num: i64, den: i64) -> Result<u64> {
        let d = self.from_i64(den);
        let dinv = self
            .inv(&d)
            .ok_or_else(|| Error::Field(format!("denominator {den} vanishes mod {}", self.p)))?;
        Ok(self.mul(&self.from_i64(num), &dinv))
    }
    fn display(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// Parse an exact rational literal `n`, `-n`, or `p/q` into a field element.
pub fn parse_scalar<F: Field>(field: &F, text: &str) -> Result<F::Elem> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: i64 = num
        .parse()
        .map_err(|_| Error::Field(format!("bad rational literal `{text}`")))?;
    let d: i64 = den
        .parse()
        .map_err(|_| Error::Field(format!("bad rational literal `{text}`")))?;
    field.from_ratio(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_display_round_trip() {
        let f = Rationals;
        let x = f.from_ratio(-1, 3).unwrap();
        assert_eq!(f.display(&x), "-1/3");
        assert_eq!(parse_scalar(&f, "-1/3").unwrap(), x);
        assert_eq!(f.display(&f.from_i64(7)), "7");
    }

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7 {
            let inv = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), 1);
        }
        assert!(f.inv(&0).is_none());
        assert!(PrimeField::new(6).is_err());
    }

    #[test]
    fn char_two_rejects_half() {
        let f = PrimeField::new(2).unwrap();
        assert!(f.from_ratio(1, 2).is_err());
    }
}
