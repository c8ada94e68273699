use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{factor::is_prime_u64, ExactError, Rational};

/// Five fixed 31-bit primes (the largest primes below 2^31).
pub const DEFAULT_PRIMES: [u64; 5] = [2147483647, 2147483629, 2147483587, 2147483579, 2147483563];

/// A prime field `Z/pZ` with `2^30 < p < 2^31`.
///
/// The upper limit keeps every product of two residues below 2^62, which the
/// elimination kernels rely on for lazy reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u64,
}

impl TryFrom<u64> for PrimeField {
    type Error = ExactError;

    fn try_from(p: u64) -> Result<Self, Self::Error> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p
    }
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, ExactError> {
        if p <= 1 << 30 || p >= 1 << 31 {
            return Err(ExactError::PrimeOutOfRange(p));
        }
        if !is_prime_u64(p) {
            return Err(ExactError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn defaults() -> Vec<PrimeField> {
        DEFAULT_PRIMES.iter().map(|&p| PrimeField { p }).collect()
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse by Fermat's little theorem; `None` for zero.
    pub fn inv(self, a: u64) -> Option<u64> {
        if a % self.p == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    pub fn from_i64(self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn from_bigint(self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }

    /// Reduce a rational; `None` when the denominator vanishes mod p.
    pub fn from_rational(self, q: &Rational) -> Option<u64> {
        let den = self.from_bigint(q.denom());
        let inv = self.inv(den)?;
        Some(self.mul(self.from_bigint(q.numer()), inv))
    }

    /// Centered lift of a residue, handy for printing.
    pub fn lift(self, a: u64) -> BigInt {
        if a > self.p / 2 {
            BigInt::from_biguint(Sign::Minus, (self.p - a).into())
        } else {
            BigInt::from(a)
        }
    }

    pub fn element(self, v: u64) -> Fp {
        Fp { value: v % self.p, field: self }
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// A residue tagged with its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    field: PrimeField,
}

impl Fp {
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn field(self) -> PrimeField {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value.is_zero()
    }

    pub fn pow(self, exp: u64) -> Fp {
        Fp { value: self.field.pow(self.value, exp), field: self.field }
    }

    pub fn inv(self) -> Option<Fp> {
        self.field.inv(self.value).map(|value| Fp { value, field: self.field })
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.field, rhs.field);
        Fp { value: self.field.add(self.value, rhs.value), field: self.field }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.field, rhs.field);
        Fp { value: self.field.sub(self.value, rhs.value), field: self.field }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.field, rhs.field);
        Fp { value: self.field.mul(self.value, rhs.value), field: self.field }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp { value: self.field.neg(self.value), field: self.field }
    }
}
