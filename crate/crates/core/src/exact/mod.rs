//! Exact arithmetic: rationals, word-sized prime fields and radical values.

pub mod factor;
pub mod prime_field;
pub mod radical;

use std::cmp::Ordering;

use thiserror::Error;

pub use prime_field::{Fp, PrimeField, DEFAULT_PRIMES};
pub use radical::{ComparisonBudget, RadicalValue};

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("comparison budget exceeded: needs {needed} bits, budget is {budget}")]
    ComparisonBudgetExceeded { needed: u64, budget: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} outside (2^30, 2^31)")]
    PrimeOutOfRange(u64),
    #[error("division by zero")]
    ZeroDivision,
    #[error("radical base must be positive, got {0}")]
    NonPositiveBase(String),
    #[error("even root of a negative value")]
    EvenRootOfNegative,
    #[error("parse error: {0}")]
    Parse(String),
}

pub fn radical_mul(a: &RadicalValue, b: &RadicalValue) -> RadicalValue {
    a.mul(b)
}

pub fn radical_cmp(a: &RadicalValue, b: &RadicalValue) -> Result<Ordering, ExactError> {
    a.try_cmp(b)
}

pub fn nth_power(a: &RadicalValue, n: u32) -> RadicalValue {
    a.nth_power(n)
}

/// Parse `"3"`, `"-2/5"` or `"7/1"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let s = s.trim();
    let bad = || ExactError::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: num_bigint::BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: num_bigint::BigInt = d.trim().parse().map_err(|_| bad())?;
            if num_traits::Zero::is_zero(&d) {
                return Err(ExactError::ZeroDivision);
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Serde adapter writing a rational as `"p/q"` (or `"p"`).
pub mod rational_text {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::{One, ToPrimitive};
    use proptest::prelude::*;

    fn radical() -> impl Strategy<Value = RadicalValue> {
        // Up to three factors over small bases with small rational exponents.
        let factor = (1i64..40, 1i64..12, -6i64..7, 1i64..5);
        (prop_oneof![Just(-1i8), Just(1i8), Just(1i8)], prop::collection::vec(factor, 0..4)).prop_map(
            |(sign, fs)| {
                let mut acc = RadicalValue::one();
                for (n, d, en, ed) in fs {
                    acc = acc.mul(&RadicalValue::root_of(n, d, en, ed).unwrap());
                }
                if sign < 0 {
                    acc.negate()
                } else {
                    acc
                }
            },
        )
    }

    /// Interval oracle: sum of exponent * ln(base) in f64 with an error radius.
    fn log_interval(v: &RadicalValue) -> (f64, f64) {
        let mut mid = 0.0;
        let mut rad = 0.0;
        for (b, e) in v.factors() {
            let t = b.to_f64().unwrap().ln() * e.to_f64().unwrap();
            mid += t;
            rad += t.abs() * 1e-12 + 1e-12;
        }
        (mid, rad)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1500))]

        #[test]
        fn cmp_agrees_with_interval_oracle(a in radical(), b in radical()) {
            let ord = a.try_cmp(&b).unwrap();
            if a.sign() != b.sign() {
                prop_assert_eq!(ord, a.sign().cmp(&b.sign()));
            } else {
                let (ma, ra) = log_interval(&a);
                let (mb, rb) = log_interval(&b);
                let flip = a.sign() < 0;
                if ma - ra > mb + rb {
                    prop_assert_eq!(ord, if flip { Ordering::Less } else { Ordering::Greater });
                } else if ma + ra < mb - rb {
                    prop_assert_eq!(ord, if flip { Ordering::Greater } else { Ordering::Less });
                }
            }
        }

        #[test]
        fn inverse_and_commutativity(a in radical(), b in radical(), c in radical()) {
            prop_assert_eq!(a.mul(&a.inverse().unwrap()), RadicalValue::one());
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn cmp_is_a_total_order(a in radical(), b in radical(), c in radical()) {
            let ab = a.try_cmp(&b).unwrap();
            prop_assert_eq!(b.try_cmp(&a).unwrap(), ab.reverse());
            let bc = b.try_cmp(&c).unwrap();
            if ab != Ordering::Greater && bc != Ordering::Greater {
                prop_assert_ne!(a.try_cmp(&c).unwrap(), Ordering::Greater);
            }
        }

        #[test]
        fn root_power_round_trip(a in radical(), n in 1u32..6) {
            let pos = a.abs();
            prop_assert_eq!(pos.nth_root(n).unwrap().nth_power(n), pos);
        }

        #[test]
        fn text_and_json_round_trip(a in radical()) {
            let text = a.to_string();
            prop_assert_eq!(text.parse::<RadicalValue>().unwrap(), a.clone());
            let json = serde_json::to_string(&a).unwrap();
            let back: RadicalValue = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), json);
        }
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("6/4").unwrap(), Rational::new(BigInt::from(3), BigInt::from(2)));
        assert_eq!(parse_rational(" 7 ").unwrap(), Rational::from_integer(BigInt::from(7)));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(Rational::one() > Rational::from_integer(BigInt::from(0)));
    }
}
