//! Signed products of rational powers of positive integers.
//!
//! Every value is kept as `sign * prod base^exp` with integer bases `>= 2` and
//! nonzero rational exponents. Bases are primes whenever trial division and
//! Miller-Rabin can tell; otherwise they are pairwise-coprime opaque integers
//! that are not perfect powers. Ordering never touches floating point: both
//! sides are raised to a common power that clears every exponent denominator
//! and the resulting integers are compared.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::factor::{factor, perfect_power, TRIAL_DIVISION_BOUND};
use super::{ExactError, Rational};

/// Size limit, in bits, for the integers built while comparing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComparisonBudget(pub u64);

impl Default for ComparisonBudget {
    fn default() -> Self {
        ComparisonBudget(1 << 16)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RadicalValue {
    sign: i8,
    factors: BTreeMap<BigUint, Rational>,
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn add_exponent(map: &mut BTreeMap<BigUint, Rational>, base: BigUint, exp: Rational) {
    if exp.is_zero() || base.is_one() {
        return;
    }
    let slot = map.entry(base).or_insert_with(Rational::zero);
    *slot += exp;
}

/// Add `base^exp` where `base` is already free of small prime factors.
fn add_reduced(map: &mut BTreeMap<BigUint, Rational>, base: BigUint, exp: Rational) {
    if base.is_one() || exp.is_zero() {
        return;
    }
    let (root, k) = perfect_power(&base);
    add_exponent(map, root, exp * Rational::from_integer(BigInt::from(k)));
}

/// Split opaque bases until they are pairwise coprime.
fn refine_coprime(map: &mut BTreeMap<BigUint, Rational>) {
    let bound = BigUint::from(TRIAL_DIVISION_BOUND);
    loop {
        map.retain(|_, e| !e.is_zero());
        let large: Vec<&BigUint> = map.keys().filter(|b| **b > bound).collect();
        let mut split = None;
        'search: for (i, a) in large.iter().enumerate() {
            for b in &large[i + 1..] {
                let g = a.gcd(b);
                if !g.is_one() {
                    split = Some(((*a).clone(), (*b).clone(), g));
                    break 'search;
                }
            }
        }
        let Some((a, b, g)) = split else { break };
        let ea = map.remove(&a).unwrap();
        let eb = map.remove(&b).unwrap();
        add_reduced(map, &a / &g, ea.clone());
        add_reduced(map, &b / &g, eb.clone());
        add_reduced(map, g, ea + eb);
    }
}

fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        n.to_f64().unwrap().ln()
    } else {
        let shift = bits - 64;
        (n >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

impl RadicalValue {
    pub fn zero() -> Self {
        RadicalValue { sign: 0, factors: BTreeMap::new() }
    }

    pub fn one() -> Self {
        RadicalValue { sign: 1, factors: BTreeMap::new() }
    }

    /// Build from a sign and integer bases with rational exponents.
    fn from_integer_powers<I>(sign: i8, raw: I) -> Self
    where
        I: IntoIterator<Item = (BigUint, Rational)>,
    {
        if sign == 0 {
            return Self::zero();
        }
        let mut map = BTreeMap::new();
        for (base, exp) in raw {
            if exp.is_zero() || base.is_one() {
                continue;
            }
            for (p, k) in factor(&base) {
                add_exponent(&mut map, p, exp.clone() * Rational::from_integer(BigInt::from(k)));
            }
        }
        refine_coprime(&mut map);
        RadicalValue { sign: sign.signum(), factors: map }
    }

    pub fn from_rational(q: &Rational) -> Self {
        let sign = match q.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        };
        let num = q.numer().magnitude().clone();
        let den = q.denom().magnitude().clone();
        Self::from_integer_powers(sign, [(num, Rational::one()), (den, -Rational::one())])
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&rat(num, den))
    }

    /// `base^exp` for a positive rational base.
    pub fn power(base: &Rational, exp: &Rational) -> Result<Self, ExactError> {
        if !base.is_positive() {
            if base.is_zero() && exp.is_positive() {
                return Ok(Self::zero());
            }
            return Err(ExactError::NonPositiveBase(base.to_string()));
        }
        let num = base.numer().magnitude().clone();
        let den = base.denom().magnitude().clone();
        Ok(Self::from_integer_powers(1, [(num, exp.clone()), (den, -exp.clone())]))
    }

    /// `(num/den)^(exp_num/exp_den)` from machine integers.
    pub fn root_of(num: i64, den: i64, exp_num: i64, exp_den: i64) -> Result<Self, ExactError> {
        if den == 0 || exp_den == 0 {
            return Err(ExactError::ZeroDivision);
        }
        Self::power(&rat(num, den), &rat(exp_num, exp_den))
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn is_positive(&self) -> bool {
        self.sign > 0
    }

    /// Canonical `(base, exponent)` pairs in increasing base order.
    pub fn factors(&self) -> impl Iterator<Item = (&BigUint, &Rational)> {
        self.factors.iter()
    }

    pub fn abs(&self) -> Self {
        RadicalValue { sign: self.sign.abs(), factors: self.factors.clone() }
    }

    pub fn negate(&self) -> Self {
        RadicalValue { sign: -self.sign, factors: self.factors.clone() }
    }

    /// The exact rational value, if every exponent is an integer.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.sign == 0 {
            return Some(Rational::zero());
        }
        let mut acc = Rational::one();
        for (b, e) in &self.factors {
            if !e.is_integer() {
                return None;
            }
            let k = e.to_integer().to_i32()?;
            let b = Rational::from_integer(BigInt::from(b.clone()));
            acc *= num_traits::pow::Pow::pow(&b, k);
        }
        if self.sign < 0 {
            acc = -acc;
        }
        Some(acc)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.sign == 0 || other.sign == 0 {
            return Self::zero();
        }
        let mut map = self.factors.clone();
        for (b, e) in &other.factors {
            add_exponent(&mut map, b.clone(), e.clone());
        }
        refine_coprime(&mut map);
        RadicalValue { sign: self.sign * other.sign, factors: map }
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        if self.sign == 0 {
            return Err(ExactError::ZeroDivision);
        }
        let factors = self.factors.iter().map(|(b, e)| (b.clone(), -e.clone())).collect();
        Ok(RadicalValue { sign: self.sign, factors })
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        self.mul(&Self::from_rational(q))
    }

    /// Integer power, negative exponents allowed for nonzero values.
    pub fn powi(&self, k: i64) -> Result<Self, ExactError> {
        if k == 0 {
            return Ok(Self::one());
        }
        if self.sign == 0 {
            return if k > 0 { Ok(Self::zero()) } else { Err(ExactError::ZeroDivision) };
        }
        let kq = Rational::from_integer(BigInt::from(k));
        let factors = self.factors.iter().map(|(b, e)| (b.clone(), e * &kq)).collect();
        let sign = if k % 2 == 0 { 1 } else { self.sign };
        Ok(RadicalValue { sign, factors })
    }

    pub fn nth_power(&self, n: u32) -> Self {
        self.powi(n as i64).expect("non-negative power never divides by zero")
    }

    pub fn nth_root(&self, n: u32) -> Result<Self, ExactError> {
        if n == 0 {
            return Err(ExactError::ZeroDivision);
        }
        if self.sign < 0 && n % 2 == 0 {
            return Err(ExactError::EvenRootOfNegative);
        }
        let nq = Rational::from_integer(BigInt::from(n));
        let factors = self.factors.iter().map(|(b, e)| (b.clone(), e / &nq)).collect();
        Ok(RadicalValue { sign: self.sign, factors })
    }

    /// `self^e` for a positive value and rational exponent.
    pub fn pow_rational(&self, e: &Rational) -> Result<Self, ExactError> {
        if self.sign < 0 && !e.is_integer() {
            return Err(ExactError::EvenRootOfNegative);
        }
        if self.sign == 0 {
            return if e.is_positive() { Ok(Self::zero()) } else { Err(ExactError::ZeroDivision) };
        }
        if e.is_integer() {
            return self.powi(e.to_integer().to_i64().ok_or(ExactError::ZeroDivision)?);
        }
        let factors = self.factors.iter().map(|(b, x)| (b.clone(), x * e)).collect();
        Ok(RadicalValue { sign: 1, factors })
    }

    pub fn cmp_with(&self, other: &Self, budget: ComparisonBudget) -> Result<Ordering, ExactError> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => {}
            ord => return Ok(ord),
        }
        if self.sign == 0 {
            return Ok(Ordering::Equal);
        }
        let ord = compare_magnitudes(&self.factors, &other.factors, budget)?;
        Ok(if self.sign < 0 { ord.reverse() } else { ord })
    }

    /// Exact comparison under the default budget.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, ExactError> {
        self.cmp_with(other, ComparisonBudget::default())
    }

    /// Natural log of the magnitude; for estimates and display only.
    pub fn ln_abs(&self) -> f64 {
        if self.sign == 0 {
            return f64::NEG_INFINITY;
        }
        self.factors.iter().map(|(b, e)| ln_biguint(b) * e.to_f64().unwrap_or(f64::NAN)).sum()
    }

    pub fn to_f64(&self) -> f64 {
        self.sign as f64 * self.ln_abs().exp()
    }

    /// Smallest integer `>= self`, decided exactly.
    pub fn ceil(&self, budget: ComparisonBudget) -> Result<BigInt, ExactError> {
        if let Some(q) = self.to_rational() {
            return Ok(q.ceil().to_integer());
        }
        let estimate = self.to_f64();
        let mut guess = if estimate.is_finite() {
            BigInt::from(estimate.ceil() as i64)
        } else {
            BigInt::zero()
        };
        let as_value = |k: &BigInt| RadicalValue::from_rational(&Rational::from_integer(k.clone()));
        // Invariant after the loops: guess - 1 < self <= guess.
        while self.cmp_with(&as_value(&guess), budget)? == Ordering::Greater {
            guess += 1;
        }
        while self.cmp_with(&as_value(&(&guess - 1)), budget)? != Ordering::Greater {
            guess -= 1;
        }
        Ok(guess)
    }

    pub fn floor(&self, budget: ComparisonBudget) -> Result<BigInt, ExactError> {
        Ok(-self.negate().ceil(budget)?)
    }

    /// Split into a rational coefficient and radicals `R_q^(1/q)` grouped by denominator.
    pub fn display_parts(&self) -> (Rational, BTreeMap<BigInt, BigUint>) {
        let mut coeff = Rational::one();
        let mut radicals: BTreeMap<BigInt, BigUint> = BTreeMap::new();
        for (b, e) in &self.factors {
            let whole = e.floor();
            let frac = e - &whole;
            let k = whole.to_integer().to_i32().expect("exponent fits in i32");
            let bq = Rational::from_integer(BigInt::from(b.clone()));
            coeff *= num_traits::pow::Pow::pow(&bq, k);
            if !frac.is_zero() {
                let q = frac.denom().clone();
                let a = frac.numer().to_u32().expect("numerator below denominator");
                *radicals.entry(q).or_insert_with(BigUint::one) *= b.pow(a);
            }
        }
        if self.sign < 0 {
            coeff = -coeff;
        }
        (coeff, radicals)
    }
}

fn compare_magnitudes(
    a: &BTreeMap<BigUint, Rational>,
    b: &BTreeMap<BigUint, Rational>,
    budget: ComparisonBudget,
) -> Result<Ordering, ExactError> {
    // Work with the quotient a / b and compare it with 1.
    let mut quotient = a.clone();
    for (base, e) in b {
        add_exponent(&mut quotient, base.clone(), -e.clone());
    }
    refine_coprime(&mut quotient);
    if quotient.is_empty() {
        return Ok(Ordering::Equal);
    }
    let common = quotient.values().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
    let mut bits = 0u64;
    let mut scaled = Vec::with_capacity(quotient.len());
    for (base, e) in &quotient {
        let k = (e * Rational::from_integer(common.clone())).to_integer();
        let mag = k.magnitude().to_u64().ok_or(ExactError::ComparisonBudgetExceeded {
            needed: u64::MAX,
            budget: budget.0,
        })?;
        bits = bits.saturating_add(mag.saturating_mul(base.bits()));
        scaled.push((base, k.is_positive(), mag));
    }
    if bits > budget.0 {
        return Err(ExactError::ComparisonBudgetExceeded { needed: bits, budget: budget.0 });
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (base, positive, mag) in scaled {
        let p = base.pow(mag as u32);
        if positive {
            num *= p;
        } else {
            den *= p;
        }
    }
    Ok(num.cmp(&den))
}

impl std::ops::Mul for &RadicalValue {
    type Output = RadicalValue;
    fn mul(self, rhs: &RadicalValue) -> RadicalValue {
        RadicalValue::mul(self, rhs)
    }
}

impl std::ops::Mul for RadicalValue {
    type Output = RadicalValue;
    fn mul(self, rhs: RadicalValue) -> RadicalValue {
        RadicalValue::mul(&self, &rhs)
    }
}

impl From<Rational> for RadicalValue {
    fn from(q: Rational) -> Self {
        Self::from_rational(&q)
    }
}

impl fmt::Display for RadicalValue {
    /// Prints e.g. `2*3^(1/2)/11`; the output parses back with `FromStr`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == 0 {
            return write!(f, "0");
        }
        let (coeff, radicals) = self.display_parts();
        let num = coeff.numer();
        let den = coeff.denom();
        let mut parts = Vec::new();
        if radicals.is_empty() || !num.magnitude().is_one() {
            parts.push(num.magnitude().to_string());
        }
        for (q, r) in &radicals {
            parts.push(format!("{r}^(1/{q})"));
        }
        if num.is_negative() {
            write!(f, "-")?;
        }
        write!(f, "{}", parts.join("*"))?;
        if !den.is_one() {
            write!(f, "/{den}")?;
        }
        Ok(())
    }
}

/// Parser for the display syntax: `[-] factor (('*'|'/') factor)*` where a
/// factor is an integer or a parenthesized rational, optionally raised to
/// `^(p/q)` or `^k`.
struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ExactError {
        ExactError::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt, ExactError> {
        self.skip_ws();
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        text.parse::<BigInt>().map_err(|_| self.err("expected integer"))
    }

    fn rational(&mut self) -> Result<Rational, ExactError> {
        let num = self.integer()?;
        if self.eat(b'/') {
            let den = self.integer()?;
            if den.is_zero() {
                return Err(ExactError::ZeroDivision);
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    fn factor(&mut self) -> Result<RadicalValue, ExactError> {
        let base = if self.eat(b'(') {
            let q = self.rational()?;
            if !self.eat(b')') {
                return Err(self.err("expected ')'"));
            }
            q
        } else {
            Rational::from_integer(self.integer()?)
        };
        if self.eat(b'^') {
            let exp = if self.eat(b'(') {
                let e = self.rational()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                e
            } else {
                Rational::from_integer(self.integer()?)
            };
            if base.is_negative() {
                RadicalValue::from_rational(&base).pow_rational(&exp)
            } else {
                RadicalValue::power(&base, &exp)
            }
        } else {
            Ok(RadicalValue::from_rational(&base))
        }
    }

    fn expr(&mut self) -> Result<RadicalValue, ExactError> {
        let negative = self.eat(b'-');
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.factor()?);
            } else if self.eat(b'/') {
                acc = acc.div(&self.factor()?)?;
            } else {
                break;
            }
        }
        self.skip_ws();
        if self.pos != self.s.len() {
            return Err(self.err("trailing input"));
        }
        Ok(if negative { acc.negate() } else { acc })
    }
}

impl FromStr for RadicalValue {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parser { s: s.as_bytes(), pos: 0 }.expr()
    }
}

/// JSON integers stay numbers while they fit in `i64`, otherwise decimal strings.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for JsonInt {
    fn from(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(s) => JsonInt::Small(s),
            None => JsonInt::Big(v.to_string()),
        }
    }
}

impl TryFrom<JsonInt> for BigInt {
    type Error = ExactError;
    fn try_from(v: JsonInt) -> Result<Self, Self::Error> {
        match v {
            JsonInt::Small(s) => Ok(BigInt::from(s)),
            JsonInt::Big(s) => s.parse().map_err(|_| ExactError::Parse(format!("bad integer {s:?}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FactorJson {
    base_num: JsonInt,
    base_den: JsonInt,
    exp_num: JsonInt,
    exp_den: JsonInt,
}

#[derive(Serialize, Deserialize)]
struct RadicalJson {
    sign: i8,
    factors: Vec<FactorJson>,
}

impl Serialize for RadicalValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let one = BigInt::one();
        let factors = self
            .factors
            .iter()
            .map(|(b, e)| FactorJson {
                base_num: (&BigInt::from(b.clone())).into(),
                base_den: (&one).into(),
                exp_num: e.numer().into(),
                exp_den: e.denom().into(),
            })
            .collect();
        RadicalJson { sign: self.sign, factors }.serialize(serializer)
    }
}

impl TryFrom<RadicalJson> for RadicalValue {
    type Error = ExactError;

    fn try_from(raw: RadicalJson) -> Result<Self, Self::Error> {
        if !(-1..=1).contains(&raw.sign) {
            return Err(ExactError::Parse(format!("sign must be -1, 0 or 1, got {}", raw.sign)));
        }
        let mut acc = if raw.sign == 0 { RadicalValue::zero() } else { RadicalValue::one() };
        if raw.sign == 0 {
            return Ok(acc);
        }
        for f in raw.factors {
            let bn = BigInt::try_from(f.base_num)?;
            let bd = BigInt::try_from(f.base_den)?;
            let en = BigInt::try_from(f.exp_num)?;
            let ed = BigInt::try_from(f.exp_den)?;
            if bd.is_zero() || ed.is_zero() {
                return Err(ExactError::ZeroDivision);
            }
            acc = acc.mul(&RadicalValue::power(&Rational::new(bn, bd), &Rational::new(en, ed))?);
        }
        if raw.sign < 0 {
            acc = acc.negate();
        }
        Ok(acc)
    }
}

impl<'de> Deserialize<'de> for RadicalValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RadicalJson::deserialize(deserializer)?;
        RadicalValue::try_from(raw).map_err(serde::de::Error::custom)
    }
}
