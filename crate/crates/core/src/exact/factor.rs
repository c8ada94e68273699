//! Integer factoring helpers used to canonicalize radical bases.
//!
//! Factoring is trial division up to [`TRIAL_DIVISION_BOUND`]; whatever is left
//! is either certified prime (it is below the square of the bound), declared
//! prime by Miller-Rabin, or kept as an opaque composite with perfect powers
//! pulled out.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs (the first twelve prime bases
/// are a proven witness set below 3.3e24).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let (s, d) = {
        let mut d = n - 1;
        let mut s = 0;
        while d % 2 == 0 {
            d /= 2;
            s += 1;
        }
        (s, d)
    };
    'witness: for &a in &MR_BASES {
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

/// Miller-Rabin with fixed bases; deterministic for `n < 2^64`, probabilistic above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest `k` with `n = c^k`, returned as `(c, k)`. `n >= 2`.
pub fn perfect_power(n: &BigUint) -> (BigUint, u32) {
    let bits = n.bits() as u32;
    // Try the largest exponents first so the root is fully reduced.
    for k in (2..=bits.max(2)).rev() {
        let c = n.nth_root(k);
        if c > BigUint::one() && c.pow(k) == *n {
            let (inner, j) = perfect_power(&c);
            return (inner, j * k);
        }
    }
    (n.clone(), 1)
}

/// Factor `n >= 1` into `(base, exponent)` pairs. Bases below the trial bound
/// are primes; a leftover cofactor is prime or an opaque non-perfect-power.
pub fn factor(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out = Vec::new();
    if n.is_zero() || n.is_one() {
        return out;
    }
    let mut rest = n.clone();
    if let Some(mut small) = rest.to_u64() {
        let mut d = 2u64;
        while d <= TRIAL_DIVISION_BOUND && d.saturating_mul(d) <= small {
            if small % d == 0 {
                let mut e = 0;
                while small % d == 0 {
                    small /= d;
                    e += 1;
                }
                out.push((BigUint::from(d), e));
            }
            d += if d == 2 { 1 } else { 2 };
        }
        rest = BigUint::from(small);
    } else {
        let mut d = 2u64;
        while d <= TRIAL_DIVISION_BOUND {
            let bd = BigUint::from(d);
            if &bd * &bd > rest {
                break;
            }
            if (&rest % &bd).is_zero() {
                let mut e = 0;
                while (&rest % &bd).is_zero() {
                    rest /= &bd;
                    e += 1;
                }
                out.push((bd, e));
            }
            d += if d == 2 { 1 } else { 2 };
        }
    }
    if !rest.is_one() {
        if is_probable_prime(&rest) {
            out.push((rest, 1));
        } else {
            let (root, k) = perfect_power(&rest);
            out.push((root, k));
        }
    }
    out
}
