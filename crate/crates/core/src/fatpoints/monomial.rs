//! Monomial bases in graded reverse lexicographic order.

use std::cmp::Ordering;
use std::collections::HashMap;

/// Exponent vector of a monomial.
pub type Exponents = Vec<u32>;

/// Grevlex with `x0 > x1 > ... > xn`: higher degree first, then the monomial
/// whose last differing exponent is smaller comes first.
pub fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    if da != db {
        return db.cmp(&da);
    }
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            return x.cmp(y);
        }
    }
    Ordering::Equal
}

fn compositions(vars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponents>) {
    if vars == 1 {
        prefix.push(d);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for e in (0..=d).rev() {
        prefix.push(e);
        compositions(vars - 1, d - e, prefix, out);
        prefix.pop();
    }
}

/// All monomials of degree exactly `d` in `vars` variables, grevlex-descending.
pub fn monomials(vars: usize, d: u32) -> Vec<Exponents> {
    if vars == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    compositions(vars, d, &mut Vec::with_capacity(vars), &mut out);
    out.sort_by(|a, b| grevlex_cmp(a, b));
    out
}

/// Monomial basis of one degree with a reverse index.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    pub degree: u32,
    pub monomials: Vec<Exponents>,
    index: HashMap<Exponents, usize>,
}

impl MonomialBasis {
    pub fn new(vars: usize, degree: u32) -> Self {
        let monomials = monomials(vars, degree);
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        MonomialBasis { degree, monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &[u32]) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// `C(n, k)` in u128, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}
