//! The symmetrization argument bounding `d / sum m_i` from below, evaluated
//! on concrete data.
//!
//! Symmetrizing a degree-`d` form over all orderings of the points gives
//! degree `D = r! d` and uniform multiplicity `M = (r-1)! sum m_i`. Only the
//! ratio `D/M = r d / sum m_i` enters, so factorials are never formed.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::BoundsError;
use crate::exact::{rational_text, ComparisonBudget, RadicalValue, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationRecord {
    pub n: usize,
    pub r: usize,
    pub d: u32,
    pub mults: Vec<u32>,
    pub k: u32,
    /// `r d / sum m_i`.
    #[serde(with = "rational_text")]
    pub ratio_dm: Rational,
    /// `(k + n) D / M`.
    #[serde(with = "rational_text")]
    pub t_bound: Rational,
    /// `(k + 1) r^(1/n)`.
    pub ah_floor: RadicalValue,
    /// Whether `t_bound >= ah_floor` for this data.
    pub t_meets_floor: bool,
    /// `(k + 1) / (k + n)`.
    #[serde(with = "rational_text")]
    pub final_factor: Rational,
    /// `d / sum m_i`.
    #[serde(with = "rational_text")]
    pub lhs: Rational,
    /// `final_factor * r^(-(n-1)/n)`.
    pub rhs: RadicalValue,
    pub conclusion_holds: bool,
    /// The degree-lowering step needs `r` above a threshold depending on `k`
    /// and `n` for which no effective value is known; the conclusion is only
    /// implied, never asserted, for a given `r`.
    pub requires_unknown_threshold: bool,
}

fn rat(n: u64, d: u64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `(k + 1) / (k + n)`.
pub fn asymptotic_factor(k: u32, n: usize) -> Result<Rational, BoundsError> {
    if n < 2 {
        return Err(BoundsError::Range(format!("needs n >= 2, got {n}")));
    }
    Ok(rat(k as u64 + 1, k as u64 + n as u64))
}

pub fn symmetrization_chain(n: usize, r: usize, d: u32, mults: &[u32], k: u32) -> Result<DerivationRecord, BoundsError> {
    if n < 2 || d < 1 || k < 1 {
        return Err(BoundsError::Range(format!("needs n >= 2, d >= 1, k >= 1 (n={n}, d={d}, k={k})")));
    }
    if mults.len() != r {
        return Err(BoundsError::Range(format!("{} multiplicities for {r} points", mults.len())));
    }
    let total: u64 = mults.iter().map(|&m| m as u64).sum();
    if total == 0 {
        return Err(BoundsError::ZeroMultiplicity);
    }
    let budget = ComparisonBudget::default();
    let ratio_dm = rat(r as u64 * d as u64, total);
    let t_bound = &ratio_dm * rat(k as u64 + n as u64, 1);
    let ah_floor = RadicalValue::power(&rat(r as u64, 1), &rat(1, n as u64))?.mul_rational(&rat(k as u64 + 1, 1));
    let t_meets_floor = RadicalValue::from_rational(&t_bound).cmp_with(&ah_floor, budget)?.is_ge();
    let final_factor = asymptotic_factor(k, n)?;
    let lhs = rat(d as u64, total);
    let rhs = RadicalValue::power(&rat(r as u64, 1), &Rational::new(BigInt::from(1) - BigInt::from(n as u64), BigInt::from(n as u64)))?
        .mul_rational(&final_factor);
    let conclusion_holds = RadicalValue::from_rational(&lhs).cmp_with(&rhs, budget)?.is_ge();
    Ok(DerivationRecord {
        n,
        r,
        d,
        mults: mults.to_vec(),
        k,
        ratio_dm,
        t_bound,
        ah_floor,
        t_meets_floor,
        final_factor,
        lhs,
        rhs,
        conclusion_holds,
        requires_unknown_threshold: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_points_cubic() {
        let rec = symmetrization_chain(2, 9, 3, &[1; 9], 1).unwrap();
        assert_eq!(rec.ratio_dm, rat(3, 1));
        assert_eq!(rec.t_bound, rat(9, 1));
        assert_eq!(rec.ah_floor, RadicalValue::from_integer(6));
        assert_eq!(rec.final_factor, rat(2, 3));
        assert_eq!(rec.rhs, RadicalValue::ratio(2, 9));
        assert!(rec.conclusion_holds && rec.t_meets_floor);
    }

    #[test]
    fn four_points_conic() {
        let rec = symmetrization_chain(2, 4, 2, &[1; 4], 1).unwrap();
        assert_eq!(rec.ratio_dm, rat(2, 1));
        assert_eq!(rec.rhs, RadicalValue::ratio(1, 3));
        assert!(rec.conclusion_holds);
    }

    #[test]
    fn factor_values() {
        assert_eq!(asymptotic_factor(100, 2).unwrap(), rat(101, 102));
        assert_eq!(asymptotic_factor(1, 2).unwrap(), rat(2, 3));
        assert_eq!(asymptotic_factor(2, 3).unwrap(), rat(3, 5));
        assert_eq!(asymptotic_factor(0, 2).unwrap(), rat(1, 2));
        for k in 0..50 {
            assert!(asymptotic_factor(k, 3).unwrap() < asymptotic_factor(k + 1, 3).unwrap());
            assert!(asymptotic_factor(k, 3).unwrap() < rat(1, 1));
        }
    }

    #[test]
    fn parameter_checks() {
        assert!(symmetrization_chain(2, 4, 0, &[1; 4], 1).is_err());
        assert!(symmetrization_chain(2, 4, 2, &[1; 3], 1).is_err());
        assert_eq!(symmetrization_chain(2, 2, 2, &[0, 0], 1).unwrap_err(), BoundsError::ZeroMultiplicity);
        assert!(symmetrization_chain(2, 4, 2, &[1; 4], 0).is_err());
    }

    #[test]
    fn record_serializes_rationals_as_text() {
        let rec = symmetrization_chain(2, 9, 3, &[1; 9], 2).unwrap();
        let json = serde_json::to_value(&rec).unwrap();
        assert_eq!(json["final_factor"], "3/4");
        assert_eq!(json["ratio_dm"], "3");
        let back: DerivationRecord = serde_json::from_value(json).unwrap();
        assert_eq!(back, rec);
    }
}
