//! Upper bounds on the constant of `O(1)` read off from witness forms.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{Bound, BoundKind, BoundsError, Source};
use crate::exact::{rational_text, ComparisonBudget, RadicalValue, Rational};
use crate::fatpoints::{alpha_generic, AlphaResult, GenericProtocol, MultiplicityVector};

/// `(d / sum actual_mults)^(1/(n-1))`: one hypersurface of degree `d`
/// bounds the constant from above.
pub fn eps_upper_from_witness(n: usize, d: u32, actual_mults: &[u32]) -> Result<Bound, BoundsError> {
    if n < 2 || d < 1 {
        return Err(BoundsError::Range(format!("needs n >= 2 and d >= 1 (n={n}, d={d})")));
    }
    let total: u64 = actual_mults.iter().map(|&m| m as u64).sum();
    if total == 0 {
        return Err(BoundsError::ZeroMultiplicity);
    }
    let ratio = Rational::new(BigInt::from(d), BigInt::from(total));
    let value = RadicalValue::power(&ratio, &Rational::new(BigInt::from(1), BigInt::from(n as u64 - 1)))?;
    Ok(Bound::new(value, BoundKind::Upper, n, Source::Sweep).with_detail(format!("d={d},sum={total}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub m: u32,
    pub alpha: u32,
    pub actual_mults: Vec<u32>,
    pub actual_total: u64,
    /// `alpha / actual_total`, the bound on `epsilon^(n-1)`.
    #[serde(with = "rational_text")]
    pub ratio: Rational,
    pub bound: Bound,
    pub best_so_far: Bound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub n: usize,
    pub r: usize,
    pub m_max: u32,
    pub primes: Vec<u64>,
    pub seed: u64,
    pub trials: u32,
    pub rows: Vec<SweepRow>,
    pub best: Bound,
    pub best_m: u32,
}

/// Turn a sequence of per-multiplicity results into the sweep table.
pub fn sweep_from_results(
    n: usize,
    r: usize,
    protocol: &GenericProtocol,
    results: &[(u32, AlphaResult)],
) -> Result<SweepReport, BoundsError> {
    let mut rows: Vec<SweepRow> = Vec::with_capacity(results.len());
    let mut best: Option<(Bound, u32)> = None;
    for (m, res) in results {
        let bound = eps_upper_from_witness(n, res.alpha, &res.actual_mults)?;
        let better = match &best {
            None => true,
            Some((b, _)) => bound.value.cmp_with(&b.value, ComparisonBudget::default())?.is_lt(),
        };
        if better {
            best = Some((bound.clone(), *m));
        }
        let actual_total: u64 = res.actual_mults.iter().map(|&x| x as u64).sum();
        rows.push(SweepRow {
            m: *m,
            alpha: res.alpha,
            actual_mults: res.actual_mults.clone(),
            actual_total,
            ratio: Rational::new(BigInt::from(res.alpha), BigInt::from(actual_total)),
            bound,
            best_so_far: best.as_ref().unwrap().0.clone(),
        });
    }
    let (best, best_m) = best.ok_or_else(|| BoundsError::Range("m_max must be at least 1".into()))?;
    Ok(SweepReport {
        n,
        r,
        m_max: results.len() as u32,
        primes: protocol.primes.iter().map(|f| f.modulus()).collect(),
        seed: protocol.seed,
        trials: protocol.trials,
        rows,
        best,
        best_m,
    })
}

/// Run the generic engine for uniform multiplicity `m = 1..=m_max` and keep
/// the smallest witness-derived upper bound.
pub fn eps_upper_sweep(n: usize, r: usize, m_max: u32, protocol: &GenericProtocol) -> Result<SweepReport, BoundsError> {
    if m_max < 1 || r < 1 {
        return Err(BoundsError::Range(format!("needs r >= 1 and m_max >= 1 (r={r}, m_max={m_max})")));
    }
    let results = (1..=m_max)
        .map(|m| Ok((m, alpha_generic(n, &MultiplicityVector::uniform(r, m), protocol)?)))
        .collect::<Result<Vec<_>, BoundsError>>()?;
    sweep_from_results(n, r, protocol, &results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::PrimeField;

    fn protocol() -> GenericProtocol {
        GenericProtocol { primes: PrimeField::defaults()[..2].to_vec(), trials: 1, ..Default::default() }
    }

    #[test]
    fn witness_ratios() {
        assert_eq!(eps_upper_from_witness(2, 2, &[1; 5]).unwrap().value, RadicalValue::ratio(2, 5));
        assert_eq!(eps_upper_from_witness(2, 3, &[1; 9]).unwrap().value, RadicalValue::ratio(1, 3));
        assert_eq!(eps_upper_from_witness(2, 1, &[1, 1]).unwrap().value, RadicalValue::ratio(1, 2));
        assert_eq!(eps_upper_from_witness(3, 2, &[1; 8]).unwrap().value, RadicalValue::ratio(1, 2));
        assert_eq!(eps_upper_from_witness(2, 1, &[0, 0]).unwrap_err(), BoundsError::ZeroMultiplicity);
    }

    #[test]
    fn sweep_examples() {
        let s = eps_upper_sweep(2, 5, 1, &protocol()).unwrap();
        assert_eq!(s.best.value, RadicalValue::ratio(2, 5));
        let s = eps_upper_sweep(2, 4, 3, &protocol()).unwrap();
        assert_eq!(s.best.value, RadicalValue::ratio(1, 2));
        assert!(s.rows.iter().all(|row| row.ratio == Rational::new(1.into(), 2.into())));
        let s = eps_upper_sweep(2, 1, 1, &protocol()).unwrap();
        assert_eq!(s.best.value, RadicalValue::one());
    }

    #[test]
    fn best_so_far_never_increases() {
        let s = eps_upper_sweep(2, 7, 4, &protocol()).unwrap();
        for w in s.rows.windows(2) {
            assert!(w[1].best_so_far.value.try_cmp(&w[0].best_so_far.value).unwrap().is_le());
        }
        assert_eq!(s.rows.last().unwrap().best_so_far, s.best);
    }
}
