//! Witness certification by direct substitution.
//!
//! The order of a form `F` at a point `p` is the lowest total degree in the
//! expansion of `F(p + y)` in all `n + 1` shift variables. This check expands
//! that polynomial monomial by monomial; it shares nothing with the
//! coordinate-change construction used by the engine except the monomial
//! ordering.

use serde::{Deserialize, Serialize};

use super::VerifyError;
use crate::exact::PrimeField;
use crate::fatpoints::monomial::{monomials, Exponents};
use crate::fatpoints::{AlphaResult, ModMatrix, Provenance};

/// Exponent vectors of total degree below `m` in `vars` variables.
fn low_degree_shifts(vars: usize, m: u32) -> Vec<Exponents> {
    (0..m).flat_map(|j| monomials(vars, j)).collect()
}

fn binomial_mod(n: u32, k: u32, field: PrimeField) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u64;
    for i in 0..k {
        acc = field.mul(acc, field.from_i64((n - i) as i64));
        acc = field.mul(acc, field.inv(field.from_i64((i + 1) as i64)).unwrap_or(0));
    }
    acc
}

/// The functional `F -> coefficient of y^b in F(p + y)` on degree-`d` forms.
fn shift_row(basis: &[Exponents], b: &[u32], point: &[u64], field: PrimeField) -> Vec<u64> {
    basis
        .iter()
        .map(|a| {
            let mut acc = 1u64;
            for k in 0..a.len() {
                if b[k] > a[k] {
                    return 0;
                }
                acc = field.mul(acc, binomial_mod(a[k], b[k], field));
                acc = field.mul(acc, field.pow(point[k], (a[k] - b[k]) as u64));
            }
            acc
        })
        .collect()
}

fn dot(row: &[u64], v: &[u64], field: PrimeField) -> u64 {
    row.iter().zip(v).fold(0, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

/// Order of vanishing of `form` at `point`, by substitution. `None` for the zero form.
pub fn order_by_substitution(form: &[u64], d: u32, point: &[u64], field: PrimeField) -> Option<u32> {
    if form.iter().all(|&c| c == 0) {
        return None;
    }
    let basis = monomials(point.len(), d);
    for j in 0..=d {
        for b in monomials(point.len(), j) {
            if dot(&shift_row(&basis, &b, point, field), form, field) != 0 {
                return Some(j);
            }
        }
    }
    Some(d + 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub point: usize,
    /// Index into the shift exponents of degree below `m_point`, degree by degree in grevlex order.
    pub condition: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub alpha: u32,
    pub witness_prime: u64,
    pub substitution_ok: bool,
    pub violation: Option<Violation>,
    /// Vanishing orders recomputed by substitution agree with the reported ones.
    pub orders_match: bool,
    pub below_prime: Option<u64>,
    /// `[rank, columns]` of the substitution system one degree down.
    pub below_rank: Option<[usize; 2]>,
    pub no_form_below: bool,
    pub certified: bool,
}

/// Re-check a result: the witness must satisfy every vanishing condition and
/// no nonzero form may exist one degree lower.
///
/// For exact input points the lower-degree check runs over a different prime
/// than the witness when one is available; random points exist only over
/// their own field, so the check reuses it.
pub fn certify(result: &AlphaResult, primes: &[PrimeField]) -> Result<Certificate, VerifyError> {
    let w = result.witness.as_ref().ok_or(VerifyError::NoWitness)?;
    let field = w.field;
    let basis = monomials(result.n + 1, w.degree);
    let mut violation = None;
    'points: for (i, (point, &m)) in w.points.iter().zip(&result.mults).enumerate() {
        for (c, b) in low_degree_shifts(result.n + 1, m).iter().enumerate() {
            if dot(&shift_row(&basis, b, point, field), &w.coefficients, field) != 0 {
                violation = Some(Violation { point: i, condition: c });
                break 'points;
            }
        }
    }
    let nonzero = w.coefficients.iter().any(|&c| c != 0);
    let substitution_ok = violation.is_none() && nonzero && w.coefficients.len() == basis.len();
    let orders_match = substitution_ok
        && w.points
            .iter()
            .zip(&result.actual_mults)
            .all(|(p, &o)| order_by_substitution(&w.coefficients, w.degree, p, field) == Some(o));

    let (below_prime, below_rank, no_form_below) = if w.degree <= 1 {
        (None, None, true)
    } else {
        let explicit = matches!(w.config.provenance(), Provenance::Explicit { .. }) && w.config.native_field().is_none();
        let mut chosen = None;
        if explicit {
            for f in primes.iter().filter(|f| **f != field) {
                if let Ok(pts) = w.config.points_mod(*f) {
                    chosen = Some((*f, pts));
                    break;
                }
            }
        }
        let (f, pts) = chosen.unwrap_or((field, w.points.clone()));
        let lower = monomials(result.n + 1, w.degree - 1);
        let mut matrix = ModMatrix::zeros(0, lower.len(), f);
        for (point, &m) in pts.iter().zip(&result.mults) {
            for b in low_degree_shifts(result.n + 1, m) {
                matrix.push_row(&shift_row(&lower, &b, point, f));
            }
        }
        let rank = matrix.rank();
        (Some(f.modulus()), Some([rank, lower.len()]), rank == lower.len())
    };
    Ok(Certificate {
        alpha: result.alpha,
        witness_prime: field.modulus(),
        substitution_ok,
        violation,
        orders_match,
        below_prime,
        below_rank,
        no_form_below,
        certified: substitution_ok && orders_match && no_form_below,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::DEFAULT_PRIMES;

    #[test]
    fn binomials_mod_p() {
        let f = PrimeField::new(DEFAULT_PRIMES[0]).unwrap();
        assert_eq!(binomial_mod(5, 2, f), 10);
        assert_eq!(binomial_mod(40, 20, f), (137846528820u64) % f.modulus());
        assert_eq!(binomial_mod(3, 4, f), 0);
    }

    #[test]
    fn substitution_orders() {
        let f = PrimeField::new(DEFAULT_PRIMES[0]).unwrap();
        // x1*x2 in grevlex degree-2 order [x0^2, x0x1, x1^2, x0x2, x1x2, x2^2]
        let form = [0, 0, 0, 0, 1, 0];
        assert_eq!(order_by_substitution(&form, 2, &[1, 0, 0], f), Some(2));
        assert_eq!(order_by_substitution(&form, 2, &[0, 1, 0], f), Some(1));
        assert_eq!(order_by_substitution(&form, 2, &[1, 1, 1], f), Some(0));
        assert_eq!(order_by_substitution(&[0; 6], 2, &[1, 1, 1], f), None);
    }

    fn protocol() -> crate::fatpoints::GenericProtocol {
        crate::fatpoints::GenericProtocol::with_seed(3)
    }

    #[test]
    fn generic_witnesses_certify() {
        use crate::fatpoints::{alpha_generic, MultiplicityVector};
        for (r, m, a) in [(9usize, 1u32, 3u32), (5, 2, 4)] {
            let res = alpha_generic(2, &MultiplicityVector::uniform(r, m), &protocol()).unwrap();
            assert_eq!(res.alpha, a);
            let cert = certify(&res, &PrimeField::defaults()).unwrap();
            assert!(cert.certified, "{cert:?}");
            assert!(res.actual_mults.iter().all(|&x| x >= m));
        }
    }

    #[test]
    fn corrupted_witness_fails() {
        use crate::fatpoints::{alpha_generic, MultiplicityVector};
        let mut res = alpha_generic(2, &MultiplicityVector::uniform(9, 1), &protocol()).unwrap();
        let w = res.witness.as_mut().unwrap();
        w.coefficients[0] = w.field.add(w.coefficients[0], 1);
        let cert = certify(&res, &PrimeField::defaults()).unwrap();
        assert!(!cert.certified);
        assert!(cert.violation.is_some());
        res.witness = None;
        assert_eq!(certify(&res, &PrimeField::defaults()).unwrap_err(), VerifyError::NoWitness);
    }

    #[test]
    fn explicit_points_use_a_second_prime() {
        use crate::fatpoints::{alpha, FatPointScheme, MultiplicityVector, PointConfiguration, SearchMode};
        let cfg = PointConfiguration::from_integers(2, &[vec![1, 0, 0], vec![1, 1, 0], vec![0, 0, 1], vec![1, 1, 1]], false)
            .unwrap();
        let s = FatPointScheme::new(cfg, MultiplicityVector(vec![2, 2, 1, 1])).unwrap();
        let primes = PrimeField::defaults();
        let res = alpha(&s, &primes, SearchMode::Binary).unwrap();
        let cert = certify(&res, &primes).unwrap();
        assert!(cert.certified);
        assert_ne!(cert.below_prime, Some(cert.witness_prime));
    }
}
