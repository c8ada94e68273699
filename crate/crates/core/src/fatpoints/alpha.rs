//! The interpolation degree `alpha_m(p_1, ..., p_r)`: the least degree of a
//! nonzero form vanishing to order `m_i` at every `p_i`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::conditions::{actual_multiplicity, condition_matrix_mod, rational_condition_rows};
use super::linalg::rank_over_rationals;
use super::monomial::binomial;
use super::scheme::{derive_seed, FatPointScheme, MultiplicityVector, PointConfiguration, Provenance};
use super::FatPointError;
use crate::exact::PrimeField;

/// How the degree is searched.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Bisection on `[1, expected_alpha]`; valid because a witness times a
    /// linear form is a witness one degree up.
    #[default]
    Binary,
    /// Upward scan from degree 1, kept as a cross-check.
    Scan,
}

/// Which primes, how many random configurations per prime, and the base seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericProtocol {
    pub primes: Vec<PrimeField>,
    pub trials: u32,
    pub seed: u64,
    pub mode: SearchMode,
}

impl Default for GenericProtocol {
    fn default() -> Self {
        GenericProtocol { primes: PrimeField::defaults(), trials: 2, seed: 0, mode: SearchMode::Binary }
    }
}

impl GenericProtocol {
    pub fn with_seed(seed: u64) -> Self {
        GenericProtocol { seed, ..Default::default() }
    }

    /// `(prime, trial, derived seed)` for every run, in the fixed merge order.
    pub fn runs(&self) -> Vec<(PrimeField, u32, u64)> {
        self.primes
            .iter()
            .flat_map(|&f| (0..self.trials).map(move |t| (f, t, derive_seed(self.seed, f.modulus(), t))))
            .collect()
    }
}

/// One elimination run over one field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub prime: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub alpha: u32,
    /// Rank and column count at degree `alpha - 1` (full column rank certifies no form there).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rank_below: Option<[usize; 2]>,
    pub kernel_dim: usize,
}

/// The witness form and the configuration it lives on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub field: PrimeField,
    pub degree: u32,
    /// Coefficients in grevlex order, residues in `[0, p)`.
    pub coefficients: Vec<u64>,
    pub points: Vec<Vec<u64>>,
    pub config: PointConfiguration,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaResult {
    pub n: usize,
    pub r: usize,
    pub mults: Vec<u32>,
    pub alpha: u32,
    pub actual_mults: Vec<u32>,
    pub primes: Vec<u64>,
    pub seed: Option<u64>,
    pub trials: u32,
    pub witness_degree: u32,
    pub witness_prime: u64,
    /// Runs that reached the reported (maximal) alpha.
    pub agreement: usize,
    pub runs: Vec<RunRecord>,
    #[serde(skip)]
    pub witness: Option<Witness>,
}

impl AlphaResult {
    /// Witness coefficients, for export.
    pub fn witness_coefficients(&self) -> Option<&[u64]> {
        self.witness.as_ref().map(|w| w.coefficients.as_slice())
    }
}

/// `min{d >= 1 : C(d+n, n) > sum_i C(m_i - 1 + n, n)}`; a form always exists there.
pub fn expected_alpha(n: usize, mults: &[u32]) -> Result<u32, FatPointError> {
    if mults.iter().all(|&m| m == 0) {
        return Err(FatPointError::DegenerateScheme);
    }
    let conditions = condition_count(n, mults);
    let mut d = 1u32;
    while binomial(d as u64 + n as u64, n as u64) <= conditions {
        d += 1;
    }
    Ok(d)
}

/// Number of linear conditions imposed by the fat points.
pub fn condition_count(n: usize, mults: &[u32]) -> u128 {
    mults
        .iter()
        .filter(|&&m| m > 0)
        .map(|&m| binomial(m as u64 - 1 + n as u64, n as u64))
        .sum()
}

/// Result of the search over one field.
#[derive(Clone, Debug)]
struct FieldAlpha {
    alpha: u32,
    witness: Vec<u64>,
    kernel_dim: usize,
    rank_below: Option<[usize; 2]>,
}

fn alpha_over_field(
    n: usize,
    points: &[Vec<u64>],
    mults: &[u32],
    field: PrimeField,
    mode: SearchMode,
) -> Result<FieldAlpha, FatPointError> {
    let upper = expected_alpha(n, mults)?;
    let mut ranks: BTreeMap<u32, [usize; 2]> = BTreeMap::new();
    let probe = |d: u32, ranks: &mut BTreeMap<u32, [usize; 2]>| -> bool {
        let cm = condition_matrix_mod(n, points, mults, d, field);
        let rank = cm.matrix.rank();
        ranks.insert(d, [rank, cm.matrix.cols()]);
        rank < cm.matrix.cols()
    };
    let alpha = match mode {
        SearchMode::Binary => {
            let (mut lo, mut hi) = (1u32, upper);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if probe(mid, &mut ranks) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            lo
        }
        SearchMode::Scan => {
            let mut d = 1;
            while d < upper && !probe(d, &mut ranks) {
                d += 1;
            }
            d
        }
    };
    let rank_below = if alpha > 1 {
        if !ranks.contains_key(&(alpha - 1)) {
            probe(alpha - 1, &mut ranks);
        }
        Some(ranks[&(alpha - 1)])
    } else {
        None
    };
    let cm = condition_matrix_mod(n, points, mults, alpha, field);
    let elim = cm.matrix.rank_and_kernel();
    let witness = elim.kernel.into_iter().next().expect("the counting bound guarantees a kernel");
    let kernel_dim = cm.matrix.cols() - elim.rank;
    Ok(FieldAlpha { alpha, witness, kernel_dim, rank_below })
}

fn assemble(
    n: usize,
    mults: &MultiplicityVector,
    primes: Vec<u64>,
    seed: Option<u64>,
    trials: u32,
    outcomes: Vec<(RunRecord, FieldAlpha, PrimeField, Vec<Vec<u64>>, PointConfiguration)>,
) -> Result<AlphaResult, FatPointError> {
    let best = outcomes.iter().map(|o| o.1.alpha).max().ok_or(FatPointError::NoUsablePrime)?;
    let agreement = outcomes.iter().filter(|o| o.1.alpha == best).count();
    let runs: Vec<RunRecord> = outcomes.iter().map(|o| o.0.clone()).collect();
    let (_, winner, field, points, config) = outcomes.into_iter().find(|o| o.1.alpha == best).unwrap();
    let actual_mults = points
        .iter()
        .map(|p| actual_multiplicity(&winner.witness, best, p, field))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AlphaResult {
        n,
        r: mults.len(),
        mults: mults.0.clone(),
        alpha: best,
        actual_mults,
        primes,
        seed,
        trials,
        witness_degree: best,
        witness_prime: field.modulus(),
        agreement,
        runs,
        witness: Some(Witness { field, degree: best, coefficients: winner.witness, points, config }),
    })
}

/// `alpha` for a fixed configuration.
///
/// Modular configurations are solved over their own field. Rational ones are
/// reduced modulo every prime in `primes`; reduction can only lower the
/// answer, so the maximum over usable primes is reported.
pub fn alpha(scheme: &FatPointScheme, primes: &[PrimeField], mode: SearchMode) -> Result<AlphaResult, FatPointError> {
    if scheme.mults.is_degenerate() {
        return Err(FatPointError::DegenerateScheme);
    }
    let n = scheme.n();
    let fields: Vec<PrimeField> = match scheme.config.native_field() {
        Some(f) => vec![f],
        None => primes.to_vec(),
    };
    let seed = match scheme.config.provenance() {
        Provenance::Random { seed, .. } => Some(*seed),
        Provenance::Explicit { .. } => None,
    };
    let mut outcomes = Vec::new();
    for field in &fields {
        let points = match scheme.config.points_mod(*field) {
            Ok(p) => p,
            Err(FatPointError::BadReduction(_)) => continue,
            Err(e) => return Err(e),
        };
        let fa = alpha_over_field(n, &points, scheme.mults.as_slice(), *field, mode)?;
        let record = RunRecord {
            prime: field.modulus(),
            seed,
            alpha: fa.alpha,
            rank_below: fa.rank_below,
            kernel_dim: fa.kernel_dim,
        };
        outcomes.push((record, fa, *field, points, scheme.config.clone()));
    }
    let used = outcomes.iter().map(|o| o.2.modulus()).collect();
    assemble(n, &scheme.mults, used, seed, 1, outcomes)
}

/// `alpha` at seeded random points, maximized over every (prime, trial) run.
///
/// Specializing points can only lower `alpha`, so the maximum is the best
/// available estimate of the value at very general points.
pub fn alpha_generic(
    n: usize,
    mults: &MultiplicityVector,
    protocol: &GenericProtocol,
) -> Result<AlphaResult, FatPointError> {
    if mults.is_degenerate() {
        return Err(FatPointError::DegenerateScheme);
    }
    if protocol.trials == 0 || protocol.primes.is_empty() {
        return Err(FatPointError::NoTrials);
    }
    let r = mults.len();
    let outcomes = protocol
        .runs()
        .into_par_iter()
        .map(|(field, _, seed)| {
            let config = PointConfiguration::random(n, r, field, seed);
            let points = config.points_mod(field)?;
            let fa = alpha_over_field(n, &points, mults.as_slice(), field, protocol.mode)?;
            let record = RunRecord {
                prime: field.modulus(),
                seed: Some(seed),
                alpha: fa.alpha,
                rank_below: fa.rank_below,
                kernel_dim: fa.kernel_dim,
            };
            Ok((record, fa, field, points, config))
        })
        .collect::<Result<Vec<_>, FatPointError>>()?;
    let primes = protocol.primes.iter().map(|f| f.modulus()).collect();
    assemble(n, mults, primes, Some(protocol.seed), protocol.trials, outcomes)
}

/// `alpha` over the rationals by exact elimination (oracle mode, small systems only).
pub fn alpha_over_rationals(scheme: &FatPointScheme, column_limit: usize) -> Result<u32, FatPointError> {
    let n = scheme.n();
    let upper = expected_alpha(n, scheme.mults.as_slice())?;
    for d in 1..upper {
        let rows = rational_condition_rows(scheme, d)?;
        let cols = binomial(d as u64 + n as u64, n as u64) as usize;
        let rank = if rows.is_empty() {
            0
        } else {
            rank_over_rationals(&rows, column_limit).map_err(|e| FatPointError::TooLarge(e.to_string()))?
        };
        if rank < cols {
            return Ok(d);
        }
    }
    Ok(upper)
}
