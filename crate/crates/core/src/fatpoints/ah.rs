//! Double points: the classical list of defective cases and an engine run
//! that measures the kernel dimension against the naive count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::alpha::GenericProtocol;
use super::conditions::condition_matrix_mod;
use super::monomial::binomial;
use super::scheme::PointConfiguration;
use super::FatPointError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AhStatus {
    Regular,
    Exceptional,
}

impl std::fmt::Display for AhStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AhStatus::Regular => "regular",
            AhStatus::Exceptional => "exceptional",
        })
    }
}

/// Table lookup: `(n, 2, r)` for `2 <= r <= n`, and four sporadic cases.
pub fn ah_double_point_status(n: usize, d: u32, r: usize) -> Result<AhStatus, FatPointError> {
    if n < 2 {
        return Err(FatPointError::AhDimension(n));
    }
    if d < 2 {
        return Err(FatPointError::AhDegree(d));
    }
    let quadric = d == 2 && (2..=n).contains(&r);
    let sporadic = matches!((n, d, r), (2, 4, 5) | (3, 4, 9) | (4, 4, 14) | (4, 3, 7));
    Ok(if quadric || sporadic { AhStatus::Exceptional } else { AhStatus::Regular })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankRecord {
    pub prime: u64,
    pub seed: u64,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpdimRow {
    pub d: u32,
    pub r: usize,
    pub columns: usize,
    pub conditions: usize,
    /// `max(0, columns - conditions)`.
    pub expected: usize,
    /// Smallest kernel dimension seen over all runs.
    pub actual: usize,
    pub ranks: Vec<RankRecord>,
    pub table: AhStatus,
    pub engine: AhStatus,
    pub mismatch: bool,
}

/// Kernel dimensions for `r` random double points in degree `d`, for
/// `2 <= d <= d_max` and `1 <= r <= r_max`.
pub fn expdim_table(
    n: usize,
    d_max: u32,
    r_max: usize,
    protocol: &GenericProtocol,
) -> Result<Vec<ExpdimRow>, FatPointError> {
    if n < 2 {
        return Err(FatPointError::AhDimension(n));
    }
    if protocol.trials == 0 || protocol.primes.is_empty() {
        return Err(FatPointError::NoTrials);
    }
    let cases: Vec<(u32, usize)> = (2..=d_max).flat_map(|d| (1..=r_max).map(move |r| (d, r))).collect();
    let runs = protocol.runs();
    cases
        .into_par_iter()
        .map(|(d, r)| {
            let columns = binomial(d as u64 + n as u64, n as u64) as usize;
            let conditions = r * (n + 1);
            let mults = vec![2u32; r];
            let ranks: Vec<RankRecord> = runs
                .iter()
                .map(|&(field, _, seed)| {
                    let config = PointConfiguration::random(n, r, field, seed);
                    let points = config.points_mod(field)?;
                    let rank = condition_matrix_mod(n, &points, &mults, d, field).matrix.rank();
                    Ok(RankRecord { prime: field.modulus(), seed, rank })
                })
                .collect::<Result<_, FatPointError>>()?;
            let best_rank = ranks.iter().map(|x| x.rank).max().unwrap_or(0);
            let expected = columns.saturating_sub(conditions);
            let actual = columns - best_rank;
            let table = ah_double_point_status(n, d, r)?;
            let engine = if actual > expected { AhStatus::Exceptional } else { AhStatus::Regular };
            Ok(ExpdimRow { d, r, columns, conditions, expected, actual, ranks, table, engine, mismatch: table != engine })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::PrimeField;

    #[test]
    fn table_lookup() {
        assert_eq!(ah_double_point_status(2, 4, 5).unwrap(), AhStatus::Exceptional);
        assert_eq!(ah_double_point_status(2, 5, 7).unwrap(), AhStatus::Regular);
        assert_eq!(ah_double_point_status(3, 4, 9).unwrap(), AhStatus::Exceptional);
        assert_eq!(ah_double_point_status(4, 3, 7).unwrap(), AhStatus::Exceptional);
        assert_eq!(ah_double_point_status(3, 2, 3).unwrap(), AhStatus::Exceptional);
        assert_eq!(ah_double_point_status(3, 2, 4).unwrap(), AhStatus::Regular);
        assert_eq!(ah_double_point_status(2, 2, 1).unwrap(), AhStatus::Regular);
        assert_eq!(ah_double_point_status(2, 1, 1).unwrap_err(), FatPointError::AhDegree(1));
    }

    #[test]
    fn small_plane_table_has_no_mismatch() {
        let protocol = GenericProtocol { primes: PrimeField::defaults()[..2].to_vec(), trials: 1, ..Default::default() };
        let rows = expdim_table(2, 4, 6, &protocol).unwrap();
        assert!(rows.iter().all(|row| !row.mismatch));
        let five = rows.iter().find(|row| row.d == 4 && row.r == 5).unwrap();
        assert_eq!((five.columns, five.conditions, five.expected, five.actual), (15, 15, 0, 1));
        assert!(five.ranks.iter().all(|x| x.rank == 14));
        let four = rows.iter().find(|row| row.d == 4 && row.r == 4).unwrap();
        assert_eq!((four.expected, four.actual, four.engine), (3, 3, AhStatus::Regular));
    }
}
