//! Point configurations, multiplicity vectors and fat point schemes.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::FatPointError;
use crate::exact::{PrimeField, Rational};

/// Coordinates of the points, either exact or already over a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coordinates {
    Rational(Vec<Vec<Rational>>),
    Modular { field: PrimeField, points: Vec<Vec<u64>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    /// User-supplied points; `special` marks configurations chosen to be non-generic.
    Explicit { special: bool },
    Random { seed: u64, prime: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfiguration {
    n: usize,
    coords: Coordinates,
    provenance: Provenance,
}

/// Mix a base seed with a prime and a trial index (splitmix64 finalizer).
pub fn derive_seed(seed: u64, prime: u64, trial: u32) -> u64 {
    let mut z = seed ^ prime.rotate_left(17) ^ ((trial as u64) << 40) ^ 0x9E37_79B9_7F4A_7C15;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn same_point_mod(a: &[u64], b: &[u64], field: PrimeField) -> bool {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if field.mul(a[i], b[j]) != field.mul(a[j], b[i]) {
                return false;
            }
        }
    }
    true
}

fn same_point_rational(a: &[Rational], b: &[Rational]) -> bool {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if &a[i] * &b[j] != &a[j] * &b[i] {
                return false;
            }
        }
    }
    true
}

fn check_modular(points: &[Vec<u64>], field: PrimeField) -> Result<(), FatPointError> {
    for (i, p) in points.iter().enumerate() {
        if p.iter().all(|&c| c % field.modulus() == 0) {
            return Err(FatPointError::ZeroPoint(i));
        }
        for (j, q) in points.iter().enumerate().take(i) {
            if same_point_mod(q, p, field) {
                return Err(FatPointError::CoincidentPoints(j, i));
            }
        }
    }
    Ok(())
}

impl PointConfiguration {
    /// Exact points in `P^n`; each must have `n + 1` coordinates.
    pub fn explicit(n: usize, points: Vec<Vec<Rational>>, special: bool) -> Result<Self, FatPointError> {
        if n == 0 {
            return Err(FatPointError::Dimension(n));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != n + 1 {
                return Err(FatPointError::CoordinateCount { point: i, expected: n + 1, found: p.len() });
            }
            if p.iter().all(Zero::is_zero) {
                return Err(FatPointError::ZeroPoint(i));
            }
            for (j, q) in points.iter().enumerate().take(i) {
                if same_point_rational(q, p) {
                    return Err(FatPointError::CoincidentPoints(j, i));
                }
            }
        }
        Ok(PointConfiguration { n, coords: Coordinates::Rational(points), provenance: Provenance::Explicit { special } })
    }

    /// Explicit points with integer coordinates.
    pub fn from_integers(n: usize, points: &[Vec<i64>], special: bool) -> Result<Self, FatPointError> {
        let pts = points
            .iter()
            .map(|p| p.iter().map(|&c| Rational::from_integer(c.into())).collect())
            .collect();
        Self::explicit(n, pts, special)
    }

    /// Points over a prime field, given directly.
    pub fn modular(n: usize, field: PrimeField, points: Vec<Vec<u64>>) -> Result<Self, FatPointError> {
        for (i, p) in points.iter().enumerate() {
            if p.len() != n + 1 {
                return Err(FatPointError::CoordinateCount { point: i, expected: n + 1, found: p.len() });
            }
        }
        check_modular(&points, field)?;
        Ok(PointConfiguration {
            n,
            coords: Coordinates::Modular { field, points },
            provenance: Provenance::Explicit { special: false },
        })
    }

    /// `r` uniformly random points of `P^n(F_p)`, redrawing zero or repeated points.
    pub fn random(n: usize, r: usize, field: PrimeField, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = field.modulus();
        let mut points: Vec<Vec<u64>> = Vec::with_capacity(r);
        while points.len() < r {
            let cand: Vec<u64> = (0..=n).map(|_| rng.gen_range(0..p)).collect();
            if cand.iter().all(|&c| c == 0) || points.iter().any(|q| same_point_mod(q, &cand, field)) {
                continue;
            }
            points.push(cand);
        }
        PointConfiguration {
            n,
            coords: Coordinates::Modular { field, points },
            provenance: Provenance::Random { seed, prime: p },
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        match &self.coords {
            Coordinates::Rational(p) => p.len(),
            Coordinates::Modular { points, .. } => points.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coordinates(&self) -> &Coordinates {
        &self.coords
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn is_random(&self) -> bool {
        matches!(self.provenance, Provenance::Random { .. })
    }

    /// The field a modular configuration lives in.
    pub fn native_field(&self) -> Option<PrimeField> {
        match &self.coords {
            Coordinates::Modular { field, .. } => Some(*field),
            Coordinates::Rational(_) => None,
        }
    }

    /// Reduce to `field`. Fails if a denominator or a whole point vanishes, or
    /// two points collide modulo p.
    pub fn points_mod(&self, field: PrimeField) -> Result<Vec<Vec<u64>>, FatPointError> {
        let points = match &self.coords {
            Coordinates::Modular { field: own, points } => {
                if *own != field {
                    return Err(FatPointError::FieldMismatch { expected: own.modulus(), found: field.modulus() });
                }
                return Ok(points.clone());
            }
            Coordinates::Rational(points) => points
                .iter()
                .map(|p| {
                    p.iter()
                        .map(|c| field.from_rational(c).ok_or(FatPointError::BadReduction(field.modulus())))
                        .collect::<Result<Vec<u64>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        check_modular(&points, field).map_err(|_| FatPointError::BadReduction(field.modulus()))?;
        Ok(points)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiplicityVector(pub Vec<u32>);

impl MultiplicityVector {
    pub fn uniform(r: usize, m: u32) -> Self {
        MultiplicityVector(vec![m; r])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&m| m as u64).sum()
    }

    pub fn max(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn is_degenerate(&self) -> bool {
        self.0.iter().all(|&m| m == 0)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FatPointScheme {
    pub config: PointConfiguration,
    pub mults: MultiplicityVector,
}

impl FatPointScheme {
    pub fn new(config: PointConfiguration, mults: MultiplicityVector) -> Result<Self, FatPointError> {
        if config.len() != mults.len() {
            return Err(FatPointError::LengthMismatch { points: config.len(), mults: mults.len() });
        }
        Ok(FatPointScheme { config, mults })
    }

    pub fn n(&self) -> usize {
        self.config.n()
    }

    pub fn r(&self) -> usize {
        self.config.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::DEFAULT_PRIMES;

    fn field() -> PrimeField {
        PrimeField::new(DEFAULT_PRIMES[1]).unwrap()
    }

    #[test]
    fn rejects_zero_and_repeated_points() {
        let err = PointConfiguration::from_integers(2, &[vec![1, 0, 0], vec![0, 0, 0]], false).unwrap_err();
        assert_eq!(err, FatPointError::ZeroPoint(1));
        let err = PointConfiguration::from_integers(2, &[vec![1, 2, 3], vec![2, 4, 6]], false).unwrap_err();
        assert_eq!(err, FatPointError::CoincidentPoints(0, 1));
        let err = PointConfiguration::from_integers(2, &[vec![1, 2]], false).unwrap_err();
        assert!(matches!(err, FatPointError::CoordinateCount { .. }));
    }

    #[test]
    fn random_points_are_reproducible() {
        let a = PointConfiguration::random(3, 8, field(), 42);
        let b = PointConfiguration::random(3, 8, field(), 42);
        let c = PointConfiguration::random(3, 8, field(), 43);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 8);
        assert_ne!(derive_seed(1, 2, 0), derive_seed(1, 2, 1));
    }

    #[test]
    fn reduction_detects_bad_primes() {
        let p = field().modulus() as i64;
        let cfg = PointConfiguration::from_integers(2, &[vec![1, 0, 0], vec![1, p, 0]], false).unwrap();
        assert_eq!(cfg.points_mod(field()).unwrap_err(), FatPointError::BadReduction(field().modulus()));
        let ok = PointConfiguration::from_integers(2, &[vec![1, 0, 0], vec![1, 1, 0]], false).unwrap();
        assert_eq!(ok.points_mod(field()).unwrap(), vec![vec![1, 0, 0], vec![1, 1, 0]]);
    }

    #[test]
    fn scheme_lengths_must_agree() {
        let cfg = PointConfiguration::random(2, 3, field(), 1);
        assert!(FatPointScheme::new(cfg.clone(), MultiplicityVector(vec![1, 1])).is_err());
        assert!(FatPointScheme::new(cfg, MultiplicityVector(vec![1, 1, 1])).is_ok());
    }
}
