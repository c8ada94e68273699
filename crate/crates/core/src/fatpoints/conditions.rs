//! Vanishing conditions for fat points without derivatives.
//!
//! For a point `p` with pivot coordinate `k0` (its first nonzero entry) the
//! change of coordinates `T` sends `e0 -> p` and `e1..en` to the remaining
//! standard basis vectors in index order. In the new coordinates
//! `x_k0 = p_k0 * y0` and `x_k = p_k * y0 + y_{j(k)}` otherwise, so the
//! coefficient of `y0^(d-|b|) * y^b` in `F(T y)` is a linear functional of the
//! coefficients of `F` with entries
//!
//! ```text
//!   p_k0^a_k0 * prod_{k != k0} C(a_k, b_k) * p_k^(a_k - b_k)
//! ```
//!
//! for each monomial `x^a`. `F` vanishes to order `m` at `p` exactly when all
//! these functionals with `|b| < m` vanish. Binomials come from Pascal's
//! triangle, so the construction is valid in every characteristic.

use num_traits::{One, Zero};

use super::linalg::ModMatrix;
use super::monomial::{monomials, MonomialBasis};
use super::scheme::{Coordinates, FatPointScheme};
use super::FatPointError;
use crate::exact::{PrimeField, Rational};

/// The coefficient arithmetic the condition builder needs.
pub trait CoefficientRing {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

impl CoefficientRing for PrimeField {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        PrimeField::add(*self, *a, *b)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        PrimeField::mul(*self, *a, *b)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RationalRing;

impl CoefficientRing for RationalRing {
    type Elem = Rational;
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
}

/// Per-point data for generating condition rows at one degree.
struct PointFrame<R: CoefficientRing> {
    pivot: usize,
    others: Vec<usize>,
    powers: Vec<Vec<R::Elem>>,
}

fn pascal<R: CoefficientRing>(ring: &R, d: u32) -> Vec<Vec<R::Elem>> {
    let d = d as usize;
    let mut rows: Vec<Vec<R::Elem>> = Vec::with_capacity(d + 1);
    for a in 0..=d {
        let mut row = vec![ring.one(); a + 1];
        for b in 1..a {
            row[b] = ring.add(&rows[a - 1][b - 1], &rows[a - 1][b]);
        }
        rows.push(row);
    }
    rows
}

impl<R: CoefficientRing> PointFrame<R> {
    fn new(ring: &R, point: &[R::Elem], d: u32) -> Self {
        let pivot = point.iter().position(|c| !ring.is_zero(c)).expect("point has a nonzero coordinate");
        let others = (0..point.len()).filter(|&k| k != pivot).collect();
        let powers = point
            .iter()
            .map(|c| {
                let mut pw = Vec::with_capacity(d as usize + 1);
                let mut acc = ring.one();
                for _ in 0..=d {
                    pw.push(acc.clone());
                    acc = ring.mul(&acc, c);
                }
                pw
            })
            .collect();
        PointFrame { pivot, others, powers }
    }

    /// Rows of stratum `j`: one per monomial `y^b` of degree `j` in `y1..yn`.
    fn stratum(&self, ring: &R, basis: &MonomialBasis, binom: &[Vec<R::Elem>], j: u32) -> Vec<Vec<R::Elem>> {
        let n = self.others.len();
        monomials(n, j)
            .into_iter()
            .map(|b| {
                basis
                    .monomials
                    .iter()
                    .map(|a| {
                        let mut v = self.powers[self.pivot][a[self.pivot] as usize].clone();
                        for (t, &k) in self.others.iter().enumerate() {
                            let (ak, bk) = (a[k] as usize, b[t] as usize);
                            if bk > ak {
                                return ring.zero();
                            }
                            v = ring.mul(&v, &ring.mul(&binom[ak][bk], &self.powers[k][ak - bk]));
                        }
                        v
                    })
                    .collect()
            })
            .collect()
    }
}

/// All condition rows for `points` with multiplicities `mults` in degree `d`,
/// along with the owning point of each row.
pub fn condition_rows<R: CoefficientRing>(
    ring: &R,
    points: &[Vec<R::Elem>],
    mults: &[u32],
    d: u32,
) -> (Vec<Vec<R::Elem>>, Vec<usize>) {
    let vars = points.first().map_or(1, Vec::len);
    let basis = MonomialBasis::new(vars, d);
    let binom = pascal(ring, d);
    let mut rows = Vec::new();
    let mut owners = Vec::new();
    for (i, (pt, &m)) in points.iter().zip(mults).enumerate() {
        if m == 0 {
            continue;
        }
        let frame = PointFrame::new(ring, pt, d);
        for j in 0..m {
            let block = frame.stratum(ring, &basis, &binom, j);
            owners.extend(std::iter::repeat(i).take(block.len()));
            rows.extend(block);
        }
    }
    (rows, owners)
}

/// The linear system "degree-`d` form vanishes to order `m_i` at `p_i`" over one prime field.
#[derive(Clone, Debug)]
pub struct ConditionMatrix {
    pub degree: u32,
    pub n: usize,
    pub matrix: ModMatrix,
    /// Index of the point each row belongs to.
    pub row_points: Vec<usize>,
}

impl ConditionMatrix {
    pub fn shape(&self) -> (usize, usize) {
        self.matrix.shape()
    }
}

/// Build the condition matrix of `scheme` in degree `d` over `field`.
///
/// Random configurations must be built over their own field; explicit rational
/// points are reduced modulo the prime.
pub fn build_condition_matrix(
    scheme: &FatPointScheme,
    d: u32,
    field: PrimeField,
) -> Result<ConditionMatrix, FatPointError> {
    if d < 1 {
        return Err(FatPointError::DegreeTooSmall(d));
    }
    let points = scheme.config.points_mod(field)?;
    Ok(condition_matrix_mod(scheme.n(), &points, scheme.mults.as_slice(), d, field))
}

pub(crate) fn condition_matrix_mod(n: usize, points: &[Vec<u64>], mults: &[u32], d: u32, field: PrimeField) -> ConditionMatrix {
    let cols = MonomialBasis::new(n + 1, d).len();
    let (rows, owners) = condition_rows(&field, points, mults, d);
    let mut matrix = ModMatrix::zeros(0, cols, field);
    for row in &rows {
        matrix.push_row(row);
    }
    ConditionMatrix { degree: d, n, matrix, row_points: owners }
}

/// Exact condition rows for a configuration with rational coordinates.
pub fn rational_condition_rows(scheme: &FatPointScheme, d: u32) -> Result<Vec<Vec<Rational>>, FatPointError> {
    match scheme.config.coordinates() {
        Coordinates::Rational(points) => Ok(condition_rows(&RationalRing, points, scheme.mults.as_slice(), d).0),
        Coordinates::Modular { .. } => Err(FatPointError::NotRational),
    }
}

/// Vanishing order at `point` of the degree-`d` form with coefficients `form`
/// (grevlex order): the first stratum of `F(T y)` that is not identically zero.
pub fn actual_multiplicity(form: &[u64], d: u32, point: &[u64], field: PrimeField) -> Result<u32, FatPointError> {
    if form.iter().all(|&c| c % field.modulus() == 0) {
        return Err(FatPointError::ZeroForm);
    }
    let basis = MonomialBasis::new(point.len(), d);
    if basis.len() != form.len() {
        return Err(FatPointError::FormLength { expected: basis.len(), found: form.len() });
    }
    let binom = pascal(&field, d);
    let frame = PointFrame::new(&field, point, d);
    for j in 0..=d {
        let nonzero = frame
            .stratum(&field, &basis, &binom, j)
            .iter()
            .any(|row| row.iter().zip(form).fold(0, |acc, (&a, &c)| field.add(acc, field.mul(a, c))) != 0);
        if nonzero {
            return Ok(j);
        }
    }
    unreachable!("T is invertible, so a nonzero form has a nonzero stratum of degree <= d")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::DEFAULT_PRIMES;
    use crate::fatpoints::scheme::{MultiplicityVector, PointConfiguration};

    fn field() -> PrimeField {
        PrimeField::new(DEFAULT_PRIMES[0]).unwrap()
    }

    fn scheme(points: &[Vec<i64>], mults: &[u32]) -> FatPointScheme {
        let cfg = PointConfiguration::from_integers(points[0].len() - 1, points, false).unwrap();
        FatPointScheme::new(cfg, MultiplicityVector(mults.to_vec())).unwrap()
    }

    #[test]
    fn coordinate_point_conditions_annihilate_coefficients() {
        let s = scheme(&[vec![1, 0, 0]], &[2]);
        let cm = build_condition_matrix(&s, 2, field()).unwrap();
        assert_eq!(cm.shape(), (3, 6));
        let e = cm.matrix.rank_and_kernel();
        assert_eq!((e.rank, e.kernel.len()), (3, 3));
        // Kernel is spanned by x1^2, x1 x2, x2^2: columns 2, 4, 5 in grevlex order.
        let basis = MonomialBasis::new(3, 2);
        let allowed: Vec<usize> =
            [vec![0, 2, 0], vec![0, 1, 1], vec![0, 0, 2]].iter().map(|m| basis.index_of(m).unwrap()).collect();
        for v in &e.kernel {
            for (c, &x) in v.iter().enumerate() {
                if x != 0 {
                    assert!(allowed.contains(&c));
                }
            }
        }
    }

    #[test]
    fn shapes_follow_counting() {
        let s = scheme(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], &[1, 1, 1]);
        assert_eq!(build_condition_matrix(&s, 1, field()).unwrap().shape(), (3, 3));
        let s = scheme(&[vec![1, 2, 3], vec![0, 1, 5], vec![2, 0, 1]], &[3, 0, 2]);
        let cm = build_condition_matrix(&s, 4, field()).unwrap();
        assert_eq!(cm.shape(), (6 + 3, 15));
        assert_eq!(cm.row_points.iter().filter(|&&i| i == 1).count(), 0);
        assert!(build_condition_matrix(&s, 0, field()).is_err());
    }

    #[test]
    fn multiplicities_of_simple_forms() {
        let f = field();
        let basis = MonomialBasis::new(3, 2);
        let mut form = vec![0u64; basis.len()];
        form[basis.index_of(&[0, 1, 1]).unwrap()] = 1; // x1 * x2
        assert_eq!(actual_multiplicity(&form, 2, &[1, 0, 0], f).unwrap(), 2);
        assert_eq!(actual_multiplicity(&form, 2, &[0, 1, 0], f).unwrap(), 1);
        assert_eq!(actual_multiplicity(&form, 2, &[1, 1, 1], f).unwrap(), 0);
        // x0 - x1 passes through [1:1:5] with order 1.
        let lin = MonomialBasis::new(3, 1);
        let mut l = vec![0u64; 3];
        l[lin.index_of(&[1, 0, 0]).unwrap()] = 1;
        l[lin.index_of(&[0, 1, 0]).unwrap()] = f.neg(1);
        assert_eq!(actual_multiplicity(&l, 1, &[1, 1, 5], f).unwrap(), 1);
        assert_eq!(actual_multiplicity(&[0, 0, 0], 1, &[1, 1, 5], f).unwrap_err(), FatPointError::ZeroForm);
    }

    #[test]
    fn rational_rows_reduce_to_modular_rows() {
        let s = scheme(&[vec![2, 3, 5], vec![0, 1, 7]], &[2, 3]);
        let exact = rational_condition_rows(&s, 3).unwrap();
        let cm = build_condition_matrix(&s, 3, field()).unwrap();
        assert_eq!(exact.len(), cm.matrix.rows());
        for (i, row) in exact.iter().enumerate() {
            let reduced: Vec<u64> = row.iter().map(|q| field().from_rational(q).unwrap()).collect();
            assert_eq!(reduced, cm.matrix.row(i));
        }
    }
}
