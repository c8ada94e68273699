//! Dense elimination over word-sized prime fields, plus a fraction-free
//! rational oracle for small systems.
//!
//! The modular kernel keeps trailing entries lazily reduced: every stored
//! value stays below 2^63 and is congruent to the true entry. One update adds
//! a product below 2^62 and then conditionally subtracts the largest multiple
//! of p not exceeding 2^63, which restores the bound without a division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{PrimeField, Rational};

/// Row-major dense matrix over a prime field, entries reduced to `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModMatrix {
    rows: usize,
    cols: usize,
    field: PrimeField,
    data: Vec<u64>,
}

/// Outcome of a full Gauss-Jordan pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    pub rank: usize,
    /// Pivot column of each nonzero row of the reduced echelon form.
    pub pivots: Vec<usize>,
    /// Basis of the right kernel, one vector per free column.
    pub kernel: Vec<Vec<u64>>,
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize, field: PrimeField) -> Self {
        ModMatrix { rows, cols, field, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<u64>>, cols: usize, field: PrimeField) -> Self {
        let p = field.modulus();
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row");
            data.extend(row.into_iter().map(|v| v % p));
        }
        ModMatrix { rows: n, cols, field, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.field.modulus();
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: &[u64]) {
        assert_eq!(row.len(), self.cols);
        let p = self.field.modulus();
        self.data.extend(row.iter().map(|v| v % p));
        self.rows += 1;
    }

    /// `M * v` over the field.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect()
    }

    /// Rank by forward elimination only.
    pub fn rank(&self) -> usize {
        let mut data = self.data.clone();
        eliminate(&mut data, self.rows, self.cols, self.field, false).len()
    }

    /// Rank and a kernel basis from the reduced row echelon form.
    pub fn rank_and_kernel(&self) -> Elimination {
        let mut data = self.data.clone();
        let pivots = eliminate(&mut data, self.rows, self.cols, self.field, true);
        let f = self.field;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let kernel = (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u64; self.cols];
                v[free] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(data[i * self.cols + free]);
                }
                v
            })
            .collect();
        Elimination { rank: pivots.len(), pivots, kernel }
    }
}

/// In-place elimination with first-nonzero pivoting. Returns pivot columns.
/// With `full`, clears above pivots too and leaves the data fully reduced.
fn eliminate(data: &mut [u64], rows: usize, cols: usize, field: PrimeField, full: bool) -> Vec<usize> {
    let p = field.modulus();
    let wrap = (1u64 << 63) / p * p;
    let mut pivots = Vec::new();
    let mut pivot_row = vec![0u32; cols];
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let mut found = None;
        for i in rank..rows {
            let v = data[i * cols + c] % p;
            data[i * cols + c] = v;
            if v != 0 {
                found = Some(i);
                break;
            }
        }
        let Some(pr) = found else { continue };
        if pr != rank {
            let (head, tail) = data.split_at_mut(pr * cols);
            head[rank * cols..(rank + 1) * cols].swap_with_slice(&mut tail[..cols]);
        }
        let inv = field.inv(data[rank * cols + c]).expect("pivot is nonzero");
        {
            let row = &mut data[rank * cols..(rank + 1) * cols];
            for j in c..cols {
                let v = (row[j] % p) * inv % p;
                row[j] = v;
                pivot_row[j] = v as u32;
            }
        }
        let tail = &pivot_row[c + 1..];
        let targets = if full { 0..rows } else { rank + 1..rows };
        for i in targets {
            if i == rank {
                continue;
            }
            let row = &mut data[i * cols + c..(i + 1) * cols];
            let a = row[0] % p;
            row[0] = 0;
            if a == 0 {
                continue;
            }
            axpy_lazy(&mut row[1..], tail, (p - a) as u32, wrap);
        }
        pivots.push(c);
        rank += 1;
    }
    if full {
        for v in data.iter_mut() {
            *v %= p;
        }
    }
    pivots
}

/// `row += k * pivot`, keeping entries below 2^63 and congruent mod p.
#[inline(always)]
fn axpy_lazy_generic(row: &mut [u64], pivot: &[u32], k: u32, wrap: u64) {
    for (x, &b) in row.iter_mut().zip(pivot) {
        let t = x.wrapping_add((k as u64).wrapping_mul(b as u64));
        *x = t.min(t.wrapping_sub(wrap));
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx512f")]
unsafe fn axpy_lazy_avx512(row: &mut [u64], pivot: &[u32], k: u32, wrap: u64) {
    axpy_lazy_generic(row, pivot, k, wrap)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn axpy_lazy_avx2(row: &mut [u64], pivot: &[u32], k: u32, wrap: u64) {
    axpy_lazy_generic(row, pivot, k, wrap)
}

#[inline]
fn axpy_lazy(row: &mut [u64], pivot: &[u32], k: u32, wrap: u64) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("avx512f") {
            // SAFETY: the feature was detected at runtime.
            return unsafe { axpy_lazy_avx512(row, pivot, k, wrap) };
        }
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: the feature was detected at runtime.
            return unsafe { axpy_lazy_avx2(row, pivot, k, wrap) };
        }
    }
    axpy_lazy_generic(row, pivot, k, wrap)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("rational elimination limited to {limit} columns, matrix has {cols}")]
pub struct RationalSizeError {
    pub cols: usize,
    pub limit: usize,
}

/// Default column limit for exact elimination over the rationals.
pub const RATIONAL_COLUMN_LIMIT: usize = 400;

/// Rank over Q by Bareiss fraction-free elimination on integer rows.
pub fn rank_over_rationals(rows: &[Vec<Rational>], limit: usize) -> Result<usize, RationalSizeError> {
    let cols = rows.first().map_or(0, Vec::len);
    if cols > limit {
        return Err(RationalSizeError { cols, limit });
    }
    // Clear denominators row by row.
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| (q * Rational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    let n = m.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == n {
            break;
        }
        let Some(pr) = (rank..n).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, pr);
        for i in rank + 1..n {
            for j in c + 1..cols {
                let v = &m[rank][c] * &m[i][j] - &m[i][c] * &m[rank][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    Ok(rank)
}
