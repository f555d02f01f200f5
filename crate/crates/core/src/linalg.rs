//! Small dense linear algebra shared by the other modules.
//!
//! Pfaffians are written once, generically over [`Ring`], so the same
//! expansion runs on `f64` and on [`Interval`](crate::certify::Interval).

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Commutative ring operations needed by the Pfaffian expansion.
pub trait Ring:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
}

/// Pfaffian of the antisymmetric matrix whose upper entries are `entry(i, j)`,
/// by first-row expansion. `entry` is only queried with `i < j`.
pub fn pfaffian_with<T: Ring>(n: usize, entry: &impl Fn(usize, usize) -> T) -> Result<T> {
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    let idx: Vec<usize> = (0..n).collect();
    Ok(pfaffian_rec(entry, &idx))
}

fn pfaffian_rec<T: Ring>(entry: &impl Fn(usize, usize) -> T, idx: &[usize]) -> T {
    if idx.is_empty() {
        return T::one();
    }
    let first = idx[0];
    let mut acc = T::zero();
    let mut rest = Vec::with_capacity(idx.len().saturating_sub(2));
    for (pos, &k) in idx.iter().enumerate().skip(1) {
        rest.clear();
        rest.extend(idx[1..].iter().copied().filter(|&x| x != k));
        let term = entry(first, k) * pfaffian_rec(entry, &rest);
        acc = if pos % 2 == 1 { acc + term } else { acc - term };
    }
    acc
}

/// Pfaffian cofactors of row `row`: the vector `c` with
/// `A c = Pf(A) e_row`. When `Pf(A) = 0` every such vector lies in the
/// kernel of `A`, with components that are polynomials in the entries.
pub fn pfaffian_cofactors<T: Ring>(
    n: usize,
    row: usize,
    entry: &impl Fn(usize, usize) -> T,
) -> Result<Vec<T>> {
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    if row >= n {
        return Err(Error::DimensionMismatch { expected: n, found: row });
    }
    let mut out = vec![T::zero(); n];
    for (k, slot) in out.iter_mut().enumerate() {
        if k == row {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|&x| x != row && x != k).collect();
        let minor = pfaffian_rec(entry, &idx);
        let parity = row + k + 1 + usize::from(row > k);
        *slot = if parity.is_multiple_of(2) { minor } else { -minor };
    }
    Ok(out)
}

/// Pfaffian of a dense antisymmetric matrix (only the upper triangle is read).
pub fn pfaffian(a: &DMatrix<f64>) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: a.ncols() });
    }
    pfaffian_with(a.nrows(), &|i, j| a[(i, j)])
}

/// Signature triple of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inertia {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

impl Inertia {
    /// Counts signs, treating `|λ| < rel_tol * max|λ|` as zero.
    pub fn from_eigenvalues(eigs: &[f64], rel_tol: f64) -> Self {
        let scale = eigs.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
        let cut = rel_tol * scale;
        let mut inertia = Inertia { positive: 0, zero: 0, negative: 0 };
        for &l in eigs {
            if l.abs() <= cut {
                inertia.zero += 1;
            } else if l > 0.0 {
                inertia.positive += 1;
            } else {
                inertia.negative += 1;
            }
        }
        inertia
    }

    pub fn total(&self) -> usize {
        self.positive + self.zero + self.negative
    }
}

/// Neumaier-compensated sum; exact up to a final rounding for short inputs.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut carry) = (0.0_f64, 0.0_f64);
    for x in values {
        let t = sum + x;
        carry += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    sum + carry
}

/// Largest `|a_ij - a_ji|`, relative to `max(1, max|a_ij|)`.
pub fn symmetry_defect(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let scale = a.amax().max(1.0);
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    worst / scale
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    let mut eigs: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    eigs.sort_by(f64::total_cmp);
    eigs
}

/// Eigenvalues of a general real matrix as `(re, im)` pairs, sorted by real part.
pub fn general_eigenvalues(a: &DMatrix<f64>) -> Vec<(f64, f64)> {
    let mut eigs: Vec<(f64, f64)> =
        a.complex_eigenvalues().iter().map(|c| (c.re, c.im)).collect();
    eigs.sort_by(|x, y| x.0.total_cmp(&y.0));
    eigs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancelled_terms() {
        assert_eq!(compensated_sum([1e16, 1.0, -1e16]), 1.0);
        assert_eq!([1e16, 1.0, -1e16].iter().sum::<f64>(), 0.0);
    }

    fn antisym(n: usize, seed: u64) -> DMatrix<f64> {
        // xorshift keeps this test free of extra dependencies
        let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let mut a = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = next();
                a[(i, j)] = v;
                a[(j, i)] = -v;
            }
        }
        a
    }

    #[test]
    fn pfaffian_of_4x4_matches_closed_form() {
        let a = antisym(4, 3);
        let expected = a[(0, 1)] * a[(2, 3)] - a[(0, 2)] * a[(1, 3)] + a[(0, 3)] * a[(1, 2)];
        assert!((pfaffian(&a).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn pfaffian_squares_to_determinant() {
        for n in [2, 4, 6, 8] {
            for seed in 1..20 {
                let a = antisym(n, seed);
                let pf = pfaffian(&a).unwrap();
                let det = a.determinant();
                assert!((pf * pf - det).abs() <= 1e-10 * det.abs().max(1e-12), "n={n} seed={seed}");
            }
        }
    }

    #[test]
    fn odd_pfaffian_is_rejected() {
        assert_eq!(pfaffian(&DMatrix::zeros(3, 3)), Err(Error::OddDimension(3)));
    }

    #[test]
    fn cofactor_vectors_satisfy_adjugate_identity() {
        for n in [4, 6, 8] {
            let a = antisym(n, 11 + n as u64);
            let pf = pfaffian(&a).unwrap();
            for row in 0..n {
                let c = pfaffian_cofactors(n, row, &|i, j| a[(i, j)]).unwrap();
                let c = nalgebra::DVector::from_vec(c);
                let ac = &a * c;
                for k in 0..n {
                    let want = if k == row { pf } else { 0.0 };
                    assert!((ac[k] - want).abs() < 1e-12, "n={n} row={row} k={k}");
                }
            }
        }
    }

    #[test]
    fn inertia_counts_signs() {
        let i = Inertia::from_eigenvalues(&[1.0, 0.0, -2.0], 1e-8);
        assert_eq!(i, Inertia { positive: 1, zero: 1, negative: 1 });
    }
}
