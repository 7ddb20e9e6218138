//! Small exact linear algebra over `BigInt` / `BigRational`.
//!
//! Sizes here are tiny (dimension at most a handful), so everything is plain
//! Gaussian elimination without pivoting strategy beyond "first nonzero".

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub(crate) fn to_rational_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect()
}

/// Rank of a rational matrix given by rows.
pub fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_row[col];
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x -= &factor * p;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Rank of an integer matrix, computed over the rationals.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    rank(to_rational_rows(rows))
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = ((k + 1)..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Primitive integer normal to the hyperplane spanned by `rows`
/// (an `(n-1) x n` integer matrix), via signed maximal minors.
///
/// Returns `None` when the rows are linearly dependent.
pub fn primitive_normal(rows: &[Vec<i64>], n: usize) -> Result<Option<Vec<i64>>> {
    debug_assert!(rows.len() + 1 == n);
    let mut normal: Vec<BigInt> = Vec::with_capacity(n);
    for skip in 0..n {
        let minor: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != skip)
                    .map(|(_, &x)| BigInt::from(x))
                    .collect()
            })
            .collect();
        let det = determinant(minor);
        normal.push(if skip % 2 == 0 { det } else { -det });
    }
    let g = normal.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return Ok(None);
    }
    normal
        .into_iter()
        .map(|x| {
            (x / &g)
                .to_i64()
                .ok_or_else(|| Error::Overflow("facet normal exceeds 64-bit range".into()))
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

/// Solve the square system `a x = b` exactly; `None` if `a` is singular.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut().skip(col) {
            *x *= &inv;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x -= &factor * p;
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Barycentric coordinates of `x` with respect to the simplex `simplex`
/// (`n + 1` affinely independent points in dimension `n`), if nondegenerate.
pub fn barycentric(simplex: &[&[i64]], x: &[i64]) -> Option<Vec<BigRational>> {
    let n = x.len();
    // Rows: one per coordinate plus the affine "sum to one" row.
    let mut a = vec![vec![BigRational::zero(); simplex.len()]; n + 1];
    for (j, v) in simplex.iter().enumerate() {
        for i in 0..n {
            a[i][j] = BigRational::from_integer(BigInt::from(v[i]));
        }
        a[n][j] = BigRational::one();
    }
    let mut b: Vec<BigRational> = x
        .iter()
        .map(|&c| BigRational::from_integer(BigInt::from(c)))
        .collect();
    b.push(BigRational::one());
    solve(&a, &b)
}

pub(crate) fn is_nonnegative(coeffs: &[BigRational]) -> bool {
    coeffs.iter().all(|c| !c.is_negative())
}
