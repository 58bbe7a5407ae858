//! Exact linear algebra over the rationals.
//!
//! Forward elimination is fraction-free (Bareiss): every row is first scaled
//! to integers, and all intermediate entries stay integral because each one
//! is a minor of the scaled input. Rationals only reappear during back
//! substitution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::{common_denominator, Q};

/// Scales each row by the lcm of its denominators. Row space and rank are
/// unchanged.
fn integer_rows(rows: &[Vec<Q>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let d = common_denominator(row.iter());
            row.iter()
                .map(|v| v.numer() * (&d / v.denom()))
                .collect()
        })
        .collect()
}

/// Fraction-free row echelon form. Returns the pivot columns; the matrix is
/// left in echelon form with pivots in rows `0..pivots.len()`.
pub fn bareiss_echelon(m: &mut [Vec<BigInt>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, bottom) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = pivot_row[c].clone();
        for row in bottom.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let num = &pivot * &row[j] - &lead * &pivot_row[j];
                let (quo, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                row[j] = quo;
            }
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    pivot_columns(rows).len()
}

/// Pivot columns of the reduced echelon form, i.e. a maximal set of linearly
/// independent columns chosen greedily from the left.
pub fn pivot_columns(rows: &[Vec<Q>]) -> Vec<usize> {
    let mut m = integer_rows(rows);
    bareiss_echelon(&mut m)
}

/// Solves `a x = b` for every column of `b` when `a` is square and
/// nonsingular. Returns `None` for singular `a`.
pub fn solve_many(a: &[Vec<Q>], b: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    assert_eq!(b.len(), n, "right-hand side height mismatch");
    if n == 0 {
        return Some(Vec::new());
    }
    let width = b[0].len();
    let augmented: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| {
            assert_eq!(ra.len(), n, "matrix must be square");
            ra.iter().chain(rb.iter()).cloned().collect()
        })
        .collect();
    let mut m = integer_rows(&augmented);
    let pivots = bareiss_echelon(&mut m);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    // Back substitution on the integer echelon form.
    let mut x = vec![vec![Q::zero(); width]; n];
    for i in (0..n).rev() {
        let diag = Q::from_integer(m[i][i].clone());
        for col in 0..width {
            let mut acc = Q::from_integer(m[i][n + col].clone());
            for j in i + 1..n {
                if !m[i][j].is_zero() {
                    acc -= Q::from_integer(m[i][j].clone()) * &x[j][col];
                }
            }
            x[i][col] = acc / &diag;
        }
    }
    Some(x)
}

pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let rhs: Vec<Vec<Q>> = b.iter().map(|v| vec![v.clone()]).collect();
    solve_many(a, &rhs).map(|x| x.into_iter().map(|mut r| r.remove(0)).collect())
}

pub fn inverse(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let identity: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Q::one() } else { Q::zero() })
                .collect()
        })
        .collect();
    solve_many(a, &identity)
}

pub fn mat_vec(a: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(r, x)| !r.is_zero() && !x.is_zero())
                .fold(Q::zero(), |acc, (r, x)| acc + r * x)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| q(v)).collect())
            .collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        assert_eq!(pivot_columns(&a), vec![0, 1]);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]])), 0);
    }

    #[test]
    fn skipped_column_stays_exact() {
        let a = m(&[&[1, 1, 2, 3], &[2, 2, 5, 7], &[3, 3, 7, 11]]);
        assert_eq!(pivot_columns(&a), vec![0, 2, 3]);
    }

    #[test]
    fn solve_and_invert() {
        let a = vec![
            vec![frac(1, 2), frac(1, 3)],
            vec![frac(1, 4), q(1)],
        ];
        let x = solve(&a, &[q(1), q(2)]).unwrap();
        assert_eq!(mat_vec(&a, &x), vec![q(1), q(2)]);
        let inv = inverse(&a).unwrap();
        let id0 = mat_vec(&a, &[inv[0][0].clone(), inv[1][0].clone()]);
        assert_eq!(id0, vec![q(1), q(0)]);
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }
}
