//! Dense exact integer linear algebra for small symmetric forms.

#![allow(clippy::needless_range_loop)] // row operations read one row while writing another

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Fraction-free Gaussian elimination.
pub fn bareiss_determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = to_big(m);
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Nonzero invariant factors of an integer matrix, in divisibility order.
/// The cokernel of a square nonsingular `m` is `⊕ ℤ/dᵢ`.
pub fn smith_invariants(m: &[Vec<i64>]) -> Vec<BigInt> {
    let mut a = to_big(m);
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero absolute value in the remaining block.
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()));
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = a[i][t].div_floor(&a[t][t]);
            if !q.is_zero() {
                for j in t..cols {
                    let v = &a[i][j] - &q * &a[t][j];
                    a[i][j] = v;
                }
            }
            clean &= a[i][t].is_zero();
        }
        for j in t + 1..cols {
            let q = a[t][j].div_floor(&a[t][t]);
            if !q.is_zero() {
                for row in a.iter_mut().skip(t) {
                    let v = &row[j] - &q * &row[t];
                    row[j] = v;
                }
            }
            clean &= a[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // Enforce divisibility of the rest of the block by the pivot.
        let bad = (t + 1..rows)
            .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_multiple_of(&a[t][t]));
        if let Some((i, _)) = bad {
            for j in t..cols {
                let v = &a[t][j] + &a[i][j];
                a[t][j] = v;
            }
            continue;
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Exact solution of `m·y = v` for nonsingular square `m`.
pub fn solve_rational(m: &[Vec<i64>], v: &[i64]) -> Option<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .zip(v)
        .map(|(row, &rhs)| {
            row.iter().chain(std::iter::once(&rhs)).map(|&x| BigRational::from_integer(x.into())).collect()
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(k, p);
        let pivot = a[k][k].clone();
        for x in a[k].iter_mut() {
            *x = &*x / &pivot;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in k..=n {
                    let v = &a[i][j] - &f * &a[k][j];
                    a[i][j] = v;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn determinant_small() {
        assert_eq!(bareiss_determinant(&[vec![-4]]), BigInt::from(-4));
        assert_eq!(bareiss_determinant(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(bareiss_determinant(&[vec![-5, 1], vec![1, -2]]), BigInt::from(9));
        assert_eq!(bareiss_determinant(&[vec![1, 2], vec![2, 4]]), BigInt::zero());
    }

    #[test]
    fn smith_of_diagonal_and_mixed() {
        assert_eq!(smith_invariants(&[vec![2, 0], vec![0, 3]]), big(&[1, 6]));
        assert_eq!(smith_invariants(&[vec![2, 0], vec![0, 4]]), big(&[2, 4]));
        assert_eq!(smith_invariants(&[vec![-5, 1], vec![1, -2]]), big(&[1, 9]));
        assert_eq!(smith_invariants(&[vec![0, 0], vec![0, 0]]), big(&[]));
    }

    #[test]
    fn rational_solve() {
        let y = solve_rational(&[vec![-4]], &[2]).unwrap();
        assert_eq!(y, vec![BigRational::new((-1).into(), 2.into())]);
        assert!(solve_rational(&[vec![1, 1], vec![1, 1]], &[1, 1]).is_none());
    }
}
