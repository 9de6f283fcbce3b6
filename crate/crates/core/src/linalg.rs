//! Small dense exact linear algebra: fraction-free rank, null spaces and
//! span membership over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Clears denominators of a rational row and divides out the content.
fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    primitive(ints)
}

fn primitive(mut row: Vec<BigInt>) -> Vec<BigInt> {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
    row
}

/// Rank by fraction-free elimination on integer rows.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut work: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| integer_row(r))
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let cols = work.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..work.len()).find(|&i| !work[i][col].is_zero()) else {
            continue;
        };
        work.swap(rank, pivot);
        let (head, tail) = work.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let g = prow[col].gcd(&row[col]);
            let a = &prow[col] / &g;
            let b = &row[col] / &g;
            let updated: Vec<BigInt> = row.iter().zip(prow.iter()).map(|(x, p)| &a * x - &b * p).collect();
            *row = primitive(updated);
        }
        work.retain(|r| r.iter().any(|x| !x.is_zero()));
        rank += 1;
        if rank >= work.len() {
            break;
        }
    }
    rank
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(prow.iter()) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A basis of `{x : A x = 0}` for the `rows × cols` matrix `a`.
pub fn null_space(a: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); cols];
            x[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = -m[row][f].clone();
            }
            x
        })
        .collect()
}

/// Coefficients `x` with `Σ_i x_i columns[i] = target`, if any exist.
pub fn solve_columns(columns: &[Vec<BigRational>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = columns.len();
    let mut m: Vec<Vec<BigRational>> = (0..target.len())
        .map(|i| {
            let mut row: Vec<BigRational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = m[row][n].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational;

    fn q(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&x| rational(x, 1)).collect()).collect()
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&q(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&q(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])), 3);
        assert_eq!(rank(&q(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])), 2);
        assert_eq!(rank(&q(&[&[0, 0], &[0, 0]])), 0);
        let fractional = vec![vec![rational(1, 3), rational(1, 2)], vec![rational(2, 3), rational(1, 1)]];
        assert_eq!(rank(&fractional), 1);
    }

    #[test]
    fn null_space_and_solve() {
        let a = q(&[&[1, 1, 0], &[0, 0, 1]]);
        let ns = null_space(&a, 3);
        assert_eq!(ns, vec![vec![rational(-1, 1), rational(1, 1), rational(0, 1)]]);
        let cols = q(&[&[1, 0, 1], &[0, 1, 1]]);
        let x = solve_columns(&cols, &[rational(2, 1), rational(3, 1), rational(5, 1)]).unwrap();
        assert_eq!(x, vec![rational(2, 1), rational(3, 1)]);
        assert!(solve_columns(&cols, &[rational(1, 1), rational(1, 1), rational(0, 1)]).is_none());
    }
}
