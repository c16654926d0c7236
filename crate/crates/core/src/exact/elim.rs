//! Fraction-free Gauss-Jordan elimination.
//!
//! Each row is scaled to a primitive integer vector before elimination.
//! A pivot step replaces `row_i` by `(a/g) * row_i - (b/g) * pivot_row`
//! (with `g = gcd(a, b)`) and then divides out the row content, so every
//! intermediate entry stays an integer and row growth is bounded by the
//! content removal. Only rows with a nonzero entry in the pivot column are
//! touched, which keeps the sparse Lie-algebra systems cheap.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Rat, RatMatrix};
use crate::error::{Error, Result};

/// Reduced row echelon form: `rows[i]` has a 1 in column `pivots[i]`
/// and zeros in every other pivot column.
pub(crate) struct Echelon {
    pub pivots: Vec<usize>,
    pub rows: Vec<Vec<Rat>>,
}

fn integer_row(row: &[Rat]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}

fn make_primitive(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter().filter(|x| !x.is_zero()) {
        g = g.gcd(x);
        if g.is_one() {
            return;
        }
    }
    if g > BigInt::one() {
        for x in row.iter_mut().filter(|x| !x.is_zero()) {
            *x /= &g;
        }
    }
}

pub(crate) fn echelon(m: &RatMatrix) -> Echelon {
    let ncols = m.cols();
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|i| {
            let mut r = integer_row(m.row(i));
            make_primitive(&mut r);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (above, rest) = rows.split_at_mut(r);
        let (prow, below) = rest.split_first_mut().expect("pivot row exists");
        let support: Vec<usize> = (c..ncols).filter(|&j| !prow[j].is_zero()).collect();
        for row in above.iter_mut().chain(below.iter_mut()) {
            if row[c].is_zero() {
                continue;
            }
            let g = prow[c].gcd(&row[c]);
            let a = &prow[c] / &g;
            let b = &row[c] / &g;
            if !a.is_one() {
                for x in row.iter_mut().filter(|x| !x.is_zero()) {
                    *x *= &a;
                }
            }
            for &j in &support {
                row[j] -= &b * &prow[j];
            }
            make_primitive(row);
        }
        pivots.push(c);
        r += 1;
    }
    let rows = rows
        .into_iter()
        .zip(&pivots)
        .map(|(row, &c)| {
            let lead = row[c].clone();
            row.into_iter()
                .map(|x| Rat::new(x, lead.clone()))
                .collect()
        })
        .collect();
    Echelon { pivots, rows }
}

pub fn rank(m: &RatMatrix) -> usize {
    echelon(m).pivots.len()
}

/// Canonical basis of `{x : m x = 0}` as column vectors.
///
/// There is one vector per non-pivot column `j` of the reduced echelon form:
/// coordinate `j` is 1, other free coordinates are 0.
pub fn kernel_basis(m: &RatMatrix) -> Vec<RatMatrix> {
    let ech = echelon(m);
    let ncols = m.cols();
    let mut is_pivot = vec![false; ncols];
    for &c in &ech.pivots {
        is_pivot[c] = true;
    }
    (0..ncols)
        .filter(|&j| !is_pivot[j])
        .map(|j| {
            let mut v = vec![Rat::zero(); ncols];
            v[j] = Rat::one();
            for (row, &c) in ech.rows.iter().zip(&ech.pivots) {
                v[c] = -row[j].clone();
            }
            RatMatrix::column(v)
        })
        .collect()
}

/// Particular solution of `a x = b` with every non-pivot coordinate zero,
/// or `None` when the system is inconsistent.
pub fn solve(a: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length");
    let n = a.cols();
    let aug = RatMatrix::from_fn(a.rows(), n + 1, |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    let ech = echelon(&aug);
    if ech.pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (row, &c) in ech.rows.iter().zip(&ech.pivots) {
        x[c] = row[n].clone();
    }
    Some(x)
}

pub(crate) fn inverse(m: &RatMatrix) -> Result<RatMatrix> {
    let n = m.rows();
    let aug = RatMatrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else if j - n == i {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    let ech = echelon(&aug);
    if ech.pivots.len() < n || ech.pivots[n - 1] >= n {
        return Err(Error::Singular);
    }
    Ok(RatMatrix::from_fn(n, n, |i, j| ech.rows[i][n + j].clone()))
}
