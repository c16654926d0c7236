//! Rank modulo the prime `2^61 - 1`. It never exceeds the rank over the
//! rationals, so it is only used as a lower bound.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{Rat, RatMatrix};

pub(crate) const P: u64 = (1 << 61) - 1;

pub(crate) fn mul(a: u64, b: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(P)) as u64
}

pub(crate) fn add(a: u64, b: u64) -> u64 {
    (a + b) % P
}

pub(crate) fn sub(a: u64, b: u64) -> u64 {
    (a + P - b) % P
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    acc
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

fn int_mod(x: &BigInt) -> u64 {
    let r = x % BigInt::from(P);
    let r = if r < BigInt::zero() { r + BigInt::from(P) } else { r };
    r.to_u64().expect("reduced below the modulus")
}

/// `None` when the denominator vanishes modulo the prime.
pub(crate) fn rat_mod(x: &Rat) -> Option<u64> {
    let d = int_mod(x.denom());
    (d != 0).then(|| mul(int_mod(x.numer()), inv(d)))
}

/// Row-major `n x n` matrix reduced modulo the prime.
pub(crate) fn matrix_mod(m: &RatMatrix) -> Option<Vec<u64>> {
    m.entries().iter().map(rat_mod).collect()
}

/// `x y - y x` for `n x n` row-major residue matrices.
pub(crate) fn bracket_mod(x: &[u64], y: &[u64], n: usize) -> Vec<u64> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let (xik, yik) = (x[i * n + k], y[i * n + k]);
            if xik == 0 && yik == 0 {
                continue;
            }
            for j in 0..n {
                let v = sub(mul(xik, y[k * n + j]), mul(yik, x[k * n + j]));
                out[i * n + j] = add(out[i * n + j], v);
            }
        }
    }
    out
}

/// Rank of the matrix whose columns are `cols`.
pub(crate) fn rank_of_columns(mut cols: Vec<Vec<u64>>) -> usize {
    // column rank = row rank of the transpose; eliminate on the columns
    let len = cols.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..len {
        let Some(p) = (rank..cols.len()).find(|&i| cols[i][c] != 0) else {
            continue;
        };
        cols.swap(rank, p);
        let pinv = inv(cols[rank][c]);
        let (head, tail) = cols.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for row in tail.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let f = mul(row[c], pinv);
            for j in c..len {
                row[j] = sub(row[j], mul(f, pivot[j]));
            }
        }
        rank += 1;
        if rank == cols.len() {
            break;
        }
    }
    rank
}
