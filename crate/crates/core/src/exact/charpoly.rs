use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Poly, Rat, RatMatrix};
use crate::error::Result;

/// Berkowitz's division-free recurrence over the integers.
/// Returns the coefficients of `det(tI - a)`, leading coefficient first.
fn berkowitz(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let mut poly = vec![BigInt::one()];
    for r in 0..n {
        let mut toeplitz = vec![BigInt::zero(); r + 2];
        toeplitz[0] = BigInt::one();
        toeplitz[1] = -a[r][r].clone();
        let mut col: Vec<BigInt> = (0..r).map(|i| a[i][r].clone()).collect();
        for k in 0..r {
            let dot: BigInt = (0..r).map(|j| &a[r][j] * &col[j]).sum();
            toeplitz[k + 2] = -dot;
            if k + 1 < r {
                col = (0..r)
                    .map(|i| (0..r).map(|j| &a[i][j] * &col[j]).sum())
                    .collect();
            }
        }
        let next: Vec<BigInt> = (0..r + 2)
            .map(|i| {
                (0..=i.min(r))
                    .map(|j| &toeplitz[i - j] * &poly[j])
                    .sum()
            })
            .collect();
        poly = next;
    }
    poly
}

/// `det(tI - m)` as a monic polynomial.
///
/// The matrix is first scaled by the common denominator `d` of its entries;
/// if `d m` has characteristic polynomial `sum c_k t^k` then `m` has
/// `sum c_k d^(k - n) t^k`.
pub fn charpoly(m: &RatMatrix) -> Result<Poly> {
    m.require_square()?;
    let n = m.rows();
    let d = m
        .entries()
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| x.numer() * (&d / x.denom()))
                .collect()
        })
        .collect();
    let high_first = berkowitz(&scaled);
    let mut coeffs = vec![Rat::zero(); n + 1];
    let mut dpow = BigInt::one();
    // high_first[i] is the coefficient of t^(n - i); it carries d^i.
    for (i, c) in high_first.into_iter().enumerate() {
        coeffs[n - i] = Rat::new(c, dpow.clone());
        dpow *= &d;
    }
    Poly::monic(coeffs)
}

/// Smallest `k <= n` with `m^k = 0`, or `None` when `m` is not nilpotent.
pub fn nilpotency_index(m: &RatMatrix) -> Result<Option<usize>> {
    m.require_square()?;
    let n = m.rows();
    let mut power = m.clone();
    for k in 1..=n.max(1) {
        if power.is_zero() {
            return Ok(Some(k));
        }
        power = &power * m;
    }
    Ok(None)
}
