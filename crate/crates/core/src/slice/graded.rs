//! Exact inversion through the `ad h` grading of the slice.
//!
//! In a basis of `g(-1)^e` made of `ad h` eigenvectors (eigenvalue `l`), the
//! coordinate `c` of such a vector has weight `w = l/2 + 1`: replacing `X` by
//! `t^2 Ad(t^h) X` maps the slice to itself, scales `c` by `t^{2w}` and every
//! degree-`d` invariant by `t^{2d}`. A degree-`d` invariant is therefore a
//! polynomial in the coordinates of weight `< d` plus a linear form in those
//! of weight exactly `d`. Solving weight by weight is a sequence of exact
//! linear systems.

use num_traits::{One, Zero};

use crate::exact::{int, kernel_basis, rat, solve, Rat, RatMatrix};
use crate::pairs::{bracket, coordinates, SymmetricPair};

use super::{has_block_determinant, invariants, InvariantVector};

#[derive(Clone, Debug)]
pub(crate) struct Grading {
    /// Column `k` is the `k`-th eigenvector in slice coordinates.
    pub transform: RatMatrix,
    pub weights: Vec<Rat>,
}

/// `None` when `ad h` is not diagonalizable with integer eigenvalues on the
/// slice directions (not expected for a genuine triple).
pub(crate) fn grading(pair: &SymmetricPair, h: &RatMatrix, basis: &[RatMatrix]) -> Option<Grading> {
    let d = basis.len();
    let images = basis
        .iter()
        .map(|b| coordinates(basis, &bracket(h, b).ok()?))
        .collect::<Option<Vec<_>>>()?;
    let ad = RatMatrix::from_fn(d, d, |i, j| images[j][i].clone());
    let bound = 2 * pair.n() as i64;
    let mut vectors = Vec::new();
    let mut weights = Vec::new();
    for l in -bound..=bound {
        let shifted = &ad - &RatMatrix::identity(d).scale(&int(l));
        for v in kernel_basis(&shifted) {
            vectors.push(v.into_entries());
            weights.push(rat(l, 2) + Rat::one());
        }
    }
    (vectors.len() == d).then(|| Grading {
        transform: RatMatrix::from_fn(d, d, |i, j| vectors[j][i].clone()),
        weights,
    })
}

/// Homogeneous degree of each invariant entry.
fn degrees(pair: &SymmetricPair) -> Vec<Rat> {
    let n = pair.n();
    let mut out: Vec<Rat> = (0..n).map(|j| int((n - j) as i64)).collect();
    if has_block_determinant(pair) {
        out.push(int(pair.q() as i64));
    }
    out
}

/// Slice coordinates whose invariants agree with `target` in every degree
/// that carries a weight; the caller verifies the rest.
pub(crate) fn solve_graded(
    pair: &SymmetricPair,
    grading: &Grading,
    point: impl Fn(&[Rat]) -> RatMatrix,
    target: &InvariantVector,
) -> Option<Vec<Rat>> {
    let d = grading.weights.len();
    let degrees = degrees(pair);
    let to_slice = |g: &[Rat]| -> Vec<Rat> {
        (0..d)
            .map(|i| (0..d).map(|k| &grading.transform[(i, k)] * &g[k]).sum())
            .collect()
    };
    let eval = |g: &[Rat]| invariants(pair, &point(&to_slice(g))).ok();

    let mut levels: Vec<Rat> = grading.weights.clone();
    levels.sort();
    levels.dedup();
    let mut g = vec![Rat::zero(); d];
    for w in levels {
        let vars: Vec<usize> = (0..d).filter(|&k| grading.weights[k] == w).collect();
        let eqs: Vec<usize> = (0..degrees.len()).filter(|&j| degrees[j] == w).collect();
        if eqs.is_empty() {
            return None;
        }
        let base = eval(&g)?;
        let mut cols = Vec::with_capacity(vars.len());
        for &v in &vars {
            let mut probe = g.clone();
            probe[v] = Rat::one();
            let at = eval(&probe)?;
            cols.push(eqs.iter().map(|&j| &at.values()[j] - &base.values()[j]).collect::<Vec<Rat>>());
        }
        let lin = RatMatrix::from_fn(eqs.len(), vars.len(), |r, c| cols[c][r].clone());
        if lin.rank() < vars.len() {
            return None;
        }
        let rhs: Vec<Rat> = eqs.iter().map(|&j| &target.values()[j] - &base.values()[j]).collect();
        let sol = solve(&lin, &rhs)?;
        for (&v, s) in vars.iter().zip(sol) {
            g[v] = s;
        }
    }
    Some(to_slice(&g))
}
