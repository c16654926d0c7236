//! The affine slice `f + g(-1)^e` through an sl2-triple, conjugation
//! invariants of `g(-1)`, and inversion of the invariant map on the slice.
//!
//! The invariants of `X` are the coefficients of its characteristic
//! polynomial. For the orthogonal family with `p = q` the determinant of the
//! top-right block is appended: the characteristic polynomial only sees its
//! square, so without it two slice points share each invariant vector.

mod graded;
mod newton;
mod reconstruct;

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{charpoly, int, ratio_serde, ratio_string, rat_to_f64, Rat, RatMatrix};
use crate::nilpotent::centralizer;
use crate::pairs::{combine, Family, SymmetricPair};
use crate::sl2::Sl2Triple;

pub use reconstruct::best_rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InvariantVector {
    #[serde(with = "ratio_serde::vec")]
    values: Vec<Rat>,
}

impl InvariantVector {
    pub fn new(values: Vec<Rat>) -> Self {
        InvariantVector { values }
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Whether the invariant vector carries the top-right block determinant.
pub fn has_block_determinant(pair: &SymmetricPair) -> bool {
    pair.family() == Family::Orth && pair.p() == pair.q()
}

/// Length of [`invariants`] output for this pair.
pub fn invariant_len(pair: &SymmetricPair) -> usize {
    pair.n() + usize::from(has_block_determinant(pair))
}

/// Characteristic polynomial coefficients of `x`, constant term first and the
/// leading 1 omitted, plus the block determinant where applicable.
pub fn invariants(pair: &SymmetricPair, x: &RatMatrix) -> Result<InvariantVector> {
    pair.require_minus(x)?;
    let mut values = charpoly(x)?.lower_coeffs().to_vec();
    if has_block_determinant(pair) {
        let q = pair.q();
        values.push(x.block(0, q, q, q).determinant()?);
    }
    Ok(InvariantVector { values })
}

/// Power sums `p_1..p_n` of the roots of the monic polynomial whose lower
/// coefficients are `lower` (constant term first).
pub fn power_sums(lower: &[Rat]) -> Vec<Rat> {
    let n = lower.len();
    // e_k = (-1)^k c_{n-k}
    let e = |k: usize| -> Rat {
        let c = lower[n - k].clone();
        if k % 2 == 0 { c } else { -c }
    };
    let mut p: Vec<Rat> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut acc = Rat::zero();
        for i in 1..k {
            let term = e(i) * &p[k - i - 1];
            acc = if i % 2 == 1 { acc + term } else { acc - term };
        }
        let last = e(k) * int(k as i64);
        acc = if k % 2 == 1 { acc + last } else { acc - last };
        p.push(acc);
    }
    p
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_iterations: usize,
    pub starts: usize,
    pub denominator_bounds: Vec<u64>,
    /// Scaled residual norm below which an iterate counts as converged.
    pub tolerance: f64,
    /// Residual norm above which reconstruction is not attempted.
    pub reconstruct_below: f64,
    /// After the Newton starts are exhausted, solve exactly weight by weight
    /// along the `ad h` grading of the slice.
    pub graded_fallback: bool,
}

/// Which stage of [`KostantSlice::invert_traced`] produced the answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InversionMethod {
    /// Newton from the given start, then reconstruction at the given bound.
    Newton { start: usize, bound: u64 },
    Graded,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iterations: 200,
            starts: 25,
            denominator_bounds: vec![1_000, 1_000_000, 1_000_000_000_000],
            tolerance: 1e-13,
            reconstruct_below: 1e-4,
            graded_fallback: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct KostantSlice<'a> {
    pair: &'a SymmetricPair,
    triple: Sl2Triple,
    slice_basis: Vec<RatMatrix>,
    dim: usize,
    grading: Option<graded::Grading>,
}

/// `slice_basis` is the canonical basis of `g(-1)^e`.
pub fn make_slice(pair: &SymmetricPair, triple: Sl2Triple) -> Result<KostantSlice<'_>> {
    let slice_basis = centralizer(pair, &triple.e)?;
    if slice_basis.len() != pair.rank_theta() {
        return Err(Error::SliceDimension {
            expected: pair.rank_theta(),
            found: slice_basis.len(),
        });
    }
    let grading = graded::grading(pair, &triple.h, &slice_basis);
    Ok(KostantSlice {
        pair,
        triple,
        dim: slice_basis.len(),
        slice_basis,
        grading,
    })
}

impl<'a> KostantSlice<'a> {
    pub fn pair(&self) -> &'a SymmetricPair {
        self.pair
    }

    pub fn triple(&self) -> &Sl2Triple {
        &self.triple
    }

    pub fn basis(&self) -> &[RatMatrix] {
        &self.slice_basis
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn require_coords(&self, coords: &[Rat]) -> Result<()> {
        if coords.len() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: format!("{} slice coordinates", self.dim),
                found: coords.len().to_string(),
            })
        }
    }

    /// `f + sum coords[i] * basis[i]`
    pub fn point(&self, coords: &[Rat]) -> Result<RatMatrix> {
        self.require_coords(coords)?;
        Ok(&self.triple.f + &combine(&self.slice_basis, coords, self.pair.n()))
    }

    pub fn invert(&self, target: &InvariantVector) -> Result<Vec<Rat>> {
        self.invert_with(target, &SolverConfig::default())
    }

    pub fn invert_with(&self, target: &InvariantVector, config: &SolverConfig) -> Result<Vec<Rat>> {
        self.invert_traced(target, config).map(|(coords, _)| coords)
    }

    /// Floating-point Newton from several deterministic starts, followed by
    /// continued-fraction reconstruction and exact verification, then the
    /// graded exact solve if enabled. Only exactly verified coordinates are
    /// returned.
    pub fn invert_traced(
        &self,
        target: &InvariantVector,
        config: &SolverConfig,
    ) -> Result<(Vec<Rat>, InversionMethod)> {
        let n = self.pair.n();
        if target.len() != invariant_len(self.pair) {
            return Err(Error::DimensionMismatch {
                expected: format!("{} invariants", invariant_len(self.pair)),
                found: target.len().to_string(),
            });
        }
        if self.dim == 0 {
            let f_inv = invariants(self.pair, &self.triple.f)?;
            return if &f_inv == target {
                Ok((Vec::new(), InversionMethod::Graded))
            } else {
                Err(Error::NotFound)
            };
        }
        let mut targets: Vec<f64> = power_sums(&target.values[..n]).iter().map(rat_to_f64).collect();
        if has_block_determinant(self.pair) {
            targets.push(rat_to_f64(&target.values[n]));
        }
        let finite = targets.iter().all(|t| t.is_finite());
        let to_f64 = |m: &RatMatrix| DMatrix::from_row_slice(n, n, &m.to_f64());
        let system = newton::System {
            base: to_f64(&self.triple.f),
            dirs: self.slice_basis.iter().map(to_f64).collect(),
            targets,
            det_block: has_block_determinant(self.pair).then_some(self.pair.q()),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(target_hash(target));
        for s in 0..if finite { config.starts } else { 0 } {
            let start: Vec<f64> = if s == 0 {
                vec![0.0; self.dim]
            } else {
                let radius = [1.0, 10.0, 100.0][s % 3];
                (0..self.dim).map(|_| rng.random_range(-radius..=radius)).collect()
            };
            let a = system.solve_from(&start, config.max_iterations, config.tolerance);
            let residual = system.residual_norm(&a);
            if residual.is_nan() || residual >= config.reconstruct_below {
                continue;
            }
            for &bound in &config.denominator_bounds {
                let Some(coords) = a
                    .iter()
                    .map(|&x| best_rational(x, bound))
                    .collect::<Option<Vec<Rat>>>()
                else {
                    continue;
                };
                if invariants(self.pair, &self.point(&coords)?)? == *target {
                    return Ok((coords, InversionMethod::Newton { start: s, bound }));
                }
            }
        }
        if config.graded_fallback {
            if let Some(coords) = self.invert_graded(target) {
                return Ok((coords, InversionMethod::Graded));
            }
        }
        Err(Error::NotFound)
    }

    fn invert_graded(&self, target: &InvariantVector) -> Option<Vec<Rat>> {
        let grading = self.grading.as_ref()?;
        let point = |c: &[Rat]| self.point(c).expect("coordinate count");
        let coords = graded::solve_graded(self.pair, grading, point, target)?;
        (invariants(self.pair, &self.point(&coords).ok()?).ok()? == *target).then_some(coords)
    }

    /// Rank of the exact Jacobian of `coords -> invariants(point(coords))`.
    /// Each partial derivative is the derivative at 0 of the interpolating
    /// polynomial through `t = 0..=n` along a coordinate direction.
    pub fn jacobian_rank_at(&self, coords: &[Rat]) -> Result<usize> {
        self.require_coords(coords)?;
        let n = self.pair.n();
        let weights = derivative_weights(n);
        let len = invariant_len(self.pair);
        let mut columns = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut col = vec![Rat::zero(); len];
            for (t, w) in weights.iter().enumerate() {
                if w.is_zero() {
                    continue;
                }
                let mut c = coords.to_vec();
                c[i] += int(t as i64);
                let inv = invariants(self.pair, &self.point(&c)?)?;
                for (acc, v) in col.iter_mut().zip(inv.values()) {
                    *acc += v * w;
                }
            }
            columns.push(col);
        }
        Ok(RatMatrix::from_fn(len, self.dim, |r, c| columns[c][r].clone()).rank())
    }
}

pub fn slice_point(slice: &KostantSlice<'_>, coords: &[Rat]) -> Result<RatMatrix> {
    slice.point(coords)
}

pub fn invert_on_slice(slice: &KostantSlice<'_>, target: &InvariantVector) -> Result<Vec<Rat>> {
    slice.invert(target)
}

pub fn jacobian_rank_at(slice: &KostantSlice<'_>, coords: &[Rat]) -> Result<usize> {
    slice.jacobian_rank_at(coords)
}

/// `L_j'(0)` for the Lagrange basis on nodes `0..=m`.
fn derivative_weights(m: usize) -> Vec<Rat> {
    let node = |k: usize| int(k as i64);
    (0..=m)
        .map(|j| {
            if j == 0 {
                (1..=m).map(|k| -Rat::one() / node(k)).sum()
            } else {
                let mut num = Rat::one();
                let mut den = Rat::one();
                for k in 0..=m {
                    if k == j {
                        continue;
                    }
                    if k != 0 {
                        num *= -node(k);
                    }
                    den *= node(j) - node(k);
                }
                num / den
            }
        })
        .collect()
}

/// FNV-1a over the canonical string forms of the values.
fn target_hash(target: &InvariantVector) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in target.values() {
        for b in ratio_string(v).bytes().chain(*b",") {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}
