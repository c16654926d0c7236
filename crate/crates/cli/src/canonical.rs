//! `slice-rep` and `canonicalize`.

use serde::Serialize;

use ksection::exact::{ratio_serde, Rat};
use ksection::nilpotent::{centralizer_dim, regular_nilpotent};
use ksection::pairs::{make_pair, Family, SymmetricPair};
use ksection::sl2::complete_triple;
use ksection::slice::{invariant_len, invariants, make_slice, InvariantVector, KostantSlice};
use ksection::RatMatrix;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Canonical {
    #[serde(with = "ratio_serde::vec")]
    pub coords: Vec<Rat>,
    pub representative: RatMatrix,
    pub invariants: InvariantVector,
}

/// The slice through the explicit nilpotent of `pair`.
pub fn build_slice(pair: &SymmetricPair) -> Result<KostantSlice<'_>, CliError> {
    let triple = complete_triple(pair, &regular_nilpotent(pair))?;
    Ok(make_slice(pair, triple)?)
}

/// Slice coordinates and slice point in the orbit of `x`.
pub fn canonicalize(pair: &SymmetricPair, slice: &KostantSlice<'_>, x: &RatMatrix) -> Result<Canonical, CliError> {
    if x.rows() != pair.n() || x.cols() != pair.n() || !pair.in_minus(x) {
        return Err(CliError::Input(format!(
            "input is not an element of g(-1) for {}({},{})",
            pair.family(),
            pair.p(),
            pair.q()
        )));
    }
    let dim = centralizer_dim(pair, x)?;
    if dim != pair.rank_theta() {
        return Err(CliError::NonRegular {
            centralizer_dim: dim,
            rank_theta: pair.rank_theta(),
        });
    }
    let inv = invariants(pair, x)?;
    let coords = slice.invert(&inv)?;
    Ok(Canonical {
        representative: slice.point(&coords)?,
        coords,
        invariants: inv,
    })
}

pub fn cmd_canonicalize(family: Family, p: usize, q: usize, x: &RatMatrix) -> Result<Canonical, CliError> {
    let pair = make_pair(family, p, q)?;
    let slice = build_slice(&pair)?;
    canonicalize(&pair, &slice, x)
}

/// The slice point whose invariants are `target`.
pub fn cmd_slice_rep(family: Family, p: usize, q: usize, target: &InvariantVector) -> Result<RatMatrix, CliError> {
    let pair = make_pair(family, p, q)?;
    let expected = invariant_len(&pair);
    if target.len() != expected {
        return Err(CliError::Input(format!(
            "expected {expected} invariants for {family}({p},{q}), got {}",
            target.len()
        )));
    }
    let slice = build_slice(&pair)?;
    let coords = slice.invert(target)?;
    Ok(slice.point(&coords)?)
}
