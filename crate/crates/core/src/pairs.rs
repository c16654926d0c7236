//! Symmetric pairs `(g, theta)` for the three classical families.
//!
//! `theta` is conjugation by `I_{p,q} = diag(1_p, -1_q)`. The orthogonal and
//! symplectic algebras are cut out of `gl_n` by `J X^t J^{-1} = -X`, with
//! `J = diag(J_p, -J_q)` or `J = diag(J'_p, J'_q)` respectively.
//!
//! Bases are never written down by hand: each one is the canonical kernel
//! basis of the defining linear conditions, with coordinates ordered by
//! (block, row, col) where the blocks are top-left, top-right, bottom-left,
//! bottom-right.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, kernel_basis, solve, Rat, RatMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `gl_{p+q}`
    Gl,
    /// `o(J_{p,q})`, `|p - q| <= 1`
    #[serde(rename = "o")]
    Orth,
    /// `sp(J'_{p,q})`, `p` and `q` even
    Sp,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Gl, Family::Orth, Family::Sp];

    pub fn name(self) -> &'static str {
        match self {
            Family::Gl => "gl",
            Family::Orth => "o",
            Family::Sp => "sp",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gl" => Ok(Family::Gl),
            "o" | "orth" => Ok(Family::Orth),
            "sp" => Ok(Family::Sp),
            _ => Err(Error::Parse(format!("unknown family `{s}` (expected gl, o or sp)"))),
        }
    }
}

/// Eigenvalue of `theta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn value(self) -> Rat {
        match self {
            Sign::Plus => Rat::one(),
            Sign::Minus => -Rat::one(),
        }
    }
}

/// The anti-diagonal `J_r` with ones on the anti-diagonal.
pub fn j_sym(r: usize) -> RatMatrix {
    RatMatrix::from_fn(r, r, |i, j| if i + j + 1 == r { Rat::one() } else { Rat::zero() })
}

/// The anti-diagonal `J'_r` with entries `1, -1, 1, ...` from the top row down.
pub fn j_alt(r: usize) -> RatMatrix {
    RatMatrix::from_fn(r, r, |i, j| {
        if i + j + 1 != r {
            Rat::zero()
        } else if i % 2 == 0 {
            Rat::one()
        } else {
            -Rat::one()
        }
    })
}

/// `diag(1_p, -1_q)`
pub fn i_pq(p: usize, q: usize) -> RatMatrix {
    let d: Vec<Rat> = (0..p + q).map(|i| if i < p { int(1) } else { int(-1) }).collect();
    RatMatrix::diagonal(&d)
}

#[derive(Clone, Debug)]
pub struct SymmetricPair {
    family: Family,
    p: usize,
    q: usize,
    form: Option<RatMatrix>,
    form_inv: Option<RatMatrix>,
    invol: RatMatrix,
    basis_g: Vec<RatMatrix>,
    basis_plus: Vec<RatMatrix>,
    basis_minus: Vec<RatMatrix>,
    rank_theta: usize,
}

fn violation(family: Family, p: usize, q: usize, reason: &str) -> Error {
    Error::ConstraintViolation {
        family,
        p,
        q,
        reason: reason.to_string(),
    }
}

/// Checks the family constraints without building anything.
pub fn validate(family: Family, p: usize, q: usize) -> Result<()> {
    if q == 0 {
        return Err(violation(family, p, q, "p and q must be positive"));
    }
    if family == Family::Sp && (p % 2 != 0 || q % 2 != 0) {
        return Err(violation(family, p, q, "p and q must be even"));
    }
    if p < q {
        return Err(violation(
            family,
            p,
            q,
            "p must be at least q (the pair (q, p) is isomorphic; swap the arguments)",
        ));
    }
    if family == Family::Orth && p - q > 1 {
        return Err(violation(family, p, q, "|p - q| must be at most 1"));
    }
    Ok(())
}

/// Matrix positions in (block, row, col) order.
fn coordinate_order(p: usize, n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * n);
    let ranges = [(0..p, 0..p), (0..p, p..n), (p..n, 0..p), (p..n, p..n)];
    for (rows, cols) in ranges {
        for i in rows.clone() {
            for j in cols.clone() {
                out.push((i, j));
            }
        }
    }
    out
}

/// Column `k` of the result is the flattened output of `f` on `inputs[k]`.
pub(crate) fn map_matrix<F>(inputs: &[RatMatrix], f: F) -> RatMatrix
where
    F: Fn(&RatMatrix) -> Vec<Rat>,
{
    let columns: Vec<Vec<Rat>> = inputs.iter().map(f).collect();
    let rows = columns.first().map_or(0, Vec::len);
    RatMatrix::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
}

/// `sum_k coeffs[k] * basis[k]`
pub fn combine(basis: &[RatMatrix], coeffs: &[Rat], n: usize) -> RatMatrix {
    assert_eq!(basis.len(), coeffs.len(), "coefficient count");
    let mut out = RatMatrix::zeros(n, n);
    for (b, c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            out = &out + &b.scale(c);
        }
    }
    out
}

/// Coordinates of `x` in the span of `basis`, if it lies there.
pub fn coordinates(basis: &[RatMatrix], x: &RatMatrix) -> Option<Vec<Rat>> {
    if basis.is_empty() {
        return x.is_zero().then(Vec::new);
    }
    let a = map_matrix(basis, |b| b.entries().to_vec());
    solve(&a, x.entries())
}

pub fn bracket(x: &RatMatrix, y: &RatMatrix) -> Result<RatMatrix> {
    x.require_square()?;
    y.require_shape(x.rows(), x.cols())?;
    Ok(&(x * y) - &(y * x))
}

impl SymmetricPair {
    pub fn new(family: Family, p: usize, q: usize) -> Result<Self> {
        validate(family, p, q)?;
        let n = p + q;
        let form = match family {
            Family::Gl => None,
            Family::Orth => Some(RatMatrix::block_diag(&j_sym(p), &-&j_sym(q))),
            Family::Sp => Some(RatMatrix::block_diag(&j_alt(p), &j_alt(q))),
        };
        let form_inv = form.as_ref().map(|j| j.inverse().expect("forms are invertible"));
        let mut pair = SymmetricPair {
            family,
            p,
            q,
            form,
            form_inv,
            invol: i_pq(p, q),
            basis_g: Vec::new(),
            basis_plus: Vec::new(),
            basis_minus: Vec::new(),
            rank_theta: match family {
                Family::Gl | Family::Orth => q,
                Family::Sp => q / 2,
            },
        };
        let order = coordinate_order(p, n);
        let units: Vec<RatMatrix> = order
            .iter()
            .map(|&(i, j)| {
                let mut u = RatMatrix::zeros(n, n);
                u[(i, j)] = Rat::one();
                u
            })
            .collect();
        pair.basis_g = pair.solve_conditions(&units, None);
        pair.basis_plus = pair.solve_conditions(&units, Some(Sign::Plus));
        pair.basis_minus = pair.solve_conditions(&units, Some(Sign::Minus));
        Ok(pair)
    }

    /// Kernel of the membership conditions (plus the theta-eigenvalue
    /// condition when `sign` is given), expressed back as matrices.
    fn solve_conditions(&self, units: &[RatMatrix], sign: Option<Sign>) -> Vec<RatMatrix> {
        let conditions = map_matrix(units, |u| {
            let mut out = Vec::new();
            if let Some(defect) = self.algebra_defect(u) {
                out.extend(defect.into_entries());
            }
            if let Some(s) = sign {
                out.extend((&self.apply_theta_unchecked(u) - &u.scale(&s.value())).into_entries());
            }
            out
        });
        let n = self.n();
        if conditions.rows() == 0 {
            return units.to_vec();
        }
        kernel_basis(&conditions)
            .into_iter()
            .map(|v| combine(units, v.entries(), n))
            .collect()
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// `J_{p,q}` or `J'_{p,q}`; `None` for the general linear family.
    pub fn form(&self) -> Option<&RatMatrix> {
        self.form.as_ref()
    }

    pub fn form_inv(&self) -> Option<&RatMatrix> {
        self.form_inv.as_ref()
    }

    pub fn invol(&self) -> &RatMatrix {
        &self.invol
    }

    pub fn rank_theta(&self) -> usize {
        self.rank_theta
    }

    pub fn basis_g(&self) -> &[RatMatrix] {
        &self.basis_g
    }

    pub fn eigenspace_basis(&self, sign: Sign) -> &[RatMatrix] {
        match sign {
            Sign::Plus => &self.basis_plus,
            Sign::Minus => &self.basis_minus,
        }
    }

    pub fn basis_plus(&self) -> &[RatMatrix] {
        &self.basis_plus
    }

    pub fn basis_minus(&self) -> &[RatMatrix] {
        &self.basis_minus
    }

    fn apply_theta_unchecked(&self, x: &RatMatrix) -> RatMatrix {
        // I_{p,q} is diagonal with entries +-1, so conjugation flips the
        // sign of the two off-diagonal blocks.
        let p = self.p;
        RatMatrix::from_fn(x.rows(), x.cols(), |i, j| {
            if (i < p) == (j < p) {
                x[(i, j)].clone()
            } else {
                -x[(i, j)].clone()
            }
        })
    }

    pub fn apply_theta(&self, x: &RatMatrix) -> Result<RatMatrix> {
        x.require_shape(self.n(), self.n())?;
        Ok(self.apply_theta_unchecked(x))
    }

    /// `J X^t J^{-1} + X`, which vanishes exactly on the algebra.
    fn algebra_defect(&self, x: &RatMatrix) -> Option<RatMatrix> {
        let (j, j_inv) = (self.form.as_ref()?, self.form_inv.as_ref()?);
        Some(&(&(j * &x.transpose()) * j_inv) + x)
    }

    pub fn in_algebra(&self, x: &RatMatrix) -> bool {
        if x.rows() != self.n() || x.cols() != self.n() {
            return false;
        }
        self.algebra_defect(x).is_none_or(|d| d.is_zero())
    }

    fn in_eigenspace(&self, x: &RatMatrix, sign: Sign) -> bool {
        self.in_algebra(x) && self.apply_theta_unchecked(x) == x.scale(&sign.value())
    }

    /// Membership in `g(1)`.
    pub fn in_plus(&self, x: &RatMatrix) -> bool {
        self.in_eigenspace(x, Sign::Plus)
    }

    /// Membership in `g(-1)`.
    pub fn in_minus(&self, x: &RatMatrix) -> bool {
        self.in_eigenspace(x, Sign::Minus)
    }

    pub(crate) fn require_minus(&self, x: &RatMatrix) -> Result<()> {
        x.require_shape(self.n(), self.n())?;
        if self.in_minus(x) {
            Ok(())
        } else {
            Err(Error::NotInSpace("g(-1)"))
        }
    }
}

/// Convenience constructor mirroring [`SymmetricPair::new`].
pub fn make_pair(family: Family, p: usize, q: usize) -> Result<SymmetricPair> {
    SymmetricPair::new(family, p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn anti_block(p: usize, q: usize) -> RatMatrix {
        RatMatrix::from_fn(p + q, p + q, |i, j| {
            if (i < p) != (j < p) {
                int((i * 3 + j) as i64 + 1)
            } else {
                Rat::zero()
            }
        })
    }

    #[test]
    fn constraint_violations() {
        assert!(matches!(
            make_pair(Family::Sp, 3, 2),
            Err(Error::ConstraintViolation { ref reason, .. }) if reason.contains("even")
        ));
        assert!(matches!(
            make_pair(Family::Gl, 1, 2),
            Err(Error::ConstraintViolation { ref reason, .. }) if reason.contains("at least")
        ));
        assert!(matches!(
            make_pair(Family::Orth, 3, 1),
            Err(Error::ConstraintViolation { ref reason, .. }) if reason.contains("|p - q|")
        ));
        for fam in Family::ALL {
            assert!(matches!(
                make_pair(fam, 2, 0),
                Err(Error::ConstraintViolation { ref reason, .. }) if reason.contains("positive")
            ));
        }
    }

    #[test]
    fn rank_table() {
        assert_eq!(make_pair(Family::Gl, 2, 1).unwrap().rank_theta(), 1);
        let sp = make_pair(Family::Sp, 4, 2).unwrap();
        assert_eq!((sp.n(), sp.rank_theta()), (6, 1));
        assert_eq!(make_pair(Family::Orth, 3, 2).unwrap().rank_theta(), 2);
    }

    #[test]
    fn forms_match_definitions() {
        assert_eq!(j_alt(4), RatMatrix::from_i64(&[&[0, 0, 0, 1], &[0, 0, -1, 0], &[0, 1, 0, 0], &[-1, 0, 0, 0]]));
        assert_eq!(j_alt(4).transpose(), -&j_alt(4));
        assert_eq!(j_sym(3).transpose(), j_sym(3));
        let o = make_pair(Family::Orth, 2, 1).unwrap();
        assert_eq!(
            o.form().unwrap(),
            &RatMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -1]])
        );
        assert_eq!(&(o.invol() * o.invol()), &RatMatrix::identity(3));
    }

    #[test]
    fn theta_examples() {
        let pair = make_pair(Family::Gl, 2, 1).unwrap();
        let diag = RatMatrix::from_i64(&[&[1, 2, 0], &[3, 4, 0], &[0, 0, 5]]);
        assert_eq!(pair.apply_theta(&diag).unwrap(), diag);
        let anti = anti_block(2, 1);
        assert_eq!(pair.apply_theta(&anti).unwrap(), -&anti);
        assert_eq!(&pair.apply_theta(pair.invol()).unwrap(), pair.invol());
        assert!(pair.apply_theta(&RatMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn membership_examples() {
        let o = make_pair(Family::Orth, 2, 1).unwrap();
        let e = RatMatrix::from_i64(&[&[0, 0, 1], &[0, 0, 0], &[0, 1, 0]]);
        assert!(o.in_algebra(&e));
        assert!(!o.in_algebra(&RatMatrix::identity(3)));
        assert!(o.in_algebra(&RatMatrix::zeros(3, 3)));
        let gl = make_pair(Family::Gl, 2, 1).unwrap();
        assert!(gl.in_algebra(&RatMatrix::identity(3)));
    }

    #[test]
    fn eigenspace_dimensions() {
        assert_eq!(make_pair(Family::Gl, 1, 1).unwrap().basis_minus().len(), 2);
        assert_eq!(make_pair(Family::Orth, 2, 1).unwrap().basis_minus().len(), 2);
        assert_eq!(make_pair(Family::Sp, 2, 2).unwrap().basis_minus().len(), 4);
        for (fam, p, q) in [(Family::Gl, 3, 2), (Family::Orth, 3, 3), (Family::Sp, 4, 2)] {
            let pair = make_pair(fam, p, q).unwrap();
            let expected = if fam == Family::Gl { 2 * p * q } else { p * q };
            assert_eq!(pair.basis_minus().len(), expected);
            assert_eq!(pair.basis_plus().len() + pair.basis_minus().len(), pair.basis_g().len());
        }
    }

    #[test]
    fn dimension_of_g() {
        // n^2, n(n-1)/2, n(n+1)/2
        assert_eq!(make_pair(Family::Gl, 2, 2).unwrap().basis_g().len(), 16);
        assert_eq!(make_pair(Family::Orth, 3, 2).unwrap().basis_g().len(), 10);
        assert_eq!(make_pair(Family::Sp, 4, 2).unwrap().basis_g().len(), 21);
    }

    #[test]
    fn bracket_examples() {
        let x = RatMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        assert!(bracket(&x, &x).unwrap().is_zero());
        assert!(bracket(&RatMatrix::identity(2), &x).unwrap().is_zero());
        let e = RatMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        let f = RatMatrix::from_i64(&[&[0, 0], &[1, 0]]);
        assert_eq!(bracket(&e, &f).unwrap(), RatMatrix::from_i64(&[&[1, 0], &[0, -1]]));
        assert!(bracket(&e, &RatMatrix::identity(3)).is_err());
    }

    #[test]
    fn coordinates_round_trip() {
        let pair = make_pair(Family::Sp, 2, 2).unwrap();
        let coeffs: Vec<Rat> = (0..pair.basis_minus().len()).map(|k| int(k as i64 - 1)).collect();
        let x = combine(pair.basis_minus(), &coeffs, 4);
        assert_eq!(coordinates(pair.basis_minus(), &x).unwrap(), coeffs);
        assert_eq!(coordinates(pair.basis_minus(), &RatMatrix::identity(4)), None);
    }
}
