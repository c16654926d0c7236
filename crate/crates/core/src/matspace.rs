//! The identification of `g(-1)` with `p x q` matrices and the action of
//! `G(1)` on both sides.
//!
//! An element of `g(-1)` is `(0 A; B 0)`. For the orthogonal and symplectic
//! families `B` is determined by `A`; for the general linear family both
//! blocks are free.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{int, Rat, RatMatrix};
use crate::nilpotent::centralizer;
use crate::pairs::{bracket, combine, Family, SymmetricPair};

/// Singular Cayley draws tolerated before giving up.
pub const MAX_CAYLEY_RETRIES: usize = 64;

/// A validated element of `G(1)`: block diagonal, invertible, and preserving
/// the form when there is one. The inverse is computed once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    family: Family,
    p: usize,
    q: usize,
    g: RatMatrix,
    g_inv: RatMatrix,
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.g.serialize(s)
    }
}

fn invalid(reason: &str) -> Error {
    Error::InvalidGroupElement(reason.to_string())
}

impl GroupElement {
    pub fn new(pair: &SymmetricPair, g: RatMatrix) -> Result<Self> {
        let (p, n) = (pair.p(), pair.n());
        g.require_shape(n, n)?;
        let off_block_zero = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| (i < p) != (j < p))
            .all(|(i, j)| g[(i, j)] == Rat::from_integer(0.into()));
        if !off_block_zero {
            return Err(invalid("not block diagonal"));
        }
        let g_inv = g.inverse().map_err(|_| invalid("singular"))?;
        if let (Some(j), Some(j_inv)) = (pair.form(), pair.form_inv()) {
            if &(j * &g_inv.transpose()) * j_inv != g {
                return Err(invalid("does not preserve the form"));
            }
        }
        Ok(GroupElement {
            family: pair.family(),
            p,
            q: pair.q(),
            g,
            g_inv,
        })
    }

    pub fn identity(pair: &SymmetricPair) -> Self {
        Self::new(pair, RatMatrix::identity(pair.n())).expect("identity is in every group")
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.g
    }

    pub fn inverse_matrix(&self) -> &RatMatrix {
        &self.g_inv
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            g: self.g_inv.clone(),
            g_inv: self.g.clone(),
            ..*self
        }
    }

    /// The `p x p` block.
    pub fn g1(&self) -> RatMatrix {
        self.g.block(0, 0, self.p, self.p)
    }

    /// The `q x q` block.
    pub fn g2(&self) -> RatMatrix {
        self.g.block(self.p, self.p, self.q, self.q)
    }

    fn g2_inv(&self) -> RatMatrix {
        self.g_inv.block(self.p, self.p, self.q, self.q)
    }

    fn require_pair(&self, pair: &SymmetricPair) -> Result<()> {
        if (self.family, self.p, self.q) == (pair.family(), pair.p(), pair.q()) {
            Ok(())
        } else {
            Err(Error::InvalidGroupElement(format!(
                "element of G(1) for {}({}, {}) used with {}({}, {})",
                self.family,
                self.p,
                self.q,
                pair.family(),
                pair.p(),
                pair.q()
            )))
        }
    }
}

/// The top-right `p x q` block of `x`.
pub fn to_matrix_space(pair: &SymmetricPair, x: &RatMatrix) -> Result<RatMatrix> {
    pair.require_minus(x)?;
    Ok(x.block(0, pair.p(), pair.p(), pair.q()))
}

/// `(0 A; Y 0)` with `Y = -Q A^t P^{-1}` for the form `diag(P, Q)`.
pub fn from_matrix_space(pair: &SymmetricPair, a: &RatMatrix) -> Result<RatMatrix> {
    let (p, q) = (pair.p(), pair.q());
    a.require_shape(p, q)?;
    let (Some(j), Some(j_inv)) = (pair.form(), pair.form_inv()) else {
        return Err(Error::NeedsBothBlocks);
    };
    let y = -&(&(&j.block(p, p, q, q) * &a.transpose()) * &j_inv.block(0, 0, p, p));
    assemble(pair, a, &y)
}

/// `(0 A; B 0)`, checked for membership in `g(-1)`.
pub fn from_blocks(pair: &SymmetricPair, a: &RatMatrix, b: &RatMatrix) -> Result<RatMatrix> {
    a.require_shape(pair.p(), pair.q())?;
    b.require_shape(pair.q(), pair.p())?;
    let x = assemble(pair, a, b)?;
    pair.require_minus(&x)?;
    Ok(x)
}

fn assemble(pair: &SymmetricPair, a: &RatMatrix, b: &RatMatrix) -> Result<RatMatrix> {
    let mut x = RatMatrix::zeros(pair.n(), pair.n());
    x.set_block(0, pair.p(), a);
    x.set_block(pair.p(), 0, b);
    Ok(x)
}

/// `g X g^{-1}`
pub fn act(pair: &SymmetricPair, g: &GroupElement, x: &RatMatrix) -> Result<RatMatrix> {
    g.require_pair(pair)?;
    pair.require_minus(x)?;
    Ok(&(&g.g * x) * &g.g_inv)
}

/// `g1 A g2^{-1}`
pub fn act_mpq(pair: &SymmetricPair, g: &GroupElement, a: &RatMatrix) -> Result<RatMatrix> {
    g.require_pair(pair)?;
    a.require_shape(pair.p(), pair.q())?;
    Ok(&(&g.g1() * a) * &g.g2_inv())
}

/// `(I - S)(I + S)^{-1}`, or `None` when `I + S` is singular.
pub fn cayley(s: &RatMatrix) -> Option<RatMatrix> {
    let id = RatMatrix::identity(s.rows());
    let inv = (&id + s).inverse().ok()?;
    Some(&(&id - s) * &inv)
}

/// Dimension of the centralizer of `from_matrix_space(A)`, computed over the
/// unit matrices of `M_{p,q}` rather than a basis of `g(-1)`.
pub fn mpq_centralizer_dim(pair: &SymmetricPair, a: &RatMatrix) -> Result<usize> {
    let x = from_matrix_space(pair, a)?;
    let (p, q) = (pair.p(), pair.q());
    let mut images = Vec::with_capacity(p * q);
    for i in 0..p {
        for j in 0..q {
            let mut unit = RatMatrix::zeros(p, q);
            unit[(i, j)] = int(1);
            images.push(bracket(&x, &from_matrix_space(pair, &unit)?)?.into_entries());
        }
    }
    let ad = RatMatrix::from_fn(pair.n() * pair.n(), p * q, |r, c| images[c][r].clone());
    Ok(p * q - ad.rank())
}

/// Regularity of `A` read through the correspondence; agrees with
/// [`crate::nilpotent::is_relatively_regular`] on the preimage.
pub fn is_regular_mpq(pair: &SymmetricPair, a: &RatMatrix) -> Result<bool> {
    Ok(mpq_centralizer_dim(pair, a)? == pair.rank_theta())
}

/// Reference computation on the `g(-1)` side, for comparison with
/// [`mpq_centralizer_dim`].
pub fn preimage_centralizer_dim(pair: &SymmetricPair, a: &RatMatrix) -> Result<usize> {
    Ok(centralizer(pair, &from_matrix_space(pair, a)?)?.len())
}

fn elementary_product(rng: &mut impl Rng, size: usize, height: i64) -> RatMatrix {
    let mut m = RatMatrix::identity(size);
    if size > 1 {
        for _ in 0..size + 2 {
            let i = rng.random_range(0..size);
            let j = (i + rng.random_range(1..size)) % size;
            let c = int(rng.random_range(-height..=height));
            // row_i += c * row_j
            for k in 0..size {
                let add = &m[(j, k)] * &c;
                m[(i, k)] += add;
            }
        }
    }
    for i in 0..size {
        if rng.random_bool(0.5) {
            for k in 0..size {
                m[(i, k)] = -m[(i, k)].clone();
            }
        }
    }
    m
}

/// A pseudo-random element of `G(1)(Q)` determined by `seed`.
///
/// General linear: products of elementary matrices with multipliers of
/// absolute value at most `height`, times a random sign diagonal.
/// Orthogonal and symplectic: the Cayley transform of a random integer
/// combination of the `g(1)` basis with coefficients bounded by `height`.
pub fn random_group_element(pair: &SymmetricPair, seed: u64, height: u32) -> Result<GroupElement> {
    random_group_element_with(pair, &mut ChaCha8Rng::seed_from_u64(seed), height)
}

pub fn random_group_element_with(
    pair: &SymmetricPair,
    rng: &mut impl Rng,
    height: u32,
) -> Result<GroupElement> {
    let h = i64::from(height);
    match pair.family() {
        Family::Gl => {
            let g1 = elementary_product(rng, pair.p(), h);
            let g2 = elementary_product(rng, pair.q(), h);
            GroupElement::new(pair, RatMatrix::block_diag(&g1, &g2))
        }
        Family::Orth | Family::Sp => {
            let basis = pair.basis_plus();
            for _ in 0..MAX_CAYLEY_RETRIES {
                let coeffs: Vec<Rat> = basis.iter().map(|_| int(rng.random_range(-h..=h))).collect();
                let s = combine(basis, &coeffs, pair.n());
                if let Some(g) = cayley(&s) {
                    return GroupElement::new(pair, g);
                }
            }
            Err(Error::RetryExhausted(MAX_CAYLEY_RETRIES))
        }
    }
}
