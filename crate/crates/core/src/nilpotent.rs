//! Explicit relatively regular nilpotent elements of `g(-1)` and their
//! centralizers.
//!
//! Every element of `g(-1)` has the shape `(0 A; B 0)` with `A` of size
//! `p x q`. The constructions below fix `A` and `B` for each family and
//! parity case; `B` is forced by `A` for the orthogonal and symplectic
//! families.

use num_traits::{One, Zero};

use crate::error::Result;
use crate::exact::{int, kernel_basis, modular, nilpotency_index, Rat, RatMatrix};
use crate::pairs::{bracket, combine, j_sym, map_matrix, Family, SymmetricPair};

/// `epsilon_n`: ones on the superdiagonal.
pub fn epsilon(n: usize) -> RatMatrix {
    RatMatrix::from_fn(n, n, |i, j| if j == i + 1 { Rat::one() } else { Rat::zero() })
}

/// `lambda_{m,n}`: a single one in the bottom-left corner.
pub fn lambda(m: usize, n: usize) -> RatMatrix {
    RatMatrix::from_fn(m, n, |i, j| {
        if i + 1 == m && j == 0 {
            Rat::one()
        } else {
            Rat::zero()
        }
    })
}

fn assemble(p: usize, q: usize, a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let mut x = RatMatrix::zeros(p + q, p + q);
    x.set_block(0, p, a);
    x.set_block(p, 0, b);
    x
}

/// `(1_q; 0)` on top and `(0_{q,1} 1_q 0)` below, used for `gl` with
/// `p > q` and for the orthogonal case `p = q + 1`.
fn shifted_identity_blocks(p: usize, q: usize) -> (RatMatrix, RatMatrix) {
    let a = RatMatrix::from_fn(p, q, |i, j| if i == j { Rat::one() } else { Rat::zero() });
    let b = RatMatrix::from_fn(q, p, |i, j| if j == i + 1 { Rat::one() } else { Rat::zero() });
    (a, b)
}

/// `e*` for the orthogonal case `p = q`: the identity with its first
/// `ceil(q/2)` rows shifted one column to the right.
pub fn e_star(q: usize) -> RatMatrix {
    let k = q / 2;
    let mut m = RatMatrix::zeros(q, q);
    if q % 2 == 0 {
        // (eps_k lambda_{k,k}; 0_k 1_k)
        m.set_block(0, 0, &epsilon(k));
        m.set_block(0, k, &lambda(k, k));
        m.set_block(k, k, &RatMatrix::identity(k));
    } else {
        // (eps_{k+1} lambda_{k+1,k}; 0_{k,k+1} 1_k)
        m.set_block(0, 0, &epsilon(k + 1));
        m.set_block(0, k + 1, &lambda(k + 1, k));
        m.set_block(k + 1, k + 1, &RatMatrix::identity(k));
    }
    m
}

/// The explicit relatively regular nilpotent element of `g(-1)`.
pub fn regular_nilpotent(pair: &SymmetricPair) -> RatMatrix {
    let (p, q) = (pair.p(), pair.q());
    let (a, b) = match pair.family() {
        Family::Gl if p > q => shifted_identity_blocks(p, q),
        Family::Gl => (RatMatrix::identity(q), epsilon(q)),
        Family::Sp if p > q => {
            let r = (p - q) / 2;
            let sign = if r % 2 == 0 { int(1) } else { int(-1) };
            // top: (0_{r-1,q}; 1_q; 0_{r+1,q}); bottom: (0_{q,r+1} (-1)^r 1_q 0_{q,r-1})
            let a = RatMatrix::from_fn(p, q, |i, j| {
                if i == j + r - 1 {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            });
            let b = RatMatrix::from_fn(q, p, |i, j| {
                if j == i + r + 1 {
                    sign.clone()
                } else {
                    Rat::zero()
                }
            });
            (a, b)
        }
        Family::Sp => (epsilon(q), epsilon(q)),
        Family::Orth if p > q => shifted_identity_blocks(p, q),
        Family::Orth => {
            let a = e_star(q);
            let b = &(&j_sym(q) * &a.transpose()) * &j_sym(q);
            (a, b)
        }
    };
    assemble(p, q, &a, &b)
}

/// Canonical basis of `{Z in g(-1) : [x, Z] = 0}`.
pub fn centralizer(pair: &SymmetricPair, x: &RatMatrix) -> Result<Vec<RatMatrix>> {
    x.require_shape(pair.n(), pair.n())?;
    let basis = pair.basis_minus();
    let ad = map_matrix(basis, |b| {
        bracket(x, b).expect("shapes checked").into_entries()
    });
    Ok(kernel_basis(&ad)
        .into_iter()
        .map(|v| combine(basis, v.entries(), pair.n()))
        .collect())
}

/// `dim g(-1)^x`, exact.
///
/// Fast path: the rank of `ad_x` modulo a prime is a lower bound for its
/// rational rank, and the odd powers of `x` lie in `g(-1)^x`, so their exact
/// span dimension `k` is a lower bound for the centralizer. When the modular
/// rank equals `dim g(-1) - k` both bounds meet and `k` is the answer.
/// Otherwise the kernel is computed exactly.
pub fn centralizer_dim(pair: &SymmetricPair, x: &RatMatrix) -> Result<usize> {
    x.require_shape(pair.n(), pair.n())?;
    if let Some(k) = centralizer_dim_certified(pair, x) {
        return Ok(k);
    }
    Ok(centralizer(pair, x)?.len())
}

fn centralizer_dim_certified(pair: &SymmetricPair, x: &RatMatrix) -> Option<usize> {
    let n = pair.n();
    let basis = pair.basis_minus();
    let xm = modular::matrix_mod(x)?;
    let columns = basis
        .iter()
        .map(|b| Some(modular::bracket_mod(&xm, &modular::matrix_mod(b)?, n)))
        .collect::<Option<Vec<_>>>()?;
    let rank_p = modular::rank_of_columns(columns);
    let x2 = x * x;
    let mut powers = vec![x.clone()];
    while powers.len() < pair.rank_theta() {
        let next = &powers[powers.len() - 1] * &x2;
        powers.push(next);
    }
    let k = span_rank(&powers);
    (rank_p + k == basis.len()).then_some(k)
}

fn span_rank(ms: &[RatMatrix]) -> usize {
    let rows = ms.first().map_or(0, |m| m.entries().len());
    RatMatrix::from_fn(rows, ms.len(), |i, j| ms[j].entries()[i].clone()).rank()
}

/// `X` is relatively regular iff `dim g(-1)^X = rank theta`.
pub fn is_relatively_regular(pair: &SymmetricPair, x: &RatMatrix) -> Result<bool> {
    pair.require_minus(x)?;
    Ok(centralizer_dim(pair, x)? == pair.rank_theta())
}

/// `e` together with the data certifying that it is nilpotent and relatively regular.
#[derive(Clone, Debug)]
pub struct NilpotentWitness {
    pub e: RatMatrix,
    pub nilp_index: usize,
    pub centralizer_basis: Vec<RatMatrix>,
    pub centralizer_dim: usize,
}

impl NilpotentWitness {
    /// Builds the witness for `regular_nilpotent(pair)`. `nilp_index` is
    /// `None`-free by construction; a non-nilpotent result would be a bug.
    pub fn new(pair: &SymmetricPair) -> Result<Self> {
        let e = regular_nilpotent(pair);
        let nilp_index = nilpotency_index(&e)?.expect("constructed element is nilpotent");
        let centralizer_basis = centralizer(pair, &e)?;
        Ok(NilpotentWitness {
            nilp_index,
            centralizer_dim: centralizer_basis.len(),
            centralizer_basis,
            e,
        })
    }
}

/// Hand-parameterized basis of `g(-1)^e` transcribed from the explicit
/// solution matrices, one element per free parameter. It is only an
/// independent cross-check of [`centralizer`].
pub fn closed_form_centralizer(pair: &SymmetricPair) -> Vec<RatMatrix> {
    let (p, q) = (pair.p(), pair.q());
    let params = match pair.family() {
        Family::Gl | Family::Sp => pair.rank_theta(),
        Family::Orth => q,
    };
    (1..=params)
        .map(|m| {
            // parameter a_m = 1, all others 0
            let a = |idx: usize| if idx == m { int(1) } else { int(0) };
            let (top, bottom) = match pair.family() {
                Family::Gl => gl_blocks(p, q, &a),
                Family::Orth if p > q => gl_blocks(p, q, &a),
                Family::Orth => orth_equal_blocks(q, &a),
                Family::Sp => sp_blocks(p, q, m),
            };
            assemble(p, q, &top, &bottom)
        })
        .collect()
}

/// A: upper triangular Toeplitz in `a_1..a_q` over `0_{p-q,q}`;
/// B: the same band shifted one column right, padded with zeros
/// (the padding column is dropped when `p = q`).
fn gl_blocks(p: usize, q: usize, a: &dyn Fn(usize) -> Rat) -> (RatMatrix, RatMatrix) {
    let top = RatMatrix::from_fn(p, q, |i, j| {
        if i < q && j >= i {
            a(j - i + 1)
        } else {
            Rat::zero()
        }
    });
    let bottom = RatMatrix::from_fn(q, p, |i, j| {
        if j > i && j <= q {
            a(j - i)
        } else {
            Rat::zero()
        }
    });
    (top, bottom)
}

/// `A_q` has `x_1` on the diagonal, zeros on odd superdiagonals and a free
/// parameter on each even superdiagonal; parameter `m` sits on superdiagonal
/// `2(m - 1)`. For `p > q` it is placed at rows `r..r+q` on top and (with
/// sign `(-1)^r`) at columns `r+1..r+q+1` below.
///
/// The even-diagonal pattern is derived for `p > q` only. For `p = q`,
/// where `e = (0 eps_q; eps_q 0)`, the centralizer is spanned by the odd
/// powers of `eps_q` placed in both blocks, so parameter `m` sits on
/// superdiagonal `2m - 1` instead.
fn sp_blocks(p: usize, q: usize, m: usize) -> (RatMatrix, RatMatrix) {
    let offset = if p == q { 2 * m - 1 } else { 2 * (m - 1) };
    let a_q = RatMatrix::from_fn(q, q, |i, j| {
        if j >= i && j - i == offset {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    if p == q {
        return (a_q.clone(), a_q);
    }
    let r = (p - q) / 2;
    let sign = if r % 2 == 0 { int(1) } else { int(-1) };
    let mut top = RatMatrix::zeros(p, q);
    top.set_block(r - 1, 0, &a_q);
    let mut bottom = RatMatrix::zeros(q, p);
    bottom.set_block(0, r + 1, &a_q.scale(&sign));
    (top, bottom)
}

/// Orthogonal `p = q`: top-right block `X = (A B; C D)`, bottom-left
/// `J X^t J`, with parameters `a_1..a_q`.
fn orth_equal_blocks(q: usize, a: &dyn Fn(usize) -> Rat) -> (RatMatrix, RatMatrix) {
    let k = q / 2;
    let x = if q == 1 {
        // k = 0: e = 0 and the centralizer is all of g(-1)
        RatMatrix::from_fn(1, 1, |_, _| a(1))
    } else if q % 2 == 0 {
        orth_even(k, a)
    } else {
        orth_odd(k, a)
    };
    let y = &(&j_sym(q) * &x.transpose()) * &j_sym(q);
    (x, y)
}

fn orth_even(k: usize, a: &dyn Fn(usize) -> Rat) -> RatMatrix {
    // A: strictly upper Toeplitz in a_1..a_{k-1}
    let blk_a = RatMatrix::from_fn(k, k, |i, j| if j > i { a(j - i) } else { Rat::zero() });
    // D: upper Toeplitz in a_1..a_k, corner replaced by a_k - a_{2k}
    let blk_d = RatMatrix::from_fn(k, k, |i, j| {
        if i == 0 && j + 1 == k {
            a(k) - a(2 * k)
        } else if j >= i {
            a(j - i + 1)
        } else {
            Rat::zero()
        }
    });
    // B1: upper Toeplitz in a_k..a_{2k-1}, last diagonal entry a_{2k}
    let b1 = RatMatrix::from_fn(k, k, |i, j| {
        if i + 1 == k && j + 1 == k {
            a(2 * k)
        } else if j >= i {
            a(k + j - i)
        } else {
            Rat::zero()
        }
    });
    // B2: strictly lower Toeplitz, a_{k-d} on subdiagonal d
    let b2 = RatMatrix::from_fn(k, k, |i, j| if i > j { a(k - (i - j)) } else { Rat::zero() });
    // B3: B2 with its last row cleared
    let b3 = RatMatrix::from_fn(k, k, |i, j| {
        if i > j && i + 1 < k {
            a(k - (i - j))
        } else {
            Rat::zero()
        }
    });
    let blk_b = &(&b1 + &b2) + &b3;
    let mut x = RatMatrix::zeros(2 * k, 2 * k);
    x.set_block(0, 0, &blk_a);
    x.set_block(0, k, &blk_b);
    x.set_block(k, k, &blk_d);
    x
}

fn orth_odd(k: usize, a: &dyn Fn(usize) -> Rat) -> RatMatrix {
    let q = 2 * k + 1;
    // A: (k+1)x(k+1) strictly upper Toeplitz in a_1..a_k
    let blk_a = RatMatrix::from_fn(k + 1, k + 1, |i, j| if j > i { a(j - i) } else { Rat::zero() });
    // D: kxk upper Toeplitz in a_1..a_k
    let blk_d = RatMatrix::from_fn(k, k, |i, j| if j >= i { a(j - i + 1) } else { Rat::zero() });
    // B blocks are (k+1) x k.
    let b1 = RatMatrix::from_fn(k + 1, k, |i, j| {
        if i + 1 == k && j + 1 == k {
            a(2 * k + 1)
        } else if i == k && j + 1 == k {
            -a(2 * k + 1)
        } else if i + 1 < k && j >= i {
            a(k + 1 + j - i)
        } else {
            Rat::zero()
        }
    });
    let b2 = RatMatrix::from_fn(k + 1, k, |i, j| {
        if i == k && j + 1 == k {
            a(k + 1)
        } else if i > j {
            a(k + 1 - (i - j))
        } else {
            Rat::zero()
        }
    });
    // Subdiagonal d carries a_{k-d} in rows 1..=k-2.
    let b3 = RatMatrix::from_fn(k + 1, k, |i, j| {
        if i > j && i + 2 <= k {
            a(k - (i - j))
        } else {
            Rat::zero()
        }
    });
    let blk_b = &(&b1 + &b2) + &b3;
    let mut x = RatMatrix::zeros(q, q);
    x.set_block(0, 0, &blk_a);
    x.set_block(0, k + 1, &blk_b);
    x.set_block(k + 1, k + 1, &blk_d);
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::make_pair;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn certified_dimension_matches_kernel(
            case in 0usize..5,
            coeffs in proptest::collection::vec(-2i64..=2, 16),
            zeros in 0usize..16,
        ) {
            let (fam, p, q) = [(Family::Gl, 2, 2), (Family::Gl, 3, 1), (Family::Orth, 2, 2), (Family::Orth, 3, 2), (Family::Sp, 4, 2)][case];
            let pair = make_pair(fam, p, q).unwrap();
            let basis = pair.basis_minus();
            // zeroing a prefix of coefficients produces degenerate elements too
            let c: Vec<Rat> = (0..basis.len()).map(|i| int(if i < zeros { 0 } else { coeffs[i % 16] })).collect();
            let x = combine(basis, &c, pair.n());
            prop_assert_eq!(centralizer_dim(&pair, &x).unwrap(), centralizer(&pair, &x).unwrap().len());
        }
    }

    #[test]
    fn gl_2_1() {
        let pair = make_pair(Family::Gl, 2, 1).unwrap();
        let e = regular_nilpotent(&pair);
        assert_eq!(e, RatMatrix::from_i64(&[&[0, 0, 1], &[0, 0, 0], &[0, 1, 0]]));
        assert_eq!(nilpotency_index(&e).unwrap(), Some(3));
    }

    #[test]
    fn orth_2_1_matches_gl_shape() {
        let pair = make_pair(Family::Orth, 2, 1).unwrap();
        assert_eq!(
            regular_nilpotent(&pair),
            RatMatrix::from_i64(&[&[0, 0, 1], &[0, 0, 0], &[0, 1, 0]])
        );
    }

    #[test]
    fn sp_4_2_blocks() {
        let pair = make_pair(Family::Sp, 4, 2).unwrap();
        let e = regular_nilpotent(&pair);
        assert_eq!(e.block(0, 4, 4, 2), RatMatrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0]]));
        assert_eq!(e.block(4, 0, 2, 4), RatMatrix::from_i64(&[&[0, 0, -1, 0], &[0, 0, 0, -1]]));
    }

    #[test]
    fn e_star_is_shifted_identity() {
        for q in 1usize..=9 {
            let shifted = q.div_ceil(2);
            let expected = RatMatrix::from_fn(q, q, |i, j| {
                let target = if i < shifted { i + 1 } else { i };
                if j == target { int(1) } else { int(0) }
            });
            assert_eq!(e_star(q), expected, "q = {q}");
        }
    }

    #[test]
    fn degenerate_orth_1_1() {
        let pair = make_pair(Family::Orth, 1, 1).unwrap();
        let e = regular_nilpotent(&pair);
        assert!(e.is_zero());
        assert!(is_relatively_regular(&pair, &e).unwrap());
    }

    #[test]
    fn zero_is_not_regular_in_gl_2_1() {
        let pair = make_pair(Family::Gl, 2, 1).unwrap();
        let z = RatMatrix::zeros(3, 3);
        assert_eq!(centralizer(&pair, &z).unwrap().len(), 4);
        assert!(!is_relatively_regular(&pair, &z).unwrap());
    }

    #[test]
    fn regularity_requires_minus_membership() {
        let pair = make_pair(Family::Gl, 2, 1).unwrap();
        assert!(is_relatively_regular(&pair, &RatMatrix::identity(3)).is_err());
        assert!(centralizer(&pair, &RatMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn closed_form_small_examples() {
        let gl = make_pair(Family::Gl, 2, 1).unwrap();
        let cf = closed_form_centralizer(&gl);
        assert_eq!(cf, vec![RatMatrix::from_i64(&[&[0, 0, 1], &[0, 0, 0], &[0, 1, 0]])]);

        // p = q: g(-1)^e is spanned by e itself
        let sp = make_pair(Family::Sp, 2, 2).unwrap();
        let cf = closed_form_centralizer(&sp);
        assert_eq!(cf, vec![regular_nilpotent(&sp)]);

        let sp = make_pair(Family::Sp, 4, 2).unwrap();
        let cf = closed_form_centralizer(&sp);
        assert_eq!(cf.len(), 1);
        assert_eq!(cf[0].block(0, 4, 4, 2), RatMatrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0]]));

        let o = make_pair(Family::Orth, 3, 3).unwrap();
        assert_eq!(closed_form_centralizer(&o).len(), 3);
    }

    #[test]
    fn witness_fields_agree() {
        let pair = make_pair(Family::Sp, 6, 4).unwrap();
        let w = NilpotentWitness::new(&pair).unwrap();
        assert_eq!(w.centralizer_dim, pair.rank_theta());
        let k = w.nilp_index as u32;
        assert!(w.e.pow(k).unwrap().is_zero());
        assert!(!w.e.pow(k - 1).unwrap().is_zero());
    }
}
