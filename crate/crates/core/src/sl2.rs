//! Completion of a relatively regular nilpotent `e` to a rational sl2-triple
//! `(e, f, h)` with `h` in `g(1)` and `f` in `g(-1)`.
//!
//! Both steps are linear over the rationals:
//!
//! 1. find `h` in `g(1)` and `y` in `g` with `[h, e] = 2e` and `[e, y] = h`;
//! 2. with `h` fixed, find `f` in `g(-1)` with `[e, f] = h` and `[h, f] = -2f`.
//!
//! Step 1 takes the canonical solution (non-pivot coordinates zero). Step 2
//! has at most one solution.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{kernel_basis, solve, Rat, RatMatrix};
use crate::nilpotent::is_relatively_regular;
use crate::pairs::{bracket, combine, SymmetricPair};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sl2Triple {
    pub e: RatMatrix,
    pub f: RatMatrix,
    pub h: RatMatrix,
}

pub const CHECK_NONZERO: &str = "nonzero";
pub const CHECK_HE: &str = "[h,e]=2e";
pub const CHECK_HF: &str = "[h,f]=-2f";
pub const CHECK_EF: &str = "[e,f]=h";
pub const CHECK_H_PLUS: &str = "h in g(1)";
pub const CHECK_E_MINUS: &str = "e in g(-1)";
pub const CHECK_F_MINUS: &str = "f in g(-1)";
pub const CHECK_F_REGULAR: &str = "f regular if e regular";

fn stack(parts: &[&RatMatrix]) -> Vec<Rat> {
    parts.iter().flat_map(|m| m.entries().iter().cloned()).collect()
}

fn columns_to_matrix(columns: Vec<Vec<Rat>>) -> RatMatrix {
    let rows = columns.first().map_or(0, Vec::len);
    RatMatrix::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
}

fn solve_h(pair: &SymmetricPair, e: &RatMatrix) -> Result<RatMatrix> {
    let n = pair.n();
    let plus = pair.basis_plus();
    let g = pair.basis_g();
    let zero = RatMatrix::zeros(n, n);
    let mut columns = Vec::with_capacity(plus.len() + g.len());
    for b in plus {
        columns.push(stack(&[&bracket(b, e)?, &-b]));
    }
    for b in g {
        columns.push(stack(&[&zero, &bracket(e, b)?]));
    }
    let rhs = stack(&[&e.scale(&Rat::from_integer(2.into())), &zero]);
    let sol = solve(&columns_to_matrix(columns), &rhs)
        .ok_or_else(|| Error::NoTriple("no h in g(1) with [h,e]=2e inside the image of ad_e".into()))?;
    Ok(combine(plus, &sol[..plus.len()], n))
}

/// Coefficient matrix of step 2 over the given `g(-1)` basis ordering.
fn f_system(e: &RatMatrix, h: &RatMatrix, basis: &[RatMatrix]) -> Result<RatMatrix> {
    let two = Rat::from_integer(2.into());
    let columns = basis
        .iter()
        .map(|m| {
            let hm = &bracket(h, m)? + &m.scale(&two);
            Ok(stack(&[&bracket(e, m)?, &hm]))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(columns_to_matrix(columns))
}

/// Solves step 2 with the `g(-1)` basis taken in the order `order`.
pub(crate) fn solve_f_ordered(
    pair: &SymmetricPair,
    e: &RatMatrix,
    h: &RatMatrix,
    order: &[usize],
) -> Result<RatMatrix> {
    let basis: Vec<RatMatrix> = order.iter().map(|&k| pair.basis_minus()[k].clone()).collect();
    let n = pair.n();
    let rhs = stack(&[h, &RatMatrix::zeros(n, n)]);
    let sol = solve(&f_system(e, h, &basis)?, &rhs)
        .ok_or_else(|| Error::NoTriple("no f in g(-1) with [e,f]=h and [h,f]=-2f".into()))?;
    Ok(combine(&basis, &sol, n))
}

/// Dimension of the solution set of step 2's homogeneous system; zero means
/// `f` is uniquely determined by `(e, h)`.
pub fn f_ambiguity(pair: &SymmetricPair, e: &RatMatrix, h: &RatMatrix) -> Result<usize> {
    Ok(kernel_basis(&f_system(e, h, pair.basis_minus())?).len())
}

pub fn complete_triple(pair: &SymmetricPair, e: &RatMatrix) -> Result<Sl2Triple> {
    pair.require_minus(e)?;
    if e.is_zero() {
        return Err(Error::NoTriple("e = 0".into()));
    }
    let h = solve_h(pair, e)?;
    let order: Vec<usize> = (0..pair.basis_minus().len()).collect();
    let f = solve_f_ordered(pair, e, &h, &order)?;
    let triple = Sl2Triple { e: e.clone(), f, h };
    if let Some((name, _)) = verify_triple(pair, &triple).into_iter().find(|(_, ok)| !ok) {
        return Err(Error::NoTriple(format!("solution fails check {name}")));
    }
    Ok(triple)
}

/// Each defining property of a triple, evaluated independently.
pub fn verify_triple(pair: &SymmetricPair, t: &Sl2Triple) -> Vec<(String, bool)> {
    let n = pair.n();
    let shaped = [&t.e, &t.f, &t.h]
        .iter()
        .all(|m| m.rows() == n && m.cols() == n);
    let br = |x: &RatMatrix, y: &RatMatrix| if shaped { bracket(x, y).ok() } else { None };
    let two = Rat::from_integer(2.into());
    let he = br(&t.h, &t.e).is_some_and(|b| b == t.e.scale(&two));
    let hf = br(&t.h, &t.f).is_some_and(|b| b == t.f.scale(&-two.clone()));
    let ef = br(&t.e, &t.f).is_some_and(|b| b == t.h);
    let f_regular = if !shaped || !pair.in_minus(&t.e) || !pair.in_minus(&t.f) {
        false
    } else {
        match is_relatively_regular(pair, &t.e) {
            Ok(false) => true,
            Ok(true) => is_relatively_regular(pair, &t.f).unwrap_or(false),
            Err(_) => false,
        }
    };
    vec![
        (CHECK_NONZERO.into(), !(t.e.is_zero() || t.f.is_zero() || t.h.is_zero())),
        (CHECK_HE.into(), he),
        (CHECK_HF.into(), hf),
        (CHECK_EF.into(), ef),
        (CHECK_H_PLUS.into(), pair.in_plus(&t.h)),
        (CHECK_E_MINUS.into(), pair.in_minus(&t.e)),
        (CHECK_F_MINUS.into(), pair.in_minus(&t.f)),
        (CHECK_F_REGULAR.into(), f_regular),
    ]
}
