//! Rational points in regular orbits of the classical infinitesimal symmetric
//! spaces `gl(p+q)`, `o(J_{p,q})` and `sp(J'_{p,q})` under `theta = Ad(I_{p,q})`.
//!
//! The crate builds the `(-1)`-eigenspace of `theta`, writes down an explicit
//! relatively regular nilpotent element, completes it to a rational
//! sl2-triple by exact linear solves, and uses the resulting Kostant-Rallis
//! slice `f + g(-1)^e` to produce rational orbit representatives from
//! conjugation invariants. All arithmetic outside the slice inverter is
//! exact over the rationals.

pub mod error;
pub mod exact;
pub mod matspace;
pub mod nilpotent;
pub mod pairs;
pub mod sl2;
pub mod slice;

pub use error::{Error, Result};
pub use exact::{Poly, Rat, RatMatrix};
pub use matspace::GroupElement;
pub use nilpotent::NilpotentWitness;
pub use pairs::{Family, SymmetricPair};
pub use sl2::Sl2Triple;
pub use slice::{InvariantVector, KostantSlice, SolverConfig};
