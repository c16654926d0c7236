//! Fixtures shared by the pipeline benchmarks.

use ksection::exact::{rat, Rat};
use ksection::pairs::{make_pair, Family, SymmetricPair};

/// Representative cases: one per family at a small and a large size.
pub const CASES: &[(Family, usize, usize)] = &[
    (Family::Gl, 3, 2),
    (Family::Gl, 8, 8),
    (Family::Orth, 4, 3),
    (Family::Orth, 8, 8),
    (Family::Sp, 4, 2),
    (Family::Sp, 8, 8),
];

pub fn pair(f: Family, p: usize, q: usize) -> SymmetricPair {
    make_pair(f, p, q).expect("fixture parameters are valid")
}

/// Deterministic slice coordinates with small numerators and denominators.
pub fn coords(dim: usize) -> Vec<Rat> {
    (0..dim)
        .map(|i| rat(((i * 7 + 3) % 19) as i64 - 9, (i % 4 + 1) as i64))
        .collect()
}

pub fn id(f: Family, p: usize, q: usize) -> String {
    format!("{f}({p},{q})")
}
