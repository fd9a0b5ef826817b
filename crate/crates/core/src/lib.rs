//! Rank-3 permutation modules of the orthogonal groups O±2n(2) and the unitary
//! groups Um(2) acting on nonsingular points, over odd prime fields.

pub mod action;
pub mod error;
pub mod expected;
pub mod field;
pub mod geometry;
pub mod group;
pub mod lattice;
pub mod linalg;
pub mod meataxe;
pub mod module;
pub mod perm;
pub mod pipeline;
pub mod poly;
pub mod report;

pub use error::{Error, Result};
pub use field::{make_prime_field, reduce_int, Elem, Gf2, Gf4, PrimeField};
