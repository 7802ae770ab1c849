//! Exact arithmetic behind the degrees of `S_n`-equivariant self-maps of the
//! boundary of the `(n-1)`-simplex.
//!
//! The crate is layered bottom-up:
//!
//! * [`numtheory`] binomials, multinomials, Lucas residues, Kummer valuations,
//!   the four-way classification of `n`, and a multi-variable linear
//!   Diophantine solver.
//! * [`orbits`] orbit sizes of points of the simplex boundary, keyed by the
//!   partition of `n` into blocks of equal barycentric coordinates.
//! * [`degrees`] necessary residue constraints, known-attainable degree sets,
//!   the join-degree formula and admissible local degrees.
//! * [`certificates`] builders and verifiers for the zero-representation
//!   certificate and the recursive map certificate.
//! * [`oracle`] brute-force cross-checks that share nothing with the modules
//!   above except the big-integer layer.
//!
//! Everything is exact; no floating point is used anywhere.

pub mod certificates;
pub mod degrees;
pub mod error;
pub mod numtheory;
pub mod oracle;
pub mod orbits;

pub use error::{Error, Result};
