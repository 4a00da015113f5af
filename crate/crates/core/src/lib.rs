//! Exact noncommutative differential forms over finite-dimensional algebras:
//! Hochschild, cyclic and periodic homology, deformations, the
//! representation functor and the Gauss-Manin connection. All arithmetic
//! is rational.

pub mod error;
pub mod scalar;
pub mod linalg;
pub mod poly;
pub mod rewrite;
pub mod findim;
pub mod forms;
pub mod report;
pub mod identities;
pub mod blocks;
pub mod quotient;
pub mod homology;
pub mod harmonic;
pub mod window;
pub mod connected;
pub mod tderiv;
pub mod contract;
pub mod extended;
pub mod cochain;
pub mod deform;
pub mod aphi;
pub mod anick;
pub mod rep;
pub mod gm;
pub mod spec;

/// Basis size cap, overridable through `NCDR_SIZE_LIMIT`.
pub fn size_limit() -> usize {
    std::env::var("NCDR_SIZE_LIMIT").ok().and_then(|s| s.parse().ok()).unwrap_or(2_000_000)
}
