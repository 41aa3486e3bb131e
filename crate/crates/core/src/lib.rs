//! Exact-arithmetic toolkit for desk-scale verification of determinant
//! factors and Frobenius-splitting checks attached to coordinate ideals of
//! the Borel subalgebra of gl_n.
//!
//! The pieces:
//!
//! - [`poset`] — the index poset on `[1,n] x [1,n]`, its order ideals, the
//!   subspaces `b[S]` they carve out of the Borel, and invariance sanity
//!   checks.
//! - [`poly`] — sparse multivariate polynomials in the chart coordinates,
//!   generic over the exact coefficient domain.
//! - [`matrix`] — generic matrices over the polynomial ring, shift matrices,
//!   conjugation, determinants (cofactor and fraction-free), ranks, and the
//!   determinant factors `F_r[S]`.
//! - [`claims`] — the per-step checks (degree, divisibility, residue
//!   identity, rank drop, block pattern) and their aggregation over whole
//!   ideals and whole families.
//! - [`splitting`] — the characteristic-p side: trace map, splitting and
//!   compatibility criteria on the chart, candidate sections and exhaustive
//!   candidate search.
//! - [`cache`] — the on-disk memo store for expensive determinant factors.
//!
//! Core arithmetic is generic over the scalar type through [`coeff::Coeff`]
//! (built on `num-traits`); the aliases below fix the three concrete
//! domains used throughout.

pub mod cache;
pub mod claims;
pub mod coeff;
pub mod error;
pub mod matrix;
pub mod modp;
pub mod poly;
pub mod poset;
pub mod splitting;

pub use cache::MinorCache;
pub use coeff::{Coeff, Fp};
pub use error::{Error, Result};

/// Polynomials with arbitrary-precision integer coefficients; the domain of
/// every determinant-factor identity.
pub type IntPoly = poly::Polynomial<num_bigint::BigInt>;

/// Polynomials with arbitrary-precision rational coefficients.
pub type RatPoly = poly::Polynomial<num_rational::BigRational>;

/// Polynomials over a prime field; the domain of the trace-map checks.
pub type FpPoly = poly::Polynomial<Fp>;

/// Matrices over [`IntPoly`].
pub type IntMatrix = matrix::PolyMatrix<num_bigint::BigInt>;

/// Matrices over [`RatPoly`].
pub type RatMatrix = matrix::PolyMatrix<num_rational::BigRational>;

/// Matrices over [`FpPoly`].
pub type FpMatrix = matrix::PolyMatrix<Fp>;

/// Fixed default seed for the randomized checks: the ASCII bytes of
/// `"B0REL"`.
pub const DEFAULT_SEED: u64 = u64::from_be_bytes(*b"\0\0\0B0REL");

/// Default prime for randomized identity testing: 2^31 - 1.
pub const DEFAULT_RANK_PRIME: u64 = (1 << 31) - 1;

/// Capacity guards keeping default runs at desk scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest n the verifier will fan out over.
    pub max_n: usize,
    /// Largest term count a candidate expansion may reach.
    pub max_terms: usize,
    /// Largest number of candidates an exhaustive search may enumerate.
    pub max_search: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_n: 4,
            max_terms: 5_000_000,
            max_search: 1_000_000,
        }
    }
}
