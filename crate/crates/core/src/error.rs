//! Error types shared across the crate.

use thiserror::Error;

use crate::poly::{Monomial, VarId};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("position ({i},{j}) is out of range for n = {n}")]
    PositionOutOfRange { i: usize, j: usize, n: usize },

    /// The set contains `present` but is missing the smaller `missing`.
    #[error("not an order ideal: contains ({pi},{pj}) but is missing ({mi},{mj})")]
    NotAnIdeal { pi: usize, pj: usize, mi: usize, mj: usize },

    #[error("capacity exceeded: {what} = {actual} is over the cap {cap}")]
    Capacity {
        what: &'static str,
        actual: usize,
        cap: usize,
    },

    /// Negative outcome of an exact division by a variable: some term has no
    /// factor of `var`. Carries the offending term as witness.
    #[error("not divisible by {var}: term {term} has no {var} factor")]
    NotDivisible { var: VarId, term: Monomial },

    #[error("evaluation error: {0}")]
    Eval(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cache i/o error: {0}")]
    CacheIo(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
