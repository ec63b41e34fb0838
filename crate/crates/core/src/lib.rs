//! Algebraic toolkit for valued promise constraint satisfaction problems.
//!
//! Everything here is exact: rationals are arbitrary precision and `-inf`
//! is a first-class value. The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod algebra;
pub mod canonical;
pub mod corpus;
pub mod error;
pub mod fourier;
pub mod lp;
pub mod num;
pub mod polymorphism;
pub mod reductions;
pub mod search;
pub mod valued;
pub mod zoo;

mod prelude;

pub use error::{Error, Result};

/// Guards on enumeration sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Bound on `|B|^{|A|^{|N|}}` before enumerating a minion level.
    pub max_minion_size: u128,
    pub max_mat_pairs: usize,
    pub max_lp_rows: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_minion_size: 1 << 16, max_mat_pairs: 1 << 14, max_lp_rows: 1 << 12 }
    }
}
