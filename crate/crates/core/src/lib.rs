//! Minimality and total minimality of the matrix groups `SL(n,F)`,
//! `PSL(n,F)`, `SUT(n,F)`, `SUT(n,F)/Z` and `PGL(n,F)` over subfields `F` of
//! local fields, together with exact verification of the algebraic
//! identities behind those verdicts.
//!
//! The crate is organized bottom-up:
//!
//! - [`fields`]: field descriptors, p-adic numbers, exact scalars;
//! - [`cyclotomic`]: roots of unity `μ_n(F)` and power-class indices;
//! - [`matrices`]: exact matrices, subgroup membership, `SUT` factorizations
//!   and the semidirect model of `SUT(2,F)`;
//! - [`iwasawa`]: `SL(n,F) = SUT(n,F)·K` for `R`, `C` and `Q_p`;
//! - [`witnesses`]: constructive (non-)essentiality witnesses;
//! - [`decider`]: the verdict engine;
//! - [`cli`]: the `minlocal` command-line front-end.

pub mod arith;
pub mod cli;
pub mod cyclotomic;
pub mod decider;
pub mod error;
pub mod fields;
pub mod iwasawa;
pub mod matrices;
pub mod witnesses;

pub use error::{Error, Result};

/// Default number of p-adic digits carried by the CLI and the decider.
pub const DEFAULT_PRECISION: u32 = 12;
