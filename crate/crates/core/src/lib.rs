//! Central elements of unstable algebras over the mod-2 Steenrod algebra.
//!
//! Algebras are given in layered form: an invariant ring `H*(U)^G` as the
//! nil-closure, followed by nilpotent layers built from induced modules.
//! The crate computes the sets `C_k(K)` and `C(K)` by closed-form
//! criteria and cross-checks them against brute-force enumerations.

pub mod centers;
pub mod cli;
pub mod comodule;
pub mod error;
pub mod f2;
pub mod oracle;
pub mod poly;
pub mod presentation;

pub use error::{Error, Result};
