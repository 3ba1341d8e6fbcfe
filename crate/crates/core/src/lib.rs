//! Desk-scale computational toolkit for least split primes in ideal classes
//! of imaginary quadratic fields Q(√−D), D prime, D ≡ 3 (mod 4).
//!
//! The pipeline: class-group arithmetic through binary quadratic forms
//! ([`classgroup`]), multiplicative densities and Euler products
//! ([`multiplicative`]), beta-sieve weights and the Buchstab decomposition
//! ([`betasieve`]), the sieve sequence and its congruence/trisection reports
//! ([`linnik`]), and L-function evaluation with zero scans and explicit-formula
//! checks ([`lfunc`]).
//!
//! All reductions are deterministic: parallel code splits work into fixed
//! segments and folds the per-segment results in index order, so outputs are
//! byte-identical regardless of thread count or the `parallel` feature.

pub mod betasieve;
pub mod classgroup;
pub mod error;
pub mod lfunc;
pub mod linnik;
pub mod multiplicative;
pub mod par;
pub mod primes;
pub mod quad;

pub use error::{Error, Result};

/// Version stamp written into every artifact and cache file.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
