//! Numerical laboratory for prime-power sums, zeta representations, zero
//! statistics, explicit-formula identities and Turán-type power sums.

pub mod arith;
pub mod error;
pub mod experiment;
pub mod explicit;
pub mod numeric;
pub mod powersum;
pub mod zeros;
pub mod zeta;

pub use error::{Error, Result};
