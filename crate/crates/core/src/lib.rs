//! Exact verification toolkit for partial sums of reciprocal powers.
//!
//! The crate checks, by exact rational arithmetic and certified enclosures,
//! that no two sums `1/a^2 + ... + 1/(a+r)^2` over distinct windows of
//! consecutive integers coincide, together with the supporting lemmas.

pub mod certify;
pub mod error;
pub mod kernel;
pub mod lemmas;
pub mod partial_sums;
pub mod report;
pub mod search;

pub use error::{Error, Result};
pub use kernel::ExactRational;
