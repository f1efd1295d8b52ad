//! Heterogeneous packet-type coded caching for device-to-device networks.
//!
//! `scheme` derives the static algebra of a construction, `exchange` runs it
//! on real bytes, `verifier` and `analysis` check and tabulate the claims.

pub mod analysis;
pub mod cli;
pub mod combinatorics;
pub mod exchange;
pub mod jcm;
mod json;
pub mod scheme;
pub mod users;
pub mod verifier;

pub use combinatorics::{Rational, TypeVector};
pub use users::UserSet;
