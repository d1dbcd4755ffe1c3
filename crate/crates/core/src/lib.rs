//! Exact enumeration, verification and search engines for a collection of
//! open problems in finite combinatorics.
//!
//! Each module is self-contained and exposes pure functions. Exhaustive
//! scans refuse inputs above a configurable size rather than sampling, and
//! every randomized search takes an explicit seed so results are
//! reproducible bit-for-bit.

pub mod capset;
pub mod cliquegame;
pub mod error;
pub mod graphlab;
pub mod latin;
pub mod perms;
pub mod rng;
pub mod setfam;
pub mod stirling;
pub mod surfaces;
pub mod tournaments;

pub use error::{Error, Result};
