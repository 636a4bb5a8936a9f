//! Exact finite semigroupoids, their actions and algebraic bundles, sectional
//! algebras, and certified isomorphism pipelines between them.

#![allow(clippy::needless_range_loop, clippy::type_complexity, clippy::manual_is_multiple_of)]

pub mod actions;
pub mod bundles;
pub mod error;
pub mod rings;
pub mod semigroupoid;
pub mod theorems;

pub use error::{Error, Result, Rule, ValidationReport, Violation};
