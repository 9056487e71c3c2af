//! The polynomial method over finite fields, executable at desk scale.
//!
//! Field arithmetic ([`ffield`]), sparse polynomials with Hasse derivatives
//! ([`mpoly`]), vanishing multiplicities ([`multiplicity`]), interpolation of
//! vanishing polynomials by exact linear algebra ([`vanish`]), BRK-type and
//! Kakeya set generation with minimal-set search ([`brkset`]), and replayable
//! instance checks of the lower-bound argument ([`replay`]).

pub mod brkset;
pub mod error;
pub mod ffield;
pub mod json;
pub mod linalg;
pub mod mpoly;
pub mod multiplicity;
pub mod random;
pub mod replay;
pub mod selftest;
pub mod vanish;

pub use error::{Error, Result};
