//! Exact combinatorics of blocks of affine category O at rational level:
//! root systems, the affine Weyl group and its alcove geometry, character
//! and multiplicity calculus, Kazhdan-Lusztig polynomials, translation and
//! tilting data on Grothendieck groups, and linkage reports.
//!
//! All arithmetic is exact (arbitrary-precision rationals); nothing here
//! ever rounds.

pub mod error;
pub mod exact;
pub mod rootsys;

pub use error::{Error, Result};
pub use exact::Rat;
pub use rootsys::{FiniteWeylElement, FormalGCharacter, RootSystem, Series, Weight};
