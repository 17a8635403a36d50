//! Torsion units of integral group rings.
//!
//! For a finite group given by permutation generators this crate computes
//! conjugacy classes and the ordinary character table, enumerates every
//! partial-augmentation pattern a normalized torsion unit of `ZG` could have
//! under the HeLP constraints, and runs a battery of elimination methods on
//! the nontrivial ones. Everything is exact.

pub mod eliminate;
pub mod exactmath;
pub mod groups;
pub mod help;
pub mod latticemethod;
pub mod pipeline;
pub mod sieve;

pub use exactmath::{Cyclotomic, ExactError, IntMatrix, LinearSystem, Rational};
