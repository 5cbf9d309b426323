//! Exact separation probabilities for products of random permutations.
//!
//! Given a cycle type `λ` and a composition `α = (α_1, ..., α_k)`, the
//! separation probability is the chance that, for a fixed tuple of disjoint
//! blocks `A_1, ..., A_k` with `|A_i| = α_i`, no cycle of `π ∘ (1 2 ... n)`
//! meets two different blocks when `π` is uniform in the class `C_λ`.
//!
//! The crate evaluates the closed forms exactly ([`formulas`]), through a
//! monomial/power-sum coefficient engine ([`symfunc`]), and cross-checks them
//! against exhaustive enumerators ([`oracle`]). Strong separation and the
//! connection coefficients derived from it live in [`strong`].

pub mod arith;
pub mod error;
pub mod formulas;
pub mod oracle;
pub mod partition;
pub mod perm;
pub mod poly;
pub mod strong;
pub mod symfunc;
pub mod verify;

pub mod cli;

pub use arith::Rational;
pub use error::{Error, Result};
pub use partition::{Composition, Partition};
pub use perm::{Permutation, SubsetTuple};
