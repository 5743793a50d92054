//! Random reversal graphs over signed permutations.
//!
//! The vertex set is the hyperoctahedral group `B_n` of signed permutations;
//! edges join permutations that differ by a single reversal (or, in the
//! analogue model, a sign-change transposition). Keeping each edge
//! independently with probability `λ = c / C(n+1, 2)` gives a random graph
//! with a phase transition at `c = 1`. This crate samples those graphs,
//! measures their components, and provides the branching-process survival
//! probabilities that predict the giant component's size.

pub mod branching;
pub mod cayley;
pub mod cli;
mod error;
pub mod experiments;
pub mod random_graph;
pub mod seed;
pub mod signed_perm;
pub mod union_find;

pub use error::{Error, Result};
pub use signed_perm::{GeneratorKind, GeneratorSet, Reversal, SignChangeTransposition, SignedPerm};
