//! Exact-arithmetic workbench for infinite-valued Łukasiewicz propositional
//! logic.
//!
//! - [`formula`]: syntax trees, parsing, printing, substitution.
//! - [`semantics`]: exact `[0,1]` evaluation and a grid falsifier.
//! - [`pwl`]: McNaughton functions of one-variable formulas, truth sets.
//! - [`theories`]: the theories `Θ_r`, `Θ_T` and semantic consequence.
//! - [`axiomatizer`]: single-formula axiomatizations of `Θ_r`, `r` rational.
//! - [`proofs`]: Hilbert-style proofs over the axioms A0–A4 with modus ponens.
//! - [`cli`]: the `luka` command line.

pub mod axiomatizer;
pub mod cli;
pub mod formula;
pub mod parallel;
pub mod proofs;
pub mod pwl;
pub mod rational;
pub mod semantics;
pub mod theories;

pub use formula::{parse, Formula};
pub use parallel::Exec;
pub use pwl::{PwlFunction, TruthSet};
pub use rational::Rational;
