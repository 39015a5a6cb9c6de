//! Exact tooling for two related questions.
//!
//! * Set-theoretic side: a parser and syntactic calculus for first-order
//!   formulas over `{=, ∈}` ([`formula`]), and finite transitive models of
//!   hereditarily finite sets in which Δ₀ absoluteness can be checked
//!   exhaustively ([`hf`]).
//! * Algebraic side: exact integer and rational linear algebra
//!   ([`linalg`]) and the group-theoretic operations built on it, such as
//!   pure closures, purity witnesses, quotients, complements, and depth-bounded
//!   freeness certificates for countable groups given as chains of lattices
//!   ([`group`]).
//!
//! [`cli`] wires both sides into the `alephfree` command.

pub mod cli;
pub mod codec;
pub mod formula;
pub mod group;
pub mod hf;
pub mod linalg;

/// Version stamped into every JSON report.
pub const SCHEMA_VERSION: u32 = 1;
