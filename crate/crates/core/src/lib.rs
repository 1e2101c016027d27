//! Exact q-state Potts partition functions through coding theory.
//!
//! The pipeline: a multigraph is reduced to its cycle matroid matrix over
//! GF(q); the row space is the graph's cocycle code, whose weight enumerator
//! gives the Potts partition function exactly. For graphs whose dual cocycle
//! code is an irreducible cyclic code (the ICCC family), that enumerator is
//! recovered from a handful of Gauss-sum phases — here evaluated exactly and
//! through a seeded, noise-bounded oracle that models a quantum phase
//! estimator — with every stage cross-checked against brute-force oracles.

pub mod codes;
pub mod ff;
pub mod gauss;
pub mod graphs;
pub mod mat;
pub mod mceliece;
pub mod membership;
pub mod pipeline;
pub mod potts;

/// Default cap on field size for enumerations and discrete logs: q^k <= 2^24.
pub const DEFAULT_FIELD_BITS: u32 = 24;
/// Default cap on brute-force configuration sweeps: q^|V| <= 2^24.
pub const DEFAULT_CONFIG_BITS: u32 = 24;
