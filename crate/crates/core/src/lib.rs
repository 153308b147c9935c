//! Pairwise comparison matrices and the axiomatic behaviour of their
//! weighting methods.
//!
//! The crate is `no_std` (it needs `alloc`). It provides:
//!
//! - [`Pcm`], a positive reciprocal matrix, with row multiplication,
//!   opposite, relabelling and geometric-mean aggregation;
//! - [`RationalPcm`], the same object over exact rationals, for
//!   hand-entered matrices and exact constructions;
//! - the Eigenvector Method ([`em_weights`]) with Perron eigenvalue and
//!   consistency ratio, and the Logarithmic Least Squares Method
//!   ([`llsm_weights`]);
//! - weak-order [`Ranking`]s with tolerant tie handling;
//! - instance-level [`axioms`] checkers (anonymity, invariance to row
//!   multiplication, aggregation invariance, group-coherence for choice,
//!   inversion) and the constructions that turn an inversion failure into an
//!   aggregation failure and an aggregation failure into a choice failure;
//! - a seeded, reproducible [`search`] for counterexamples on the Saaty scale.
//!
//! Alternative indices are 0-based throughout the library. Everything that
//! is serialized (reports, rankings, witnesses) uses 1-based indices.
#![no_std]

extern crate alloc;

pub mod axioms;
pub mod cases;
mod error;
pub mod pcm;
pub mod ranking;
pub mod rational;
pub mod search;
pub mod weighting;

pub use axioms::{Axiom, AxiomReport, Checker, Verdict, Witness};
pub use error::{Error, Result};
pub use pcm::{aggregate, Pcm, Permutation};
pub use ranking::Ranking;
pub use rational::RationalPcm;
pub use weighting::{
    consistency_ratio, em_weights, llsm_weights, EmConfig, EmResult, Method, RandomIndex,
    WeightVector,
};
