//! Numerics for the information-disturbance tradeoff of measurements on
//! two-spin direction encodings.
//!
//! A direction on the Bloch sphere is sent either as an antiparallel pair
//! `|n⟩|−n⟩` or a parallel pair `|n⟩|n⟩`. An eavesdropper measures the pair,
//! guesses the direction, and forwards the disturbed state. This crate
//! computes how much she learns (average guess fidelity `I`) against how much
//! she disturbs the first spin (`D = 1 − F`), for:
//!
//! * covariant instruments generated by a single seed operator `A₀`, through
//!   exact trace formulas over Haar-moment operators ([`moments`],
//!   [`evaluator`]);
//! * arbitrary finite instruments, through Monte Carlo over Haar directions;
//! * the closed-form optimal bound and the family of seeds that saturates it
//!   ([`tradeoff`]), plus a multi-start constrained optimizer that recovers
//!   the bound numerically and produces the parallel-spin comparison curve;
//! * the four-outcome tetrahedral realization of a covariant instrument
//!   ([`povm4`]).
//!
//! The crate is `no_std` and only needs `alloc`. Randomness is supplied by
//! the caller through [`rand::Rng`], so every stochastic routine is
//! reproducible given a seeded generator.
//!
//! Two-qubit basis order is `|00⟩, |01⟩, |10⟩, |11⟩` throughout.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod encoding;
pub mod error;
pub mod evaluator;
pub mod instrument;
pub mod linalg;
pub mod moments;
pub mod povm4;
pub mod stats;
pub mod tradeoff;

pub use encoding::{Direction, EncodingMode};
pub use error::{Error, Result};
pub use evaluator::{Instrument, MonteCarloEstimate, Provenance, TradeoffPoint};
pub use instrument::{KrausSeed, VectorDecomposition};
pub use linalg::{ComplexMatrix, ComplexVector, C64};
pub use moments::MomentSet;
pub use povm4::DiscretePovm;
pub use tradeoff::{BoundCurve, OptimizationReport, OptimizerConfig};
