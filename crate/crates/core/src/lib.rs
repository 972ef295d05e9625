//! Density-matrix toolkit for discovering two-qubit observables whose
//! expectation values stay flat under parameterized noise channels.
//!
//! The crate is organized around a small pipeline:
//!
//! - [`linalg`]: dense complex 2x2/4x4 kernel (products, Kronecker products,
//!   traces, a Hermitian Jacobi eigensolver),
//! - [`states`]: the six two-qubit circuit output states as density matrices,
//! - [`channels`]: five noise channels as Kraus sets on the full two-qubit
//!   space, with CPTP validation,
//! - [`observables`]: Pauli-parameterized Hermitian observables, expectation
//!   values, invariance residuals and property reports,
//! - [`learning`]: noise-rate grid, absolute-square loss, three gradient
//!   modes and gradient-descent training over all circuit-channel pairs,
//! - [`analysis`]: the fixed toy sweep, cross-evaluation of learned
//!   observables and the standard-deviation histogram.
//!
//! Everything is deterministic: random draws go through [`rng::SplitMix64`]
//! with explicit seeds, so any result can be regenerated bit for bit.

pub mod analysis;
pub mod channels;
pub mod learning;
pub mod linalg;
pub mod observables;
pub mod rng;
pub mod states;

mod error;

pub use error::{Error, Result};
