//! Quantum-kernel machine learning on simulated spin ensembles.
//!
//! The crate is organized around a small pipeline:
//!
//! - [`spinsim`] — dense state-vector simulation of an n-spin-1/2 system and
//!   the data-encoding unitary built from phase-rotated double-quantum
//!   evolutions.
//! - [`qkernel`] — kernel evaluation (pure-state overlap and exact ensemble
//!   trace forms), Gram matrices, 1D kernel profiles, and multiple-quantum
//!   spectra.
//! - [`learners`] — kernel ridge regression with regularization selection and
//!   a hard-margin SVM solved by sequential minimal optimization.
//! - [`datasets`] — seeded generators for the regression and classification
//!   tasks, plus evaluation grids.

pub mod datasets;
pub mod error;
pub mod fmt;
pub mod learners;
pub mod qkernel;
pub mod spinsim;

pub use error::{Error, Result};
pub use spinsim::{DataPoint, EncodingParams, SpinSystem, StateVector};
