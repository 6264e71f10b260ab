//! Bloch oscillations in non-Hermitian single-band tight-binding lattices.
//!
//! The crate propagates the lattice Schrödinger equation exactly (direct RK4
//! integration, Bessel-function propagators for the Hatano-Nelson and
//! imaginary-coupling lattices, and a Wei-Norman product propagator) and
//! compares it with the quasiclassical Gaussian dynamics, its narrow-momentum
//! limit and momentum ensembles.

// `!(x > 0.0)` is the NaN-rejecting form of a positivity check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod ensemble;
pub mod error;
pub mod model;
pub mod quantum;
pub mod record;
pub mod special;

pub use error::{Error, Result};
pub use model::ModelParams;
pub use num_complex::Complex64 as C64;
