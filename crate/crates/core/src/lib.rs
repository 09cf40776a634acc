//! Simulation of a double-slit quantum eraser whose which-path marker is
//! sent through an unbalanced Mach-Zehnder interferometer.
//!
//! The crate is organised bottom-up:
//!
//! * [`state`]: kets over idler polarization ⊗ signal polarization ⊗ slit path,
//!   qubit density operators, projections and purity.
//! * [`optics`]: Jones matrices, named polarization bases and the birefringent
//!   double slit acting on a [`state::HybridKet`].
//! * [`channel`]: the interferometer as a polarization decoherence channel,
//!   with a frequency-quadrature oracle for the decoherence factor.
//! * [`propagation`]: far-field propagation of the signal photon from the
//!   double slit to the scanning detector.
//! * [`model`]: the decohered idler density operator at a detector position,
//!   coincidence counts, the closed-form measurement cases and a full-state
//!   frequency-resolved oracle.
//!
//! Tensor index order is fixed crate-wide as (idler polarization, signal
//! polarization, slit path), with `H = 0, V = 1` and upper slit `+ = 0`,
//! lower slit `− = 1`.

pub mod channel;
mod error;
pub mod math;
pub mod model;
pub mod optics;
pub mod propagation;
pub mod state;

pub use error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
