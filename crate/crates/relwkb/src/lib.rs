//! Semiclassical quantization of relativistic bound states in central
//! potentials.
//!
//! The crate solves the Maslov-corrected quantum condition
//! I_r = (n_r + m/4) hbar for the radial action of a spinless relativistic
//! particle, builds the corresponding semiclassical wavefunctions, and
//! verifies both against an independent Numerov eigensolver for the
//! stationary wave equation and against the closed-form relativistic
//! Coulomb spectrum.

pub mod action;
pub mod cli;
pub mod context;
pub mod error;
pub mod kinematics;
mod numeric;
pub mod oracle;
pub mod potential;
pub mod quantize;
pub mod wavefunction;

pub use context::{Energy, PhysicalContext, Tolerances};
pub use error::{Error, Result};
pub use kinematics::ClassicalRegion;
pub use potential::RadialPotential;
pub use quantize::{QuantumCondition, SpectrumEntry};
