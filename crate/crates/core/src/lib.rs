//! Supersymmetric quantum mechanics of Dirac-delta interaction arrays on the line.
//!
//! Units: hbar = 1, 2m = 1. Energies carry length^-2, delta strengths
//! length^-1, positions length.
//!
//! The crate is organized around the configurations it solves:
//!
//! * [`model`] builds piecewise-linear superpotentials, the partner
//!   potentials V0/V1 they generate and the candidate zero modes e^{+-W}.
//! * [`scattering`] evaluates closed-form scattering amplitudes, the maps
//!   between the two sectors, S-matrices and phase shifts.
//! * [`spectra`] locates bound states as roots of transcendental spectral
//!   equations and verifies the pairing between the two sectors.
//! * [`comb`] solves the infinite alternating Dirac comb: dispersion
//!   relation, bands and Bloch cell wavefunctions.
//! * [`witten`] computes spectral-density differences and the heat-kernel
//!   regularized Witten index.
//! * [`oracle`] is an independent transfer-matrix engine used to
//!   cross-check every closed form.

pub mod cli;
pub mod comb;
pub mod config;
pub mod error;
pub mod model;
pub mod oracle;
pub mod roots;
pub mod scattering;
pub mod spectra;
pub mod witten;

pub use config::ConfigKind;
pub use error::{Error, Result};
