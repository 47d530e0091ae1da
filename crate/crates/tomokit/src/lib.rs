//! Tomographic-probability toolkit.
//!
//! The crate maps states to fair probability distributions and back:
//!
//! * [`probkit`]: conditional families, joint distributions, and the
//!   classical entropy inequalities (subadditivity, strong subadditivity).
//! * [`states`]: oscillator wave functions, Gaussian phase densities,
//!   density matrices, and the JSON state-spec language.
//! * [`radon`]: forward line-integral tomograms of classical densities,
//!   homogeneous symplectic tomograms, filtered backprojection, and the
//!   Gaussian-weighted modified tomograms.
//! * [`qtomo`]: fractional Fourier transform of wave functions, quantum
//!   optical tomograms, Wigner reconstruction.
//! * [`entropy`]: Shannon/Rényi/von Neumann entropies, per-angle entropy
//!   profiles, and the entropic uncertainty checks.
//! * [`spin`]: qudit tomograms over SU(2) and Haar unitaries, weighted
//!   unitary sets, and the spin entropy inequalities.

pub mod entropy;
pub mod error;
pub mod grid;
pub mod io;
pub mod probkit;
pub mod qtomo;
pub mod radon;
pub mod spin;
pub mod states;

pub use error::{Result, TomoError};
