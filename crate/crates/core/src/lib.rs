//! Dual pairs of supersymmetric partner Hamiltonians built from an even
//! kernel `k(x)` and a coupling `g`.
//!
//! The coupling enters through `s = (1 - g^2)/(1 + g^2)`, so `g -> 1/g` is
//! `s -> -s`. The superpotential solves `W' = s (W^2 - k)`; writing
//! `W = -y'/(s y)` linearizes this to `y'' = s^2 k y`, whose even solution
//! depends on `s^2` only. The partners `V_-+ = W^2 -+ W'` therefore satisfy
//! `V_minus(x, -s) = V_plus(x, s)`, and their discrete spectra coincide up
//! to a single zero mode.
//!
//! Modules, bottom-up:
//!
//! - [`coupling`]: `g`, `s` and the antisymmetric coupling functions `b(g)`
//! - [`kernel`], [`grid`]: inputs
//! - [`sl_engine`]: Riccati log-derivative solver and the harmonic series
//! - [`susy`]: superpotential, partner potentials, duality checks
//! - [`spectral`]: tridiagonal eigensolver, zero modes, pairing
//! - [`analytic`]: closed forms used as oracles
//! - [`lab`]: one-call runs tying the above together
//! - [`verify`], [`output`], [`cli`]: the command-line front end

pub mod analytic;
pub mod cli;
pub mod coupling;
pub mod error;
pub mod grid;
pub mod kernel;
pub mod lab;
pub mod output;
pub mod sl_engine;
pub mod spectral;
pub mod susy;
pub mod verify;

pub use coupling::{BFamily, CouplingParam};
pub use error::{Error, Result};
pub use grid::Grid;
pub use kernel::{Kernel, TabulatedKernel};
pub use sl_engine::LogDerivProfile;
pub use spectral::{PairingReport, Sector, SpectrumReport, SusyStatus};
pub use susy::{PotentialPair, Superpotential};

/// Crate version, embedded in every output's metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
