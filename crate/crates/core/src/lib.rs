//! Exactly solvable decay of a single bosonic mode coupled to a bosonic bath
//! in the rotating-wave approximation.
//!
//! Every closed-form law (Heisenberg coefficients, Fock and coherent decay,
//! finite-temperature factors, the effective Hamiltonian) sits next to an
//! independent brute-force route built on a finite, discretized bath:
//!
//! * [`propagator::ExactPropagator`] diagonalizes the single-excitation
//!   Hamiltonian and evaluates `exp(-i h t)` at any time.
//! * [`fock_oracle::FockOracle`] evolves the full many-boson Hamiltonian in a
//!   truncated Fock basis and partial-traces the bath.
//! * [`montecarlo`] samples the thermal bath in the Glauber-P representation.
//!
//! Units: `hbar = k_B = 1`; frequencies and rates share one angular-frequency
//! unit and times are measured in its inverse.

// Validation uses `!(x > 0.0)` so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod decay;
pub mod error;
pub mod fock_oracle;
pub(crate) mod linalg;
pub mod montecarlo;
pub mod propagator;
pub mod spectral;
pub mod state;
pub mod thermal;

pub use num_complex::Complex64 as C64;

pub use decay::{JointCoherentLabels, PopulationDistribution};
pub use error::{Error, Result};
pub use fock_oracle::FockOracle;
pub use montecarlo::{GaussianMoments, ThermalSampleSet};
pub use propagator::{ExactPropagator, PropagatorCoefficients, Provenance, SystemMode};
pub use spectral::{BathMode, DiscreteBath, SpectralDensitySpec, ThermalSpec};
pub use state::{DensityMatrixFock, OpenSystemState};
pub use thermal::{EffectiveHamiltonian, PhiFactor, PhiMethod};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
