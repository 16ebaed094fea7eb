//! Charge qubit coupled to a single cavity mode: exact dynamics, reduced
//! qubit states, and the rate at which evolved eigenvectors become orthogonal
//! to the initial ones.
//!
//! The closed-form evaluator in [`propagator`] is the production path; the
//! dense evolution in [`oracle`] is an independent reference for it.

pub mod device;
pub mod error;
pub mod fieldstates;
pub mod oracle;
pub mod orthodetect;
pub mod propagator;
pub mod qubit;
pub mod spectral;
pub mod sweep;

pub use error::{Error, Result};
pub use fieldstates::{make_binomial, make_coherent_approx, make_fock, mean_photon, FieldKind, FieldState};
pub use orthodetect::{DetectorSettings, OrthogonalityEvent, SpeedReport, Window};
pub use propagator::{closed_form_rho, evolve_joint, reduced_qubit, JointState, ModelParams};
pub use qubit::{QubitDensity, QubitInit};
pub use spectral::{eig2, overlaps, InitialBasis, OverlapSample, SpectralPair};
pub use sweep::{run_cell, run_sweep, with_threads, Axis, CellResult, Engine, FieldSpec, SweepConfig, SweepEntry, TimeGrid};
