//! Three-level V and Λ atoms driven by arbitrary time-dependent pulses.
//!
//! The crate computes the first-order Magnus (complex pulse area) solution,
//! checks it against an exact propagator that keeps counter-rotating terms,
//! and verifies the three-level pulse area theorem in an optically thin medium.
//!
//! Units are natural (ħ = 1); all frequencies are angular.

pub mod analytic;
pub mod error;
pub mod harness;
pub mod matrix;
pub mod propagator;
pub mod pulses;
pub mod theorem;

mod ode;
mod quad;

pub use analytic::{
    density_from_state, magnus2_norm, rwa_state_lambda, rwa_state_v, state_for, state_lambda,
    state_v, DensityObservables, StateVector,
};
pub use error::{Error, Result};
pub use propagator::{
    evolve, hamiltonian, integrate, integrate_with_decay, uniform_grid, IntegratorConfig,
    Trajectory,
};
pub use pulses::{
    cumulative_areas, effective_area, envelope_eval, field_eval, pulse_area, AtomSpec, CarrierMode,
    ComplexArea, EnvelopeSpec, PulsePair, PulseSpec, Scheme,
};
pub use theorem::{
    area_theorem_pointcheck, collective_frequency, conservation_residual_lambda,
    conservation_residual_v, solve_self_consistent, FieldState, MediumSpec,
};
