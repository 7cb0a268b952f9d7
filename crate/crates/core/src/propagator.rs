//! Exact numerical propagation of the interaction-picture Schrödinger equation.
//!
//! The full Hamiltonians keep both rotating and counter-rotating terms, so the
//! integrator step is capped to resolve the fastest phase `ω + ν`. Decay is
//! modelled by the non-Hermitian Hamiltonian `H − (i/2)Γ`, `Γ = diag(γ_a, γ_b, γ_c)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{density_from_state, DensityObservables, StateVector};
use crate::error::{Error, Result};
use crate::matrix::{self, Mat3};
use crate::ode;
use crate::pulses::{cumulative_area_pairs, AtomSpec, ComplexArea, PulsePair, Scheme};

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub initial_step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            max_step: 0.05,
            initial_step: 1e-3,
            max_steps: 5_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    /// Default tolerances with `max_step` set to the phase-resolution limit of the drive.
    pub fn resolving(atom: &AtomSpec, pulses: &PulsePair) -> Self {
        Self::default().resolved_for(atom, pulses)
    }

    /// Caps `max_step` at the phase-resolution limit.
    pub fn resolved_for(mut self, atom: &AtomSpec, pulses: &PulsePair) -> Self {
        self.max_step = self.max_step.min(max_step_limit(atom, pulses));
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::invalid("integrator", "tolerances must be positive"));
        }
        if !(self.max_step > 0.0 && self.initial_step > 0.0) {
            return Err(Error::invalid("integrator", "step sizes must be positive"));
        }
        if self.max_steps == 0 {
            return Err(Error::invalid("integrator.max_steps", "must be positive"));
        }
        Ok(())
    }

    fn check_resolution(&self, atom: &AtomSpec, pulses: &PulsePair) -> Result<()> {
        let limit = max_step_limit(atom, pulses);
        if self.max_step > limit {
            return Err(Error::Aliasing {
                step: self.max_step,
                limit,
            });
        }
        Ok(())
    }

    pub(crate) fn ode_options(&self) -> ode::Options {
        ode::Options {
            rtol: self.rel_tol,
            atol: self.abs_tol,
            max_step: self.max_step,
            initial_step: self.initial_step,
            max_steps: self.max_steps,
        }
    }
}

/// `2π / (20 · max(ω_s + ν_s, ω_p + ν_p))` over the channels that are switched on.
pub fn max_step_limit(atom: &AtomSpec, pulses: &PulsePair) -> f64 {
    pulses.max_grid_step(atom)
}

/// Time series of states and the quantities plotted against them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    pub observables: Vec<DensityObservables>,
    pub areas: Vec<ComplexArea>,
    /// `(Ω_s(t), Ω_p(t))`.
    pub fields: Vec<[Complex64; 2]>,
    /// `(Ω_s Σ_s(t), Ω_p Σ_p(t))`, or `|θ'|` for self-consistent runs.
    pub envelopes: Vec<[f64; 2]>,
}

impl Trajectory {
    pub fn assemble(
        times: Vec<f64>,
        states: Vec<StateVector>,
        areas: Vec<ComplexArea>,
        fields: Vec<[Complex64; 2]>,
        envelopes: Vec<[f64; 2]>,
    ) -> Self {
        debug_assert!([states.len(), areas.len(), fields.len(), envelopes.len()]
            .iter()
            .all(|&n| n == times.len()));
        let observables = states.iter().map(density_from_state).collect();
        Self {
            times,
            states,
            observables,
            areas,
            fields,
            envelopes,
        }
    }

    pub fn empty() -> Self {
        Self::assemble(vec![], vec![], vec![], vec![], vec![])
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> Option<StateVector> {
        self.states.last().copied()
    }
}

/// `n` evenly spaced points from `t_start` to `t_end` inclusive.
pub fn uniform_grid(t_start: f64, t_end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![t_start],
        _ => {
            let dt = (t_end - t_start) / (n - 1) as f64;
            (0..n)
                .map(|k| {
                    if k == n - 1 {
                        t_end
                    } else {
                        t_start + k as f64 * dt
                    }
                })
                .collect()
        }
    }
}

/// `H_int(t)/ħ` for the V or Λ scheme.
pub fn hamiltonian(atom: &AtomSpec, pulses: &PulsePair, t: f64) -> Mat3 {
    let mut h = matrix::zeros();
    let s = -pulses.s.field(t) * Complex64::cis(atom.omega_ab * t);
    h[A][B] = s;
    h[B][A] = s.conj();
    match atom.scheme {
        Scheme::V => {
            let p = -pulses.p.field(t) * Complex64::cis(atom.omega_cb * t);
            h[C][B] = p;
            h[B][C] = p.conj();
        }
        Scheme::Lambda => {
            let p = -pulses.p.field(t) * Complex64::cis(atom.omega_ac() * t);
            h[A][C] = p;
            h[C][A] = p.conj();
        }
    }
    h
}

fn pack(psi: &StateVector) -> [f64; 6] {
    [psi.a.re, psi.b.re, psi.c.re, psi.a.im, psi.b.im, psi.c.im]
}

fn unpack(y: &[f64; 6]) -> StateVector {
    StateVector::new(
        Complex64::new(y[0], y[3]),
        Complex64::new(y[1], y[4]),
        Complex64::new(y[2], y[5]),
    )
}

/// Propagates an arbitrary initial state from `t_start` to `t_end` (either
/// direction) with the atom's decay rates, if any.
pub fn evolve(
    atom: &AtomSpec,
    pulses: &PulsePair,
    cfg: &IntegratorConfig,
    initial: StateVector,
    t_start: f64,
    t_end: f64,
    n_outputs: usize,
) -> Result<Trajectory> {
    atom.validate()?;
    cfg.validate()?;
    cfg.check_resolution(atom, pulses)?;
    if t_end == t_start || !(t_start.is_finite() && t_end.is_finite()) {
        return Err(Error::invalid("time", "t_end must differ from t_start"));
    }
    if n_outputs < 2 {
        return Err(Error::invalid(
            "time.n_outputs",
            "need at least 2 output points",
        ));
    }
    let gamma = atom.decay.unwrap_or([0.0; 3]);
    let rhs = |t: f64, y: &[f64; 6]| {
        let h = hamiltonian(atom, pulses, t);
        let psi = unpack(y).to_array();
        let hp = matrix::apply(&h, &psi);
        // dψ/dt = -i H ψ - ½ Γ ψ
        let mut d = [Complex64::new(0.0, 0.0); 3];
        for i in 0..3 {
            d[i] = Complex64::new(hp[i].im, -hp[i].re) - psi[i] * (0.5 * gamma[i]);
        }
        pack(&StateVector::from_array(d))
    };

    let times = uniform_grid(t_start, t_end, n_outputs);
    let (ys, _) = ode::solve(rhs, t_start, pack(&initial), &times, &cfg.ode_options())?;
    let states = ys.iter().map(unpack).collect();

    let (areas, fields, envelopes) = drive_samples(atom, pulses, &times)?;
    Ok(Trajectory::assemble(
        times, states, areas, fields, envelopes,
    ))
}

pub(crate) type DriveSamples = (Vec<ComplexArea>, Vec<[Complex64; 2]>, Vec<[f64; 2]>);

/// Areas, fields, and envelopes of the prescribed drive on a grid (increasing or decreasing).
pub(crate) fn drive_samples(
    atom: &AtomSpec,
    pulses: &PulsePair,
    times: &[f64],
) -> Result<DriveSamples> {
    let step = 0.5 * pulses.max_grid_step(atom);
    let step = if step.is_finite() { step } else { 0.1 };
    let areas = if times.len() > 1 && times[1] < times[0] {
        // areas are always accumulated forward from the earliest time
        let rev: Vec<f64> = times.iter().rev().copied().collect();
        let mut a = cumulative_area_pairs(atom, pulses, &rev, step)?;
        a.reverse();
        a
    } else {
        cumulative_area_pairs(atom, pulses, times, step)?
    };
    let fields = times
        .iter()
        .map(|&t| [pulses.s.field(t), pulses.p.field(t)])
        .collect();
    let envelopes = times
        .iter()
        .map(|&t| {
            [
                pulses.s.peak_rabi * pulses.s.envelope.eval(t),
                pulses.p.peak_rabi * pulses.p.envelope.eval(t),
            ]
        })
        .collect();
    Ok((areas, fields, envelopes))
}

/// Starts in `|b⟩` and propagates without decay.
pub fn integrate(
    atom: &AtomSpec,
    pulses: &PulsePair,
    cfg: &IntegratorConfig,
    t_start: f64,
    t_end: f64,
    n_outputs: usize,
) -> Result<Trajectory> {
    if t_end <= t_start {
        return Err(Error::invalid("time.t_end", "must exceed t_start"));
    }
    let lossless = AtomSpec {
        decay: None,
        ..atom.clone()
    };
    evolve(
        &lossless,
        pulses,
        cfg,
        StateVector::ground(),
        t_start,
        t_end,
        n_outputs,
    )
}

/// Starts in `|b⟩` and propagates under `H − (i/2)Γ`.
pub fn integrate_with_decay(
    atom: &AtomSpec,
    pulses: &PulsePair,
    cfg: &IntegratorConfig,
    t_start: f64,
    t_end: f64,
    n_outputs: usize,
) -> Result<Trajectory> {
    if atom.decay.is_none() {
        return Err(Error::invalid("atom.decay", "decay rates are required"));
    }
    if t_end <= t_start {
        return Err(Error::invalid("time.t_end", "must exceed t_start"));
    }
    evolve(
        atom,
        pulses,
        cfg,
        StateVector::ground(),
        t_start,
        t_end,
        n_outputs,
    )
}
