//! Optically thin Maxwell–Schrödinger dynamics and the pulse area theorem.
//!
//! With propagation dropped, each field's area obeys
//! `θ_s'' = -i Ω_a² ρ_ab` and, for the p-field, `θ_p'' = -i Ω_c² ρ_cb` (V) or
//! `θ_p'' = -i Ω_c² ρ_ac` (Λ), with the coherences taken from the first-order
//! Magnus state. Along such trajectories the field energy
//! `|θ_s'|²/Ω_a² + |θ_p'|²/Ω_c²` tracks the excitation: `sin²θ` for V and
//! `|θ_s|² sin²θ / θ²` for Λ.
//!
//! Sign convention: the V derivation-chain identity
//! `-i[ρ_ab* θ_s' − ρ_ab θ_s'*] − i[ρ_bc θ_p' − ρ_bc* θ_p'*] = dρ_bb/dt`
//! holds with `ρ_xy = ψ_x ψ_y*` and the sources above.
//!
//! The Λ law is exact only while `|θ_s|²/|θ_p|²` is constant in time (in
//! particular when one channel stays empty); in general the Λ state's
//! coherences are not the gradient of `ρ_aa` and the residual drifts.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{sinc, state_for, StateVector};
use crate::error::{Error, Result};
use crate::ode;
use crate::propagator::{uniform_grid, IntegratorConfig, Trajectory};
use crate::pulses::{
    cumulative_area_pairs, effective_area, AtomSpec, ComplexArea, PulsePair, Scheme,
};

/// Collective frequencies coupling atomic coherence back into the fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumSpec {
    pub omega_a_coll: f64,
    pub omega_c_coll: f64,
}

impl MediumSpec {
    pub fn new(omega_a_coll: f64, omega_c_coll: f64) -> Result<Self> {
        for (name, v) in [
            ("omega_a_coll", omega_a_coll),
            ("omega_c_coll", omega_c_coll),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("medium.{name}"), "must be positive"));
            }
        }
        Ok(Self {
            omega_a_coll,
            omega_c_coll,
        })
    }

    /// From atomic density, the two transition wavelengths, decay rate and light speed.
    pub fn from_atomic(
        density: f64,
        lambda_ab: f64,
        lambda_cb: f64,
        gamma: f64,
        light_speed: f64,
    ) -> Result<Self> {
        Self::new(
            collective_frequency(density, lambda_ab, gamma, light_speed)?,
            collective_frequency(density, lambda_cb, gamma, light_speed)?,
        )
    }
}

/// `sqrt((3/8π) n λ² γ c)`.
pub fn collective_frequency(n: f64, lambda: f64, gamma: f64, c: f64) -> Result<f64> {
    for (name, v) in [
        ("density", n),
        ("lambda", lambda),
        ("gamma", gamma),
        ("c", c),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::invalid(name, "must be positive"));
        }
    }
    Ok((3.0 / (8.0 * PI) * n * lambda * lambda * gamma * c).sqrt())
}

/// Areas and their time derivatives (the instantaneous complex envelopes).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FieldState {
    pub theta_s: Complex64,
    pub theta_p: Complex64,
    pub dtheta_s: Complex64,
    pub dtheta_p: Complex64,
}

impl FieldState {
    /// Zero areas with an incoming field edge.
    pub fn seeded(dtheta_s: Complex64, dtheta_p: Complex64) -> Self {
        Self {
            dtheta_s,
            dtheta_p,
            ..Self::default()
        }
    }

    fn pack(&self) -> [f64; 8] {
        [
            self.theta_s.re,
            self.theta_s.im,
            self.theta_p.re,
            self.theta_p.im,
            self.dtheta_s.re,
            self.dtheta_s.im,
            self.dtheta_p.re,
            self.dtheta_p.im,
        ]
    }

    fn unpack(y: &[f64; 8]) -> Self {
        Self {
            theta_s: Complex64::new(y[0], y[1]),
            theta_p: Complex64::new(y[2], y[3]),
            dtheta_s: Complex64::new(y[4], y[5]),
            dtheta_p: Complex64::new(y[6], y[7]),
        }
    }

    fn is_finite(&self) -> bool {
        self.pack().iter().all(|v| v.is_finite())
    }
}

/// A self-consistent run: the usual trajectory (areas, `θ'` as fields, atomic
/// observables) plus the raw field states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremTrajectory {
    pub scheme: Scheme,
    pub medium: MediumSpec,
    pub trajectory: Trajectory,
    pub field_states: Vec<FieldState>,
}

/// Second derivatives `(θ_s'', θ_p'')` for the given areas.
pub fn field_sources(
    scheme: Scheme,
    medium: &MediumSpec,
    theta_s: Complex64,
    theta_p: Complex64,
) -> (Complex64, Complex64) {
    let psi = state_for(scheme, theta_s, theta_p);
    let rho_ab = psi.a * psi.b.conj();
    let rho_p = match scheme {
        Scheme::V => psi.c * psi.b.conj(),
        Scheme::Lambda => psi.a * psi.c.conj(),
    };
    let minus_i = Complex64::new(0.0, -1.0);
    let wa2 = medium.omega_a_coll * medium.omega_a_coll;
    let wc2 = medium.omega_c_coll * medium.omega_c_coll;
    (minus_i * wa2 * rho_ab, minus_i * wc2 * rho_p)
}

pub fn solve_self_consistent(
    scheme: Scheme,
    medium: &MediumSpec,
    init: FieldState,
    cfg: &IntegratorConfig,
    t_start: f64,
    t_end: f64,
    n_outputs: usize,
) -> Result<TheoremTrajectory> {
    cfg.validate()?;
    if !init.is_finite() {
        return Err(Error::invalid("init", "field state must be finite"));
    }
    if t_end <= t_start {
        return Err(Error::invalid("time.t_end", "must exceed t_start"));
    }
    if n_outputs < 2 {
        return Err(Error::invalid(
            "time.n_outputs",
            "need at least 2 output points",
        ));
    }
    let rhs = |_t: f64, y: &[f64; 8]| {
        let fs = FieldState::unpack(y);
        let (ss, sp) = field_sources(scheme, medium, fs.theta_s, fs.theta_p);
        [
            fs.dtheta_s.re,
            fs.dtheta_s.im,
            fs.dtheta_p.re,
            fs.dtheta_p.im,
            ss.re,
            ss.im,
            sp.re,
            sp.im,
        ]
    };
    let times = uniform_grid(t_start, t_end, n_outputs);
    let (ys, _) = ode::solve(rhs, t_start, init.pack(), &times, &cfg.ode_options())?;
    let field_states: Vec<FieldState> = ys.iter().map(FieldState::unpack).collect();

    let states: Vec<StateVector> = field_states
        .iter()
        .map(|f| state_for(scheme, f.theta_s, f.theta_p))
        .collect();
    let areas = field_states
        .iter()
        .map(|f| ComplexArea::new(f.theta_s, f.theta_p))
        .collect();
    let fields = field_states
        .iter()
        .map(|f| [f.dtheta_s, f.dtheta_p])
        .collect();
    let envelopes = field_states
        .iter()
        .map(|f| [f.dtheta_s.norm(), f.dtheta_p.norm()])
        .collect();
    Ok(TheoremTrajectory {
        scheme,
        medium: *medium,
        trajectory: Trajectory::assemble(times, states, areas, fields, envelopes),
        field_states,
    })
}

/// Excitation side of the area theorem: `sin²θ` (V) or `|θ_s|² sin²θ/θ²` (Λ).
pub fn excitation(scheme: Scheme, theta_s: Complex64, theta_p: Complex64) -> f64 {
    let theta = effective_area(theta_s, theta_p);
    match scheme {
        Scheme::V => theta.sin().powi(2),
        Scheme::Lambda => theta_s.norm_sqr() * sinc(theta).powi(2),
    }
}

/// Field side: `|Ω_s/Ω_a|² + |Ω_p/Ω_c|²`.
pub fn field_energy(medium: &MediumSpec, field_s: Complex64, field_p: Complex64) -> f64 {
    field_s.norm_sqr() / medium.omega_a_coll.powi(2)
        + field_p.norm_sqr() / medium.omega_c_coll.powi(2)
}

/// `|E(t) − E(t_start)|` with `E = field energy − excitation`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl Residual {
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

fn residual_with(traj: &TheoremTrajectory, scheme: Scheme) -> Residual {
    let energy: Vec<f64> = traj
        .field_states
        .iter()
        .map(|f| {
            field_energy(&traj.medium, f.dtheta_s, f.dtheta_p)
                - excitation(scheme, f.theta_s, f.theta_p)
        })
        .collect();
    let offset = energy.first().copied().unwrap_or(0.0);
    Residual {
        times: traj.trajectory.times.clone(),
        values: energy.iter().map(|e| (e - offset).abs()).collect(),
    }
}

/// Residual of `|θ_s'|²/Ω_a² + |θ_p'|²/Ω_c² = sin²θ` (offset by its initial value).
pub fn conservation_residual_v(traj: &TheoremTrajectory) -> Residual {
    residual_with(traj, Scheme::V)
}

/// Residual of `|θ_s'|²/Ω_a² + |θ_p'|²/Ω_c² = |θ_s|² sin²θ/θ²`.
pub fn conservation_residual_lambda(traj: &TheoremTrajectory) -> Residual {
    residual_with(traj, Scheme::Lambda)
}

/// Residual for the trajectory's own scheme.
pub fn conservation_residual(traj: &TheoremTrajectory) -> Residual {
    residual_with(traj, traj.scheme)
}

/// `ρ_bb` plus the field energy, constant along V trajectories.
pub fn energy_budget(traj: &TheoremTrajectory) -> Vec<f64> {
    traj.field_states
        .iter()
        .zip(&traj.trajectory.observables)
        .map(|(f, o)| field_energy(&traj.medium, f.dtheta_s, f.dtheta_p) + o.rho_bb)
        .collect()
}

/// Field energy minus excitation for externally prescribed pulses.
///
/// This is a diagnostic: the area theorem is an identity only for fields that
/// solve the self-consistent equations, so arbitrary pulses give a nonzero
/// difference.
pub fn area_theorem_pointcheck(
    scheme: Scheme,
    medium: &MediumSpec,
    pulses: &PulsePair,
    atom: &AtomSpec,
    times: &[f64],
) -> Result<Vec<f64>> {
    let step = 0.5 * pulses.max_grid_step(atom);
    let step = if step.is_finite() { step } else { 0.1 };
    let areas = cumulative_area_pairs(atom, pulses, times, step)?;
    Ok(times
        .iter()
        .zip(areas)
        .map(|(&t, a)| {
            field_energy(medium, pulses.s.field(t), pulses.p.field(t))
                - excitation(scheme, a.theta_s, a.theta_p)
        })
        .collect())
}

/// The same difference evaluated on a self-consistent trajectory's own fields.
pub fn area_theorem_refeed(traj: &TheoremTrajectory) -> Vec<f64> {
    traj.field_states
        .iter()
        .map(|f| {
            field_energy(&traj.medium, f.dtheta_s, f.dtheta_p)
                - excitation(traj.scheme, f.theta_s, f.theta_p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg() -> IntegratorConfig {
        IntegratorConfig {
            max_step: 0.05,
            ..IntegratorConfig::with_tolerances(1e-11, 1e-11)
        }
    }

    #[test]
    fn collective_frequency_examples() {
        let n = 8.0 * PI / 3.0;
        assert_abs_diff_eq!(
            collective_frequency(n, 1.0, 1.0, 1.0).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            collective_frequency(n, 2.0, 1.0, 1.0).unwrap(),
            2.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            collective_frequency(1.0, 1.0, 1.0, 1.0).unwrap(),
            0.345_494_149_471_335_5,
            epsilon = 1e-15
        );
        assert!(collective_frequency(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(collective_frequency(1.0, 1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn medium_from_atomic_parameters() {
        let n = 8.0 * PI / 3.0;
        let m = MediumSpec::from_atomic(n, 1.0, 2.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(m.omega_a_coll, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.omega_c_coll, 2.0, epsilon = 1e-15);
        assert!(MediumSpec::new(0.0, 1.0).is_err());
    }

    #[test]
    fn zero_init_is_a_fixed_point() {
        let m = MediumSpec::new(1.0, 1.0).unwrap();
        for scheme in [Scheme::V, Scheme::Lambda] {
            let run =
                solve_self_consistent(scheme, &m, FieldState::default(), &cfg(), 0.0, 10.0, 51)
                    .unwrap();
            for (f, o) in run.field_states.iter().zip(&run.trajectory.observables) {
                assert_eq!(*f, FieldState::default());
                assert_eq!(o.rho_bb, 1.0);
            }
            assert_eq!(conservation_residual(&run).max(), 0.0);
        }
    }

    #[test]
    fn unseeded_p_channel_stays_empty() {
        let m = MediumSpec::new(1.0, 1.0).unwrap();
        let init = FieldState::seeded(Complex64::new(0.1, 0.0), Complex64::new(0.0, 0.0));
        for scheme in [Scheme::V, Scheme::Lambda] {
            let run = solve_self_consistent(scheme, &m, init, &cfg(), 0.0, 50.0, 201).unwrap();
            assert!(run
                .field_states
                .iter()
                .all(|f| f.theta_p.norm() == 0.0 && f.dtheta_p.norm() == 0.0));
            assert!(run.field_states.last().unwrap().theta_s.norm() > 0.1);
        }
    }

    #[test]
    fn residual_reduces_to_two_level_form() {
        // θ_p ≡ 0: both laws collapse to |θ_s'|²/Ω_a² = sin²|θ_s|
        let ts = Complex64::new(0.4, -0.9);
        let r = ts.norm();
        let z = Complex64::new(0.0, 0.0);
        assert_abs_diff_eq!(
            excitation(Scheme::V, ts, z),
            r.sin().powi(2),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            excitation(Scheme::Lambda, ts, z),
            r.sin().powi(2),
            epsilon = 1e-15
        );
    }

    #[test]
    fn pointcheck_with_zero_fields_is_zero() {
        let m = MediumSpec::new(1.0, 1.0).unwrap();
        let atom = AtomSpec::v(12.0, 10.0).unwrap();
        let times = uniform_grid(-15.0, 15.0, 31);
        let d = area_theorem_pointcheck(Scheme::V, &m, &PulsePair::zero(), &atom, &times).unwrap();
        assert!(d.iter().all(|&x| x == 0.0));
    }
}
