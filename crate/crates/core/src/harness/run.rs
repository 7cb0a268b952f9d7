//! Running scenarios, comparing trajectories, and parameter sweeps.

use serde::{Deserialize, Serialize};

use crate::analytic::state_for;
use crate::analytic::{DensityObservables, StateVector};
use crate::error::{Error, Result};
use crate::propagator::{
    drive_samples, evolve, integrate, uniform_grid, IntegratorConfig, Trajectory,
};
use crate::pulses::{AtomSpec, PulsePair};
use crate::theorem::{solve_self_consistent, TheoremTrajectory};

use super::scenario::{with_leaf, Mode, Scenario};

/// Step cap for self-consistent runs, which carry no optical carrier.
const THEOREM_MAX_STEP: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub enum RunOutput {
    Analytic(Trajectory),
    Numeric(Trajectory),
    Both {
        analytic: Trajectory,
        numeric: Trajectory,
    },
    Theorem(TheoremTrajectory),
}

/// First-order Magnus states on a grid, areas accumulated from `times[0]`.
pub fn analytic_trajectory(
    atom: &AtomSpec,
    pulses: &PulsePair,
    times: &[f64],
) -> Result<Trajectory> {
    atom.validate()?;
    let (areas, fields, envelopes) = drive_samples(atom, pulses, times)?;
    let states = areas
        .iter()
        .map(|a| state_for(atom.scheme, a.theta_s, a.theta_p))
        .collect();
    Ok(Trajectory::assemble(
        times.to_vec(),
        states,
        areas,
        fields,
        envelopes,
    ))
}

fn numeric_trajectory(s: &Scenario) -> Result<Trajectory> {
    let cfg = s.integrator.resolved_for(&s.atom, &s.pulses);
    if s.atom.decay.is_some() {
        evolve(
            &s.atom,
            &s.pulses,
            &cfg,
            StateVector::ground(),
            s.t_start,
            s.t_end,
            s.n_outputs,
        )
    } else {
        integrate(&s.atom, &s.pulses, &cfg, s.t_start, s.t_end, s.n_outputs)
    }
}

pub fn run_scenario(s: &Scenario) -> Result<RunOutput> {
    let times = || uniform_grid(s.t_start, s.t_end, s.n_outputs);
    match s.mode {
        Mode::Analytic => Ok(RunOutput::Analytic(analytic_trajectory(
            &s.atom,
            &s.pulses,
            &times(),
        )?)),
        Mode::Numeric => Ok(RunOutput::Numeric(numeric_trajectory(s)?)),
        Mode::Both => {
            let numeric = numeric_trajectory(s)?;
            let analytic = analytic_trajectory(&s.atom, &s.pulses, &numeric.times)?;
            Ok(RunOutput::Both { analytic, numeric })
        }
        Mode::Theorem => {
            let medium = s.medium.ok_or_else(|| {
                Error::invalid("medium", "theorem mode requires a [medium] section")
            })?;
            let cfg = IntegratorConfig {
                max_step: THEOREM_MAX_STEP,
                ..s.integrator
            };
            Ok(RunOutput::Theorem(solve_self_consistent(
                s.atom.scheme,
                &medium,
                s.seed,
                &cfg,
                s.t_start,
                s.t_end,
                s.n_outputs,
            )?))
        }
    }
}

/// Observables compared between trajectories, in report order.
pub const COMPARED: [&str; 5] = ["rho_aa", "rho_cc", "im_rho_ab", "im_rho_cb", "im_rho_ac"];

fn compared_values(o: &DensityObservables) -> [f64; 5] {
    [o.rho_aa, o.rho_cc, o.rho_ab.im, o.rho_cb.im, o.rho_ac.im]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableDeviation {
    pub observable: String,
    pub max_abs: f64,
    pub rms: f64,
    pub t_at_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallParameters {
    pub s: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub deviations: Vec<ObservableDeviation>,
    pub small_parameters: Option<SmallParameters>,
}

impl ComparisonReport {
    /// Largest deviation over all compared observables.
    pub fn max_deviation(&self) -> f64 {
        self.deviations
            .iter()
            .map(|d| d.max_abs)
            .fold(0.0, f64::max)
    }

    pub fn get(&self, observable: &str) -> Option<&ObservableDeviation> {
        self.deviations.iter().find(|d| d.observable == observable)
    }
}

/// Per-observable deviations between two trajectories on the same grid.
pub fn compare(a: &Trajectory, b: &Trajectory) -> Result<ComparisonReport> {
    if a.times.len() != b.times.len() {
        return Err(Error::GridMismatch(format!(
            "{} vs {} points",
            a.times.len(),
            b.times.len()
        )));
    }
    if let Some((i, (ta, tb))) = a
        .times
        .iter()
        .zip(&b.times)
        .enumerate()
        .find(|(_, (ta, tb))| ta != tb)
    {
        return Err(Error::GridMismatch(format!("point {i}: t = {ta} vs {tb}")));
    }
    let n = a.times.len();
    let mut max_abs = [0.0f64; 5];
    let mut t_at_max = [a.times.first().copied().unwrap_or(0.0); 5];
    let mut sum_sq = [0.0f64; 5];
    for (i, (oa, ob)) in a.observables.iter().zip(&b.observables).enumerate() {
        let va = compared_values(oa);
        let vb = compared_values(ob);
        for k in 0..5 {
            let d = (va[k] - vb[k]).abs();
            sum_sq[k] += d * d;
            if d > max_abs[k] {
                max_abs[k] = d;
                t_at_max[k] = a.times[i];
            }
        }
    }
    let deviations = COMPARED
        .iter()
        .enumerate()
        .map(|(k, name)| ObservableDeviation {
            observable: name.to_string(),
            max_abs: max_abs[k],
            rms: if n > 0 {
                (sum_sq[k] / n as f64).sqrt()
            } else {
                0.0
            },
            t_at_max: t_at_max[k],
        })
        .collect();
    Ok(ComparisonReport {
        deviations,
        small_parameters: None,
    })
}

/// Runs both routes of a scenario and compares them.
pub fn compare_scenario(s: &Scenario) -> Result<ComparisonReport> {
    let both = Scenario {
        mode: Mode::Both,
        ..s.clone()
    };
    let RunOutput::Both { analytic, numeric } = run_scenario(&both)? else {
        unreachable!("both mode yields paired trajectories")
    };
    let mut report = compare(&analytic, &numeric)?;
    let [ps, pp] = s.small_parameters();
    report.small_parameters = Some(SmallParameters { s: ps, p: pp });
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub report: ComparisonReport,
}

/// Analytic-vs-numeric comparisons across values of one scenario leaf.
/// Results follow the order of `values`.
pub fn sweep(base: &Scenario, axis: &str, values: &[f64]) -> Result<Vec<SweepPoint>> {
    let scenarios = values
        .iter()
        .map(|&v| with_leaf(base, axis, v).map_err(|e| wrap(v, e)))
        .collect::<Result<Vec<_>>>()?;
    let run_one = |(v, s): (&f64, &Scenario)| -> Result<SweepPoint> {
        compare_scenario(s)
            .map(|report| SweepPoint { value: *v, report })
            .map_err(|e| wrap(*v, e))
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        values
            .par_iter()
            .zip(scenarios.par_iter())
            .map(run_one)
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        values.iter().zip(scenarios.iter()).map(run_one).collect()
    }
}

fn wrap(value: f64, source: Error) -> Error {
    Error::Sweep {
        value,
        source: Box::new(source),
    }
}
