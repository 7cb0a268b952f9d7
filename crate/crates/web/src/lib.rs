//! Browser bindings: envelope preview, analytic vs exact comparison, and
//! self-consistent area theorem runs. Every entry point returns a JSON string.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use trilevel::harness::{analytic_trajectory, compare};
use trilevel::theorem::conservation_residual;
use trilevel::{
    integrate, solve_self_consistent, uniform_grid, AtomSpec, EnvelopeSpec, FieldState,
    IntegratorConfig, MediumSpec, PulsePair, PulseSpec, Result, Scheme, Trajectory,
};

const MAX_POINTS: usize = 20_000;

fn scheme(name: &str) -> Result<Scheme> {
    match name {
        "V" | "v" => Ok(Scheme::V),
        "Lambda" | "lambda" | "Λ" => Ok(Scheme::Lambda),
        _ => Err(trilevel::Error::invalid(
            "scheme",
            "expected \"V\" or \"Lambda\"",
        )),
    }
}

fn points(n: usize) -> Result<usize> {
    if (2..=MAX_POINTS).contains(&n) {
        Ok(n)
    } else {
        Err(trilevel::Error::invalid(
            "n",
            format!("must be between 2 and {MAX_POINTS}"),
        ))
    }
}

#[derive(Serialize)]
struct EnvelopeCurve {
    t: Vec<f64>,
    envelope: Vec<f64>,
}

pub fn envelope_json(q: f64, tau_p: f64, n: usize) -> Result<String> {
    let env = EnvelopeSpec::tanh_family(q, tau_p)?;
    let t = uniform_grid(-1.5 * tau_p, 1.5 * tau_p, points(n)?);
    let envelope = t.iter().map(|&x| env.eval(x)).collect();
    Ok(serde_json::to_string(&EnvelopeCurve { t, envelope })?)
}

/// Drive parameters shared by both channels' envelopes.
#[derive(Debug, Clone, Copy)]
pub struct Drive {
    pub omega_ab: f64,
    pub omega_cb: f64,
    pub rabi_s: f64,
    pub rabi_p: f64,
    pub nu_s: f64,
    pub nu_p: f64,
    pub q: f64,
    pub tau_p: f64,
}

#[derive(Serialize)]
struct Series {
    rho_aa: Vec<f64>,
    rho_cc: Vec<f64>,
    im_rho_ab: Vec<f64>,
    im_rho_cb: Vec<f64>,
    im_rho_ac: Vec<f64>,
}

impl Series {
    fn of(traj: &Trajectory) -> Self {
        let o = &traj.observables;
        Self {
            rho_aa: o.iter().map(|x| x.rho_aa).collect(),
            rho_cc: o.iter().map(|x| x.rho_cc).collect(),
            im_rho_ab: o.iter().map(|x| x.rho_ab.im).collect(),
            im_rho_cb: o.iter().map(|x| x.rho_cb.im).collect(),
            im_rho_ac: o.iter().map(|x| x.rho_ac.im).collect(),
        }
    }
}

#[derive(Serialize)]
struct Comparison {
    t: Vec<f64>,
    analytic: Series,
    numeric: Series,
    max_deviation: f64,
    deviations: Vec<(String, f64)>,
}

pub fn comparison_json(scheme_name: &str, d: Drive, n: usize) -> Result<String> {
    let atom = AtomSpec::new(scheme(scheme_name)?, d.omega_ab, d.omega_cb)?;
    let pulses = PulsePair::new(
        PulseSpec::tanh_cosine(d.rabi_s, d.nu_s, d.q, d.tau_p)?,
        PulseSpec::tanh_cosine(d.rabi_p, d.nu_p, d.q, d.tau_p)?,
    );
    let cfg = IntegratorConfig::resolving(&atom, &pulses);
    let numeric = integrate(
        &atom,
        &pulses,
        &cfg,
        -1.5 * d.tau_p,
        1.5 * d.tau_p,
        points(n)?,
    )?;
    let analytic = analytic_trajectory(&atom, &pulses, &numeric.times)?;
    let report = compare(&analytic, &numeric)?;
    Ok(serde_json::to_string(&Comparison {
        max_deviation: report.max_deviation(),
        deviations: report
            .deviations
            .iter()
            .map(|x| (x.observable.clone(), x.max_abs))
            .collect(),
        analytic: Series::of(&analytic),
        numeric: Series::of(&numeric),
        t: numeric.times,
    })?)
}

#[derive(Serialize)]
struct TheoremRun {
    t: Vec<f64>,
    abs_theta_s: Vec<f64>,
    abs_theta_p: Vec<f64>,
    field_s: Vec<f64>,
    field_p: Vec<f64>,
    residual: Vec<f64>,
    max_residual: f64,
}

pub fn theorem_json(
    scheme_name: &str,
    omega_a_coll: f64,
    omega_c_coll: f64,
    seed_s: f64,
    seed_p: f64,
    t_end: f64,
    n: usize,
) -> Result<String> {
    let medium = MediumSpec::new(omega_a_coll, omega_c_coll)?;
    let seed = FieldState::seeded(seed_s.into(), seed_p.into());
    let cfg = IntegratorConfig {
        max_step: 0.05,
        ..IntegratorConfig::with_tolerances(1e-11, 1e-11)
    };
    let run = solve_self_consistent(
        scheme(scheme_name)?,
        &medium,
        seed,
        &cfg,
        0.0,
        t_end,
        points(n)?,
    )?;
    let residual = conservation_residual(&run);
    let fs = &run.field_states;
    Ok(serde_json::to_string(&TheoremRun {
        abs_theta_s: fs.iter().map(|f| f.theta_s.norm()).collect(),
        abs_theta_p: fs.iter().map(|f| f.theta_p.norm()).collect(),
        field_s: fs.iter().map(|f| f.dtheta_s.norm()).collect(),
        field_p: fs.iter().map(|f| f.dtheta_p.norm()).collect(),
        max_residual: residual.max(),
        residual: residual.values,
        t: residual.times,
    })?)
}

fn js<T>(r: Result<T>) -> std::result::Result<T, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

/// Pulse envelope `Σ(t)` over `[-1.5τ_p, 1.5τ_p]`.
#[wasm_bindgen]
pub fn envelope(q: f64, tau_p: f64, n: usize) -> std::result::Result<String, JsError> {
    js(envelope_json(q, tau_p, n))
}

/// Analytic and exact observables for the tanh pulse family.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn compare_routes(
    scheme: &str,
    omega_ab: f64,
    omega_cb: f64,
    rabi_s: f64,
    rabi_p: f64,
    nu_s: f64,
    nu_p: f64,
    q: f64,
    tau_p: f64,
    n: usize,
) -> std::result::Result<String, JsError> {
    let d = Drive {
        omega_ab,
        omega_cb,
        rabi_s,
        rabi_p,
        nu_s,
        nu_p,
        q,
        tau_p,
    };
    js(comparison_json(scheme, d, n))
}

/// Self-consistent thin-medium run on `[0, t_end]`.
#[wasm_bindgen]
pub fn area_theorem(
    scheme: &str,
    omega_a_coll: f64,
    omega_c_coll: f64,
    seed_s: f64,
    seed_p: f64,
    t_end: f64,
    n: usize,
) -> std::result::Result<String, JsError> {
    js(theorem_json(
        scheme,
        omega_a_coll,
        omega_c_coll,
        seed_s,
        seed_p,
        t_end,
        n,
    ))
}
