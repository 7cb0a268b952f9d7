//! Driving fields and complex pulse areas.
//!
//! A pulse is `Ω(t) = Ω_R Σ(t) cos(νt)` (real carrier) or the co-rotating half
//! `(Ω_R/2) Σ(t) e^{-iνt}`. Its complex area with respect to a transition at
//! frequency `ω` is `θ(t) = ∫ Ω(t') e^{iωt'} dt'`, accumulated from a chosen
//! start time before the pulse arrives.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;

/// Pulse envelope `Σ(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EnvelopeSpec {
    /// `tanh[10^q (t + τ_p)/τ_p] − tanh[10^q (t − τ_p)/τ_p]`: duration `2τ_p`,
    /// nearly Gaussian at `q = 0`, essentially square for `q ≥ 1`.
    TanhFamily { q: f64, tau_p: f64 },
    /// Linear interpolation of `(time, value)` samples, zero outside the table.
    Custom(Vec<(f64, f64)>),
}

impl EnvelopeSpec {
    pub fn tanh_family(q: f64, tau_p: f64) -> Result<Self> {
        if !q.is_finite() {
            return Err(Error::invalid("q", "must be finite"));
        }
        if !(tau_p > 0.0 && tau_p.is_finite()) {
            return Err(Error::invalid("tau_p", "must be positive"));
        }
        Ok(EnvelopeSpec::TanhFamily { q, tau_p })
    }

    pub fn custom(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("envelope", "sample table is empty"));
        }
        if samples
            .iter()
            .any(|(t, v)| !t.is_finite() || !v.is_finite())
        {
            return Err(Error::invalid("envelope", "samples must be finite"));
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::invalid(
                "envelope",
                "sample times must be strictly increasing",
            ));
        }
        Ok(EnvelopeSpec::Custom(samples))
    }

    /// A unit envelope switched on over `[t_on, t_off]`.
    pub fn window(t_on: f64, t_off: f64) -> Result<Self> {
        Self::custom(vec![(t_on, 1.0), (t_off, 1.0)])
    }

    /// `Σ(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            EnvelopeSpec::TanhFamily { q, tau_p } => {
                let k = 10f64.powf(*q) / tau_p;
                (k * (t + tau_p)).tanh() - (k * (t - tau_p)).tanh()
            }
            EnvelopeSpec::Custom(samples) => interpolate(samples, t),
        }
    }

    /// Half-width used for default time windows.
    pub fn half_width(&self) -> f64 {
        match self {
            EnvelopeSpec::TanhFamily { tau_p, .. } => *tau_p,
            EnvelopeSpec::Custom(samples) => {
                let first = samples[0].0;
                let last = samples[samples.len() - 1].0;
                first.abs().max(last.abs())
            }
        }
    }
}

fn interpolate(samples: &[(f64, f64)], t: f64) -> f64 {
    let (t0, v0) = samples[0];
    let (tn, vn) = samples[samples.len() - 1];
    if t < t0 || t > tn {
        return 0.0;
    }
    if t == tn {
        return vn;
    }
    if samples.len() == 1 {
        return v0;
    }
    let i = samples.partition_point(|&(ts, _)| ts <= t) - 1;
    let (ta, va) = samples[i];
    let (tb, vb) = samples[i + 1];
    va + (vb - va) * (t - ta) / (tb - ta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CarrierMode {
    /// `Ω_R Σ(t) cos(νt)`, both rotating and counter-rotating parts kept.
    RealCosine,
    /// `(Ω_R/2) Σ(t) e^{-iνt}`, only the co-rotating half of the cosine.
    RwaExponential,
}

/// One driving field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    pub peak_rabi: f64,
    pub carrier_freq: f64,
    pub envelope: EnvelopeSpec,
    pub carrier_mode: CarrierMode,
}

impl PulseSpec {
    pub fn new(
        peak_rabi: f64,
        carrier_freq: f64,
        envelope: EnvelopeSpec,
        carrier_mode: CarrierMode,
    ) -> Result<Self> {
        if !(peak_rabi >= 0.0 && peak_rabi.is_finite()) {
            return Err(Error::invalid("peak_rabi", "must be finite and >= 0"));
        }
        if !(carrier_freq >= 0.0 && carrier_freq.is_finite()) {
            return Err(Error::invalid("carrier_freq", "must be finite and >= 0"));
        }
        Ok(Self {
            peak_rabi,
            carrier_freq,
            envelope,
            carrier_mode,
        })
    }

    /// Real-carrier pulse with the tanh-family envelope.
    pub fn tanh_cosine(peak_rabi: f64, carrier_freq: f64, q: f64, tau_p: f64) -> Result<Self> {
        Self::new(
            peak_rabi,
            carrier_freq,
            EnvelopeSpec::tanh_family(q, tau_p)?,
            CarrierMode::RealCosine,
        )
    }

    pub fn zero() -> Self {
        Self {
            peak_rabi: 0.0,
            carrier_freq: 0.0,
            envelope: EnvelopeSpec::TanhFamily { q: 0.0, tau_p: 1.0 },
            carrier_mode: CarrierMode::RealCosine,
        }
    }

    /// Instantaneous field `Ω(t)`.
    pub fn field(&self, t: f64) -> Complex64 {
        let amp = self.peak_rabi * self.envelope.eval(t);
        match self.carrier_mode {
            CarrierMode::RealCosine => Complex64::new(amp * (self.carrier_freq * t).cos(), 0.0),
            CarrierMode::RwaExponential => Complex64::cis(-self.carrier_freq * t) * (0.5 * amp),
        }
    }

    /// Largest quadrature step that still resolves `e^{i(ω+ν)t}` with 20 points
    /// per period; unbounded for a switched-off pulse.
    pub fn max_grid_step(&self, transition_freq: f64) -> f64 {
        if self.peak_rabi == 0.0 {
            return f64::INFINITY;
        }
        phase_resolution_limit(self.carrier_freq + transition_freq)
    }
}

/// `2π / (20 · fastest)`, unbounded when nothing oscillates.
pub fn phase_resolution_limit(fastest: f64) -> f64 {
    if fastest > 0.0 {
        2.0 * PI / (20.0 * fastest)
    } else {
        f64::INFINITY
    }
}

/// Which pair of levels a field couples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Ground `b`, excited `a` and `c`; the s-field drives a–b, the p-field c–b.
    #[serde(alias = "v")]
    V,
    /// Ground `b`, lower `c`, excited `a`; the s-field drives a–b, the p-field a–c.
    #[serde(alias = "lambda", alias = "Λ")]
    Lambda,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub scheme: Scheme,
    pub omega_ab: f64,
    pub omega_cb: f64,
    /// Per-level decay rates `(γ_a, γ_b, γ_c)`.
    pub decay: Option<[f64; 3]>,
}

impl AtomSpec {
    pub fn new(scheme: Scheme, omega_ab: f64, omega_cb: f64) -> Result<Self> {
        let atom = Self {
            scheme,
            omega_ab,
            omega_cb,
            decay: None,
        };
        atom.validate()?;
        Ok(atom)
    }

    pub fn v(omega_ab: f64, omega_cb: f64) -> Result<Self> {
        Self::new(Scheme::V, omega_ab, omega_cb)
    }

    pub fn lambda(omega_ab: f64, omega_cb: f64) -> Result<Self> {
        Self::new(Scheme::Lambda, omega_ab, omega_cb)
    }

    pub fn with_decay(mut self, gamma_a: f64, gamma_b: f64, gamma_c: f64) -> Result<Self> {
        self.decay = Some([gamma_a, gamma_b, gamma_c]);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_ab > 0.0 && self.omega_ab.is_finite()) {
            return Err(Error::invalid("atom.omega_ab", "must be positive"));
        }
        if !(self.omega_cb > 0.0 && self.omega_cb.is_finite()) {
            return Err(Error::invalid("atom.omega_cb", "must be positive"));
        }
        if self.scheme == Scheme::Lambda && self.omega_ac() <= 0.0 {
            return Err(Error::invalid(
                "atom.omega_cb",
                "Lambda scheme needs omega_ab > omega_cb (level a above c above b)",
            ));
        }
        if let Some(rates) = self.decay {
            for (name, g) in ["gamma_a", "gamma_b", "gamma_c"].iter().zip(rates) {
                if !(g >= 0.0 && g.is_finite()) {
                    return Err(Error::invalid(format!("atom.{name}"), "must be >= 0"));
                }
            }
        }
        Ok(())
    }

    pub fn omega_ac(&self) -> f64 {
        self.omega_ab - self.omega_cb
    }

    /// Transition frequency seen by the s-field.
    pub fn s_transition(&self) -> f64 {
        self.omega_ab
    }

    /// Transition frequency seen by the p-field: `ω_cb` (V) or `ω_ac` (Λ).
    pub fn p_transition(&self) -> f64 {
        match self.scheme {
            Scheme::V => self.omega_cb,
            Scheme::Lambda => self.omega_ac(),
        }
    }
}

/// The s- and p-fields driving the atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulsePair {
    pub s: PulseSpec,
    pub p: PulseSpec,
}

impl PulsePair {
    pub fn new(s: PulseSpec, p: PulseSpec) -> Self {
        Self { s, p }
    }

    pub fn zero() -> Self {
        Self::new(PulseSpec::zero(), PulseSpec::zero())
    }

    /// Quadrature step resolving both channels' fastest phases.
    pub fn max_grid_step(&self, atom: &AtomSpec) -> f64 {
        self.s
            .max_grid_step(atom.s_transition())
            .min(self.p.max_grid_step(atom.p_transition()))
    }
}

/// The pair of complex pulse areas `(θ_s, θ_p)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexArea {
    pub theta_s: Complex64,
    pub theta_p: Complex64,
}

impl ComplexArea {
    pub fn new(theta_s: Complex64, theta_p: Complex64) -> Self {
        Self { theta_s, theta_p }
    }

    /// Effective area `θ = sqrt(|θ_s|² + |θ_p|²)`.
    pub fn effective(&self) -> f64 {
        effective_area(self.theta_s, self.theta_p)
    }
}

pub fn envelope_eval(env: &EnvelopeSpec, t: f64) -> f64 {
    env.eval(t)
}

pub fn field_eval(pulse: &PulseSpec, t: f64) -> Complex64 {
    pulse.field(t)
}

pub fn effective_area(theta_s: Complex64, theta_p: Complex64) -> f64 {
    theta_s.norm().hypot(theta_p.norm())
}

fn check_grid_step(pulse: &PulseSpec, transition_freq: f64, grid_step: f64) -> Result<()> {
    if !(grid_step > 0.0 && grid_step.is_finite()) {
        return Err(Error::invalid("grid_step", "must be positive and finite"));
    }
    let limit = pulse.max_grid_step(transition_freq);
    if grid_step > limit {
        return Err(Error::Aliasing {
            step: grid_step,
            limit,
        });
    }
    Ok(())
}

/// `θ(t) = ∫_{t_start}^{t} Ω(t') e^{iωt'} dt'` by composite Simpson on the grid
/// `t_start + k·grid_step`.
pub fn pulse_area(
    pulse: &PulseSpec,
    transition_freq: f64,
    t_start: f64,
    t: f64,
    grid_step: f64,
) -> Result<Complex64> {
    check_grid_step(pulse, transition_freq, grid_step)?;
    if t < t_start {
        return Err(Error::invalid("t", "must not precede t_start"));
    }
    let integrand = |x: f64| pulse.field(x) * Complex64::cis(transition_freq * x);
    Ok(quad::simpson_on_grid(&integrand, t_start, t, grid_step))
}

/// Areas at every point of an increasing time grid, accumulated from `times[0]`.
///
/// Each output interval is split into an even number of Simpson panels no
/// wider than `grid_step`.
pub fn cumulative_areas(
    pulse: &PulseSpec,
    transition_freq: f64,
    times: &[f64],
    grid_step: f64,
) -> Result<Vec<Complex64>> {
    check_grid_step(pulse, transition_freq, grid_step)?;
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("times", "must be strictly increasing"));
    }
    let integrand = |x: f64| pulse.field(x) * Complex64::cis(transition_freq * x);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(times.len());
    if times.is_empty() {
        return Ok(out);
    }
    out.push(acc);
    for w in times.windows(2) {
        let n = quad::even_subdivisions(w[1] - w[0], grid_step);
        acc += quad::simpson_even(&integrand, w[0], w[1], n);
        out.push(acc);
    }
    Ok(out)
}

/// Both channels' cumulative areas on one grid.
pub fn cumulative_area_pairs(
    atom: &AtomSpec,
    pulses: &PulsePair,
    times: &[f64],
    grid_step: f64,
) -> Result<Vec<ComplexArea>> {
    let s = cumulative_areas(&pulses.s, atom.s_transition(), times, grid_step)?;
    let p = cumulative_areas(&pulses.p, atom.p_transition(), times, grid_step)?;
    Ok(s.into_iter()
        .zip(p)
        .map(|(a, b)| ComplexArea::new(a, b))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn tanh_envelope_values() {
        let smooth = EnvelopeSpec::tanh_family(0.0, 10.0).unwrap();
        // 2·tanh(1) = 1.52318831191152977623...
        assert_abs_diff_eq!(smooth.eval(0.0), 1.523_188_311_911_529_8, epsilon = 1e-15);
        assert_abs_diff_eq!(smooth.eval(1e6), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(smooth.eval(-1e6), 0.0, epsilon = 1e-12);
        let square = EnvelopeSpec::tanh_family(1.0, 10.0).unwrap();
        assert_abs_diff_eq!(square.eval(0.0), 2.0, epsilon = 1e-8);
    }

    #[test]
    fn envelope_rejects_bad_parameters() {
        assert!(EnvelopeSpec::tanh_family(0.0, 0.0).is_err());
        assert!(EnvelopeSpec::tanh_family(0.0, -1.0).is_err());
        assert!(EnvelopeSpec::custom(vec![(0.0, 1.0), (0.0, 2.0)]).is_err());
        assert!(EnvelopeSpec::custom(vec![]).is_err());
    }

    #[test]
    fn custom_envelope_interpolates_and_vanishes_outside() {
        let env = EnvelopeSpec::custom(vec![(0.0, 0.0), (1.0, 2.0), (3.0, 0.0)]).unwrap();
        assert_eq!(env.eval(-0.1), 0.0);
        assert_eq!(env.eval(3.1), 0.0);
        assert_abs_diff_eq!(env.eval(0.5), 1.0);
        assert_abs_diff_eq!(env.eval(2.0), 1.0);
        assert_abs_diff_eq!(env.eval(3.0), 0.0);
        assert_abs_diff_eq!(env.eval(1.0), 2.0);
    }

    #[test]
    fn field_values() {
        let s = PulseSpec::tanh_cosine(0.6, 3.0, 0.0, 10.0).unwrap();
        let f = s.field(0.0);
        assert_abs_diff_eq!(f.re, 0.6 * 1.523_188_311_911_529_8, epsilon = 1e-14);
        assert_eq!(f.im, 0.0);

        let zero = PulseSpec::tanh_cosine(0.0, 3.0, 0.0, 10.0).unwrap();
        assert_eq!(zero.field(1.3), Complex64::new(0.0, 0.0));

        let rwa = PulseSpec::new(
            1.0,
            0.0,
            EnvelopeSpec::tanh_family(1.0, 10.0).unwrap(),
            CarrierMode::RwaExponential,
        )
        .unwrap();
        assert_abs_diff_eq!(rwa.field(0.0).re, 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(rwa.field(0.0).im, 0.0);
    }

    #[test]
    fn rwa_field_is_the_corotating_half() {
        let rwa = PulseSpec::new(
            2.0,
            5.0,
            EnvelopeSpec::window(-1.0, 1.0).unwrap(),
            CarrierMode::RwaExponential,
        )
        .unwrap();
        let t = 0.37;
        assert_abs_diff_eq!(
            (rwa.field(t) - Complex64::cis(-5.0 * t)).norm(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn pulse_rejects_negative_parameters() {
        let env = EnvelopeSpec::tanh_family(0.0, 1.0).unwrap();
        assert!(PulseSpec::new(-1.0, 1.0, env.clone(), CarrierMode::RealCosine).is_err());
        assert!(PulseSpec::new(1.0, -1.0, env, CarrierMode::RealCosine).is_err());
    }

    #[test]
    fn atom_validation() {
        assert!(AtomSpec::v(12.0, 10.0).is_ok());
        assert!(AtomSpec::v(0.0, 10.0).is_err());
        assert!(AtomSpec::lambda(10.0, 12.0).is_err());
        assert!(AtomSpec::lambda(12.0, 12.0).is_err());
        let l = AtomSpec::lambda(12.0, 10.0).unwrap();
        assert_eq!(l.p_transition(), 2.0);
        assert!(AtomSpec::v(12.0, 10.0)
            .unwrap()
            .with_decay(-1.0, 0.0, 0.0)
            .is_err());
    }

    #[test]
    fn effective_area_examples() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(effective_area(c(3.0, 0.0), c(4.0, 0.0)), 5.0);
        assert_eq!(effective_area(c(0.0, 0.0), c(0.0, 0.0)), 0.0);
        assert_abs_diff_eq!(effective_area(c(0.0, 1.0), c(1.0, 0.0)), 2f64.sqrt());
    }

    #[test]
    fn zero_field_has_zero_area() {
        let zero = PulseSpec::zero();
        let a = pulse_area(&zero, 12.0, -15.0, 15.0, 0.01).unwrap();
        assert_eq!(a, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn resonant_rwa_window_gives_half_rabi_times_duration() {
        let omega = 12.0;
        let pulse = PulseSpec::new(
            0.8,
            omega,
            EnvelopeSpec::window(-100.0, 100.0).unwrap(),
            CarrierMode::RwaExponential,
        )
        .unwrap();
        let step = pulse.max_grid_step(omega);
        for &t in &[0.5, 3.0, 7.25] {
            let a = pulse_area(&pulse, omega, 0.0, t, step).unwrap();
            assert_abs_diff_eq!(a.re, 0.8 * t / 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(a.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let s = PulseSpec::tanh_cosine(0.6, 3.0, 0.0, 10.0).unwrap();
        let limit = s.max_grid_step(12.0);
        assert_abs_diff_eq!(limit, 2.0 * PI / 300.0);
        assert!(matches!(
            pulse_area(&s, 12.0, -15.0, 15.0, limit * 1.01),
            Err(Error::Aliasing { .. })
        ));
        assert!(pulse_area(&s, 12.0, -15.0, 15.0, limit).is_ok());
        assert!(pulse_area(&s, 12.0, -15.0, 15.0, 0.0).is_err());
        assert!(pulse_area(&s, 12.0, 1.0, 0.0, 0.01).is_err());
    }

    #[test]
    fn cumulative_areas_match_direct_quadrature() {
        let s = PulseSpec::tanh_cosine(0.6, 3.0, 0.0, 10.0).unwrap();
        let times: Vec<f64> = (0..=30).map(|k| -15.0 + k as f64).collect();
        let cum = cumulative_areas(&s, 12.0, &times, 0.005).unwrap();
        let direct = pulse_area(&s, 12.0, -15.0, 15.0, 0.005).unwrap();
        assert_abs_diff_eq!((cum[30] - direct).norm(), 0.0, epsilon = 1e-12);
        assert_eq!(cum[0], Complex64::new(0.0, 0.0));
    }
}
