//! Scenario documents.
//!
//! A scenario is a TOML file with the sections `atom`, `pulse_s`, `pulse_p`,
//! and optionally `time`, `integrator`, and `medium`. Unknown keys are
//! rejected. Defaults:
//!
//! | key | default |
//! |---|---|
//! | `atom.gamma_a/b/c` | no decay |
//! | `pulse_*.carrier_mode` | `"real_cosine"` |
//! | `time.t_start` | `-1.5 · max(tau_p)` |
//! | `time.t_end` | `+1.5 · max(tau_p)` |
//! | `time.n_outputs` | 2000 |
//! | `integrator.rel_tol`, `abs_tol` | `1e-10` |
//! | `medium.seed_dtheta_s` | 0.1 |
//! | `medium.seed_dtheta_p` | 0.0 |
//!
//! The medium is given either as `omega_a_coll`/`omega_c_coll` or as
//! `density`, `lambda_ab`, `lambda_cb`, `gamma`, `light_speed`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagator::IntegratorConfig;
use crate::pulses::{AtomSpec, CarrierMode, EnvelopeSpec, PulsePair, PulseSpec, Scheme};
use crate::theorem::{FieldState, MediumSpec};

pub const DEFAULT_N_OUTPUTS: usize = 2000;
pub const DEFAULT_WINDOW: f64 = 1.5;
pub const DEFAULT_SEED: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Analytic,
    Numeric,
    Both,
    Theorem,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Mode::Analytic),
            "numeric" => Ok(Mode::Numeric),
            "both" => Ok(Mode::Both),
            "theorem" => Ok(Mode::Theorem),
            other => Err(Error::invalid("mode", format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub atom: AtomSpec,
    pub pulses: PulsePair,
    pub t_start: f64,
    pub t_end: f64,
    pub n_outputs: usize,
    pub integrator: IntegratorConfig,
    pub mode: Mode,
    pub medium: Option<MediumSpec>,
    /// Initial field edge for self-consistent runs.
    pub seed: FieldState,
}

impl Scenario {
    pub fn with_mode(mut self, mode: Mode) -> Result<Self> {
        if mode == Mode::Theorem && self.medium.is_none() {
            return Err(Error::invalid(
                "medium",
                "theorem mode requires a [medium] section",
            ));
        }
        self.mode = mode;
        Ok(self)
    }

    /// The fully resolved document, every default written out.
    pub fn to_document(&self) -> Result<ScenarioDocument> {
        let pulse = |p: &PulseSpec, name: &str| -> Result<PulseSection> {
            let EnvelopeSpec::TanhFamily { q, tau_p } = p.envelope else {
                return Err(Error::invalid(
                    format!("{name}.envelope"),
                    "only tanh-family envelopes have a document form",
                ));
            };
            Ok(PulseSection {
                peak_rabi: Some(p.peak_rabi),
                carrier_freq: Some(p.carrier_freq),
                q: Some(q),
                tau_p: Some(tau_p),
                carrier_mode: Some(p.carrier_mode),
            })
        };
        let decay = self.atom.decay;
        Ok(ScenarioDocument {
            atom: Some(AtomSection {
                scheme: Some(self.atom.scheme),
                omega_ab: Some(self.atom.omega_ab),
                omega_cb: Some(self.atom.omega_cb),
                gamma_a: decay.map(|d| d[0]),
                gamma_b: decay.map(|d| d[1]),
                gamma_c: decay.map(|d| d[2]),
            }),
            pulse_s: Some(pulse(&self.pulses.s, "pulse_s")?),
            pulse_p: Some(pulse(&self.pulses.p, "pulse_p")?),
            time: Some(TimeSection {
                t_start: Some(self.t_start),
                t_end: Some(self.t_end),
                n_outputs: Some(self.n_outputs),
            }),
            integrator: Some(IntegratorSection {
                rel_tol: Some(self.integrator.rel_tol),
                abs_tol: Some(self.integrator.abs_tol),
            }),
            medium: self.medium.map(|m| MediumSection {
                omega_a_coll: Some(m.omega_a_coll),
                omega_c_coll: Some(m.omega_c_coll),
                seed_dtheta_s: Some(self.seed.dtheta_s.re),
                seed_dtheta_p: Some(self.seed.dtheta_p.re),
                ..MediumSection::default()
            }),
        })
    }

    /// Small parameters `Ω_R / |ω − ν|` for the s and p channels.
    pub fn small_parameters(&self) -> [f64; 2] {
        let ratio = |rabi: f64, omega: f64, nu: f64| rabi / (omega - nu).abs();
        [
            ratio(
                self.pulses.s.peak_rabi,
                self.atom.s_transition(),
                self.pulses.s.carrier_freq,
            ),
            ratio(
                self.pulses.p.peak_rabi,
                self.atom.p_transition(),
                self.pulses.p.carrier_freq,
            ),
        ]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atom: Option<AtomSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pulse_s: Option<PulseSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pulse_p: Option<PulseSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<TimeSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integrator: Option<IntegratorSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub medium: Option<MediumSection>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<Scheme>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_ab: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_cb: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_c: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peak_rabi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub carrier_freq: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub carrier_mode: Option<CarrierMode>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_start: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_outputs: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_a_coll: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_c_coll: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_ab: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_cb: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub light_speed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_dtheta_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_dtheta_p: Option<f64>,
}

fn required<T: Copy>(value: Option<T>, field: &str) -> Result<T> {
    value.ok_or_else(|| Error::invalid(field, "missing required field"))
}

fn section<'a, T>(value: &'a Option<T>, name: &str) -> Result<&'a T> {
    value
        .as_ref()
        .ok_or_else(|| Error::invalid(name, "missing required section"))
}

/// Parses and validates a scenario document. The mode defaults to [`Mode::Both`].
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let doc: ScenarioDocument = toml::from_str(text).map_err(|e| {
        let line = e
            .span()
            .map(|span| text[..span.start.min(text.len())].matches('\n').count() + 1);
        Error::Parse {
            message: e.message().trim().to_string(),
            line,
        }
    })?;
    from_document(&doc)
}

pub fn from_document(doc: &ScenarioDocument) -> Result<Scenario> {
    let atom_doc = section(&doc.atom, "atom")?;
    let scheme = required(atom_doc.scheme, "atom.scheme")?;
    let mut atom = AtomSpec {
        scheme,
        omega_ab: required(atom_doc.omega_ab, "atom.omega_ab")?,
        omega_cb: required(atom_doc.omega_cb, "atom.omega_cb")?,
        decay: None,
    };
    let gammas = [atom_doc.gamma_a, atom_doc.gamma_b, atom_doc.gamma_c];
    if gammas.iter().any(Option::is_some) {
        atom.decay = Some(gammas.map(|g| g.unwrap_or(0.0)));
    }
    atom.validate()?;

    let pulse = |name: &str, p: &Option<PulseSection>| -> Result<PulseSpec> {
        let p = section(p, name)?;
        let field = |key: &str| format!("{name}.{key}");
        let envelope = EnvelopeSpec::tanh_family(
            required(p.q, &field("q"))?,
            required(p.tau_p, &field("tau_p"))?,
        )
        .map_err(|e| prefix(e, name))?;
        PulseSpec::new(
            required(p.peak_rabi, &field("peak_rabi"))?,
            required(p.carrier_freq, &field("carrier_freq"))?,
            envelope,
            p.carrier_mode.unwrap_or(CarrierMode::RealCosine),
        )
        .map_err(|e| prefix(e, name))
    };
    let pulses = PulsePair::new(
        pulse("pulse_s", &doc.pulse_s)?,
        pulse("pulse_p", &doc.pulse_p)?,
    );

    let half = pulses
        .s
        .envelope
        .half_width()
        .max(pulses.p.envelope.half_width());
    let time = doc.time.clone().unwrap_or_default();
    let t_start = time.t_start.unwrap_or(-DEFAULT_WINDOW * half);
    let t_end = time.t_end.unwrap_or(DEFAULT_WINDOW * half);
    let n_outputs = time.n_outputs.unwrap_or(DEFAULT_N_OUTPUTS);
    if !(t_start.is_finite() && t_end.is_finite()) {
        return Err(Error::invalid("time", "bounds must be finite"));
    }
    if t_end <= t_start {
        return Err(Error::invalid("time.t_end", "must exceed time.t_start"));
    }
    if n_outputs < 2 {
        return Err(Error::invalid("time.n_outputs", "must be at least 2"));
    }

    let integ = doc.integrator.clone().unwrap_or_default();
    let defaults = IntegratorConfig::default();
    let integrator = IntegratorConfig {
        rel_tol: integ.rel_tol.unwrap_or(defaults.rel_tol),
        abs_tol: integ.abs_tol.unwrap_or(defaults.abs_tol),
        ..defaults
    };
    for (name, v) in [
        ("integrator.rel_tol", integrator.rel_tol),
        ("integrator.abs_tol", integrator.abs_tol),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::invalid(name, "must be positive"));
        }
    }

    let (medium, seed) = match &doc.medium {
        None => (
            None,
            FieldState::seeded(Complex64::new(DEFAULT_SEED, 0.0), Complex64::new(0.0, 0.0)),
        ),
        Some(m) => {
            let spec = match (m.omega_a_coll, m.omega_c_coll) {
                (Some(a), Some(c)) => MediumSpec::new(a, c)?,
                (None, None) => MediumSpec::from_atomic(
                    required(m.density, "medium.density")?,
                    required(m.lambda_ab, "medium.lambda_ab")?,
                    required(m.lambda_cb, "medium.lambda_cb")?,
                    required(m.gamma, "medium.gamma")?,
                    required(m.light_speed, "medium.light_speed")?,
                )
                .map_err(|e| prefix(e, "medium"))?,
                (None, Some(_)) => {
                    return Err(Error::invalid(
                        "medium.omega_a_coll",
                        "missing required field",
                    ))
                }
                (Some(_), None) => {
                    return Err(Error::invalid(
                        "medium.omega_c_coll",
                        "missing required field",
                    ))
                }
            };
            let seed = FieldState::seeded(
                Complex64::new(m.seed_dtheta_s.unwrap_or(DEFAULT_SEED), 0.0),
                Complex64::new(m.seed_dtheta_p.unwrap_or(0.0), 0.0),
            );
            (Some(spec), seed)
        }
    };

    Ok(Scenario {
        atom,
        pulses,
        t_start,
        t_end,
        n_outputs,
        integrator,
        mode: Mode::Both,
        medium,
        seed,
    })
}

fn prefix(err: Error, section: &str) -> Error {
    match err {
        Error::InvalidParameter { field, reason } if !field.contains('.') => {
            Error::InvalidParameter {
                field: format!("{section}.{field}"),
                reason,
            }
        }
        other => other,
    }
}

/// Sets numeric leaves of the resolved document. `axis` is a dotted path such
/// as `pulse_s.peak_rabi`; several paths joined by `+` move together.
pub fn with_leaf(base: &Scenario, axis: &str, value: f64) -> Result<Scenario> {
    let doc = base.to_document()?;
    let mut tree =
        toml::Table::try_from(&doc).map_err(|e| Error::invalid("scenario", e.to_string()))?;
    for path in axis.split('+').map(str::trim) {
        let (sec, key) = path
            .split_once('.')
            .ok_or_else(|| Error::invalid("axis", format!("`{path}` is not section.key")))?;
        let table = tree
            .get_mut(sec)
            .and_then(toml::Value::as_table_mut)
            .ok_or_else(|| Error::invalid("axis", format!("no section `{sec}`")))?;
        let leaf = table
            .get_mut(key)
            .ok_or_else(|| Error::invalid("axis", format!("no numeric field `{path}`")))?;
        *leaf = match leaf {
            toml::Value::Float(_) => toml::Value::Float(value),
            toml::Value::Integer(_) if value.fract() == 0.0 => toml::Value::Integer(value as i64),
            toml::Value::Integer(_) => {
                return Err(Error::invalid("axis", format!("`{path}` takes integers")))
            }
            _ => return Err(Error::invalid("axis", format!("`{path}` is not numeric"))),
        };
    }
    let doc: ScenarioDocument = tree
        .try_into()
        .map_err(|e: toml::de::Error| Error::invalid("scenario", e.to_string()))?;
    let mut s = from_document(&doc)?;
    s.mode = base.mode;
    s.integrator = IntegratorConfig {
        rel_tol: s.integrator.rel_tol,
        abs_tol: s.integrator.abs_tol,
        ..base.integrator
    };
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG2: &str = include_str!("../../scenarios/fig2.scenario");
    const FIG3: &str = include_str!("../../scenarios/fig3.scenario");

    #[test]
    fn bundled_fig2() {
        let s = parse_scenario(FIG2).unwrap();
        assert_eq!(s.atom.scheme, Scheme::V);
        assert_eq!((s.atom.omega_ab, s.atom.omega_cb), (12.0, 10.0));
        assert_eq!((s.pulses.s.carrier_freq, s.pulses.s.peak_rabi), (3.0, 0.6));
        assert_eq!((s.pulses.p.carrier_freq, s.pulses.p.peak_rabi), (2.0, 0.5));
        for p in [&s.pulses.s, &s.pulses.p] {
            assert_eq!(
                p.envelope,
                EnvelopeSpec::TanhFamily {
                    q: 0.0,
                    tau_p: 10.0
                }
            );
            assert_eq!(p.carrier_mode, CarrierMode::RealCosine);
        }
        assert_eq!((s.t_start, s.t_end, s.n_outputs), (-15.0, 15.0, 2000));
        assert_eq!(s.mode, Mode::Both);
    }

    #[test]
    fn bundled_fig3_differs_only_in_q() {
        let s2 = parse_scenario(FIG2).unwrap();
        let s3 = parse_scenario(FIG3).unwrap();
        for p in [&s3.pulses.s, &s3.pulses.p] {
            assert_eq!(
                p.envelope,
                EnvelopeSpec::TanhFamily {
                    q: 1.0,
                    tau_p: 10.0
                }
            );
        }
        let mut s3_as_2 = s3.clone();
        s3_as_2.pulses.s.envelope = s2.pulses.s.envelope.clone();
        s3_as_2.pulses.p.envelope = s2.pulses.p.envelope.clone();
        assert_eq!(s3_as_2, s2);
    }

    #[test]
    fn missing_field_is_named() {
        let text = FIG2.replace("omega_ab = 12.0\n", "");
        let err = parse_scenario(&text).unwrap_err();
        assert!(
            matches!(&err, Error::InvalidParameter { field, .. } if field == "atom.omega_ab"),
            "{err}"
        );
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn unknown_key_is_a_parse_error_with_line() {
        let text = FIG2.replace("omega_cb = 10.0", "omega_cb = 10.0\nomega_xy = 3.0");
        let err = parse_scenario(&text).unwrap_err();
        match err {
            Error::Parse { message, line } => {
                assert!(message.contains("omega_xy"), "{message}");
                assert!(line.is_some());
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn invariant_violations_name_the_field() {
        let text = FIG2.replace("tau_p = 10.0", "tau_p = -1.0");
        let err = parse_scenario(&text).unwrap_err();
        assert!(
            matches!(&err, Error::InvalidParameter { field, .. } if field.ends_with(".tau_p")),
            "{err}"
        );

        let text = FIG2
            .replace("scheme = \"V\"", "scheme = \"Lambda\"")
            .replace("omega_cb = 10.0", "omega_cb = 13.0");
        assert!(parse_scenario(&text).is_err());
    }

    #[test]
    fn theorem_mode_requires_medium() {
        let s = parse_scenario(FIG2).unwrap();
        assert!(s.clone().with_mode(Mode::Theorem).is_err());
        let text = format!("{FIG2}\n[medium]\nomega_a_coll = 1.0\nomega_c_coll = 1.0\n");
        let s = parse_scenario(&text)
            .unwrap()
            .with_mode(Mode::Theorem)
            .unwrap();
        assert_eq!(s.medium.unwrap().omega_a_coll, 1.0);
        assert_eq!(s.seed.dtheta_s.re, DEFAULT_SEED);
    }

    #[test]
    fn integer_literals_are_accepted() {
        let text = FIG2.replace("omega_ab = 12.0", "omega_ab = 12");
        assert_eq!(parse_scenario(&text).unwrap().atom.omega_ab, 12.0);
    }

    #[test]
    fn document_round_trip_echoes_defaults() {
        let s = parse_scenario(FIG2).unwrap();
        let doc = s.to_document().unwrap();
        let text = toml::to_string(&doc).unwrap();
        assert!(text.contains("n_outputs = 2000"));
        assert_eq!(parse_scenario(&text).unwrap(), s);
    }

    #[test]
    fn leaf_update() {
        let s = parse_scenario(FIG2).unwrap();
        let t = with_leaf(&s, "pulse_s.q + pulse_p.q", 1.0).unwrap();
        assert_eq!(t, parse_scenario(FIG3).unwrap());
        let t = with_leaf(&s, "atom.omega_ab", 21.0).unwrap();
        assert_eq!(t.atom.omega_ab, 21.0);
        assert!(with_leaf(&s, "atom.scheme", 1.0).is_err());
        assert!(with_leaf(&s, "atom.nothing", 1.0).is_err());
        assert!(with_leaf(&s, "time.n_outputs", 10.5).is_err());
        assert_eq!(with_leaf(&s, "time.n_outputs", 10.0).unwrap().n_outputs, 10);
    }

    #[test]
    fn small_parameters_per_channel() {
        let s = parse_scenario(FIG2).unwrap();
        let [ps, pp] = s.small_parameters();
        assert!((ps - 0.6 / 9.0).abs() < 1e-15);
        assert!((pp - 0.5 / 8.0).abs() < 1e-15);
    }
}
