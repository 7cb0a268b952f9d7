use num_complex::Complex64;
use proptest::prelude::*;

use trilevel::pulses::{cumulative_areas, phase_resolution_limit};
use trilevel::{pulse_area, AtomSpec, CarrierMode, EnvelopeSpec, Error, PulseSpec};

fn fig2_pulses() -> [(PulseSpec, f64); 2] {
    [
        (PulseSpec::tanh_cosine(0.6, 3.0, 0.0, 10.0).unwrap(), 12.0),
        (PulseSpec::tanh_cosine(0.5, 2.0, 0.0, 10.0).unwrap(), 10.0),
    ]
}

// mpmath adaptive quadrature at 30 digits, see scripts/oracle.py
const ORACLE_AREAS: [[(f64, Complex64); 3]; 2] = [
    [
        (
            -5.0,
            Complex64::new(-0.035955570385500716, -0.06293865333747727),
        ),
        (
            0.0,
            Complex64::new(-0.007968217765024037, -0.09487161152004447),
        ),
        (15.0, Complex64::new(-0.015936435530048074, 0.0)),
    ],
    [
        (
            -5.0,
            Complex64::new(-0.022817003096680633, 0.06235611652119365),
        ),
        (
            0.0,
            Complex64::new(0.0005984388075037604, -0.07247078258898726),
        ),
        (15.0, Complex64::new(0.0011968776150075208, 0.0)),
    ],
];

#[test]
fn areas_match_adaptive_quadrature() {
    for ((pulse, omega), oracle) in fig2_pulses().iter().zip(ORACLE_AREAS) {
        let h = pulse.max_grid_step(*omega);
        for (t, expected) in oracle {
            let coarse = pulse_area(pulse, *omega, -15.0, t, h).unwrap();
            let fine = pulse_area(pulse, *omega, -15.0, t, h / 16.0).unwrap();
            assert!(
                (coarse - expected).norm() < 5e-6,
                "t = {t}: {coarse} vs {expected}"
            );
            assert!(
                (fine - expected).norm() < 1e-10,
                "t = {t}: {fine} vs {expected}"
            );
        }
    }
}

#[test]
fn cumulative_areas_agree_with_single_integrals() {
    let (pulse, omega) = &fig2_pulses()[0];
    let times: Vec<f64> = (0..=300).map(|k| -15.0 + 0.1 * k as f64).collect();
    let h = pulse.max_grid_step(*omega) / 8.0;
    let acc = cumulative_areas(pulse, *omega, &times, h).unwrap();
    for k in [0, 37, 150, 300] {
        let direct = pulse_area(pulse, *omega, -15.0, times[k], h).unwrap();
        assert!(
            (acc[k] - direct).norm() < 2e-9,
            "{}",
            (acc[k] - direct).norm()
        );
    }
}

#[test]
fn square_pulse_converges_too() {
    let pulse = PulseSpec::tanh_cosine(0.6, 3.0, 1.0, 10.0).unwrap();
    let h = pulse.max_grid_step(12.0);
    let oracle = pulse_area(&pulse, 12.0, -15.0, 7.3, h / 20.0).unwrap();
    let coarse = (pulse_area(&pulse, 12.0, -15.0, 7.3, h).unwrap() - oracle).norm();
    let fine = (pulse_area(&pulse, 12.0, -15.0, 7.3, h / 2.0).unwrap() - oracle).norm();
    assert!(coarse / fine >= 8.0, "ratio {}", coarse / fine);
}

#[test]
fn coarse_steps_are_rejected() {
    let (pulse, omega) = &fig2_pulses()[0];
    let limit = phase_resolution_limit(15.0);
    assert!(matches!(
        pulse_area(pulse, *omega, -15.0, 0.0, 1.01 * limit),
        Err(Error::Aliasing { .. })
    ));
    assert!(pulse_area(pulse, *omega, -15.0, 0.0, limit).is_ok());
}

#[test]
fn switched_off_pulse_has_no_step_limit() {
    assert_eq!(PulseSpec::zero().max_grid_step(12.0), f64::INFINITY);
    let atom = AtomSpec::v(12.0, 10.0).unwrap();
    assert_eq!(
        trilevel::PulsePair::zero().max_grid_step(&atom),
        f64::INFINITY
    );
}

#[test]
fn custom_envelope_interpolates() {
    let env = EnvelopeSpec::custom(vec![(0.0, 0.0), (1.0, 2.0), (3.0, 0.0)]).unwrap();
    assert_eq!(env.eval(-0.5), 0.0);
    assert_eq!(env.eval(0.5), 1.0);
    assert_eq!(env.eval(2.0), 1.0);
    assert_eq!(env.eval(3.5), 0.0);
    assert!(EnvelopeSpec::custom(vec![(1.0, 0.0), (0.0, 1.0)]).is_err());
}

proptest! {
    #[test]
    fn envelope_is_even_and_bounded(q in -1.0..2.0f64, tau in 0.5..20.0f64, t in -60.0..60.0f64) {
        let env = EnvelopeSpec::tanh_family(q, tau).unwrap();
        let v = env.eval(t);
        prop_assert!((0.0..=2.0).contains(&v));
        prop_assert!((v - env.eval(-t)).abs() < 1e-15);
    }

    #[test]
    fn resonant_window_area_grows_linearly(rabi in 0.01..2.0f64, omega in 1.0..20.0f64, t in 0.0..30.0f64) {
        let pulse = PulseSpec::new(
            rabi,
            omega,
            EnvelopeSpec::window(-1.0, 40.0).unwrap(),
            CarrierMode::RwaExponential,
        )
        .unwrap();
        let area = pulse_area(&pulse, omega, 0.0, t, pulse.max_grid_step(omega)).unwrap();
        prop_assert!((area - Complex64::new(0.5 * rabi * t, 0.0)).norm() < 1e-12 * (1.0 + t));
    }

    #[test]
    fn symmetric_window_area_is_real(
        nu in 0.5..5.0f64,
        omega in 5.0..20.0f64,
        q in 0.0..1.0f64,
        tau in 2.0..10.0f64,
    ) {
        let pulse = PulseSpec::tanh_cosine(0.5, nu, q, tau).unwrap();
        let h = pulse.max_grid_step(omega) / 8.0;
        let t = 1.5 * tau;
        let area = pulse_area(&pulse, omega, -t, t, h).unwrap();
        prop_assert!(area.im.abs() < 1e-9, "{area}");
    }

    #[test]
    fn areas_move_continuously(t in -15.0..14.9f64, dt in 0.0..0.1f64) {
        let (pulse, omega) = &fig2_pulses()[0];
        let h = pulse.max_grid_step(*omega);
        let a = pulse_area(pulse, *omega, -15.0, t, h).unwrap();
        let b = pulse_area(pulse, *omega, -15.0, t + dt, h).unwrap();
        // |dθ/dt| ≤ peak Rabi · max Σ
        prop_assert!((b - a).norm() <= 2.0 * 0.6 * dt + 1e-9);
    }
}
