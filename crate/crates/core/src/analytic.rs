//! First-order Magnus states for V and Λ atoms prepared in `|b⟩`.
//!
//! Truncating the Magnus series after `S⁽¹⁾ = -i∫H dt` gives
//! `|ψ⟩ = exp(S⁽¹⁾)|b⟩`, which depends on the fields only through the complex
//! areas `θ_s`, `θ_p` and the effective area `θ`. The resonant CW limit under
//! the rotating wave approximation (`θ = Ωt/2`) reproduces the textbook Rabi
//! solutions. [`magnus2_norm`] measures the first neglected term.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix;
use crate::propagator::hamiltonian;
use crate::pulses::{effective_area, AtomSpec, PulsePair, Scheme};
use crate::quad;

/// Below this effective area the trigonometric ratios switch to their series.
pub const SMALL_AREA: f64 = 1e-4;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Amplitudes `(ψ_a, ψ_b, ψ_c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

impl StateVector {
    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Self {
        Self { a, b, c }
    }

    pub fn ground() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self::new(z, Complex64::new(1.0, 0.0), z)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr()
    }

    pub fn to_array(self) -> [Complex64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn from_array(v: [Complex64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    /// Largest componentwise modulus of `self - other`.
    pub fn max_diff(&self, other: &StateVector) -> f64 {
        (self.a - other.a)
            .norm()
            .max((self.b - other.b).norm())
            .max((self.c - other.c).norm())
    }
}

/// Pure-state density matrix entries plotted against time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityObservables {
    pub rho_aa: f64,
    pub rho_bb: f64,
    pub rho_cc: f64,
    pub rho_ab: Complex64,
    pub rho_cb: Complex64,
    pub rho_ac: Complex64,
}

/// `ρ = |ψ⟩⟨ψ|`.
pub fn density_from_state(psi: &StateVector) -> DensityObservables {
    DensityObservables {
        rho_aa: psi.a.norm_sqr(),
        rho_bb: psi.b.norm_sqr(),
        rho_cc: psi.c.norm_sqr(),
        rho_ab: psi.a * psi.b.conj(),
        rho_cb: psi.c * psi.b.conj(),
        rho_ac: psi.a * psi.c.conj(),
    }
}

/// `sin θ / θ`.
pub(crate) fn sinc(theta: f64) -> f64 {
    if theta < SMALL_AREA {
        let t2 = theta * theta;
        1.0 - t2 / 6.0 + t2 * t2 / 120.0
    } else {
        theta.sin() / theta
    }
}

/// `(cos θ − 1) / θ²`, written as `-½ sinc²(θ/2)` so it never cancels.
pub(crate) fn cos_m1_over_sq(theta: f64) -> f64 {
    if theta < SMALL_AREA {
        let t2 = theta * theta;
        -0.5 + t2 / 24.0 - t2 * t2 / 720.0
    } else {
        let s = sinc(0.5 * theta);
        -0.5 * s * s
    }
}

/// V-scheme state: `ψ = (iθ_s sinθ/θ, cos θ, iθ_p sinθ/θ)`.
pub fn state_v(theta_s: Complex64, theta_p: Complex64) -> StateVector {
    let theta = effective_area(theta_s, theta_p);
    let k = sinc(theta);
    StateVector::new(
        I * theta_s * k,
        Complex64::new(theta.cos(), 0.0),
        I * theta_p * k,
    )
}

/// Λ-scheme state:
/// `ψ = (iθ_s sinθ/θ, (|θ_p|² + |θ_s|² cos θ)/θ², θ_s θ_p* (cos θ − 1)/θ²)`.
pub fn state_lambda(theta_s: Complex64, theta_p: Complex64) -> StateVector {
    let theta = effective_area(theta_s, theta_p);
    let g = cos_m1_over_sq(theta);
    // (|θp|² + |θs|² cos θ)/θ² = 1 + |θs|² (cos θ − 1)/θ²
    let b = 1.0 + theta_s.norm_sqr() * g;
    StateVector::new(
        I * theta_s * sinc(theta),
        Complex64::new(b, 0.0),
        theta_s * theta_p.conj() * g,
    )
}

pub fn state_for(scheme: Scheme, theta_s: Complex64, theta_p: Complex64) -> StateVector {
    match scheme {
        Scheme::V => state_v(theta_s, theta_p),
        Scheme::Lambda => state_lambda(theta_s, theta_p),
    }
}

/// Resonant CW drive under the RWA, V scheme, with `Ω = sqrt(Ω_s² + Ω_p²)`.
pub fn rwa_state_v(omega_s: f64, omega_p: f64, t: f64) -> StateVector {
    let rabi = omega_s.hypot(omega_p);
    let half = 0.5 * rabi * t;
    // Ω_x/Ω · sin(Ωt/2) = (Ω_x t/2) · sin(Ωt/2)/(Ωt/2)
    let k = 0.5 * t * sinc(half);
    StateVector::new(
        I * (omega_s * k),
        Complex64::new(half.cos(), 0.0),
        I * (omega_p * k),
    )
}

/// Resonant CW drive under the RWA, Λ scheme.
pub fn rwa_state_lambda(omega_s: f64, omega_p: f64, t: f64) -> StateVector {
    let rabi = omega_s.hypot(omega_p);
    let half = 0.5 * rabi * t;
    // (cos(Ωt/2) − 1)/Ω² = (t²/4) · (cos x − 1)/x² with x = Ωt/2
    let g = 0.25 * t * t * cos_m1_over_sq(half);
    StateVector::new(
        I * (omega_s * 0.5 * t * sinc(half)),
        Complex64::new(1.0 + omega_s * omega_s * g, 0.0),
        Complex64::new(omega_s * omega_p * g, 0.0),
    )
}

/// Frobenius norm of the second Magnus term
/// `S⁽²⁾(t) = -½ ∫∫_{t₂<t₁} [H(t₁), H(t₂)] dt₂ dt₁` (`H` in units of ħ).
///
/// Uses `∫_{t₀}^{t₁} H(t₂) dt₂` accumulated panel by panel, then an outer
/// Simpson sum of `[H(t₁), K(t₁)]` on the same nodes.
pub fn magnus2_norm(
    pulses: &PulsePair,
    atom: &AtomSpec,
    t_start: f64,
    t: f64,
    grid_step: f64,
) -> Result<f64> {
    if !(grid_step > 0.0 && grid_step.is_finite()) {
        return Err(Error::invalid("grid_step", "must be positive and finite"));
    }
    let limit = pulses.max_grid_step(atom);
    if grid_step > limit {
        return Err(Error::Aliasing {
            step: grid_step,
            limit,
        });
    }
    if t < t_start {
        return Err(Error::invalid("t", "must not precede t_start"));
    }
    if t == t_start {
        return Ok(0.0);
    }
    let n = quad::even_subdivisions(t - t_start, grid_step);
    let h = (t - t_start) / n as f64;

    let mut k_acc = matrix::zeros();
    let mut h_node = hamiltonian(atom, pulses, t_start);
    let mut integrand = Vec::with_capacity(n + 1);
    integrand.push(matrix::zeros());
    for j in 0..n {
        let t0 = t_start + j as f64 * h;
        let h_mid = hamiltonian(atom, pulses, t0 + 0.5 * h);
        let h_next = hamiltonian(atom, pulses, t0 + h);
        matrix::add_scaled(&mut k_acc, &h_node, h / 6.0);
        matrix::add_scaled(&mut k_acc, &h_mid, 4.0 * h / 6.0);
        matrix::add_scaled(&mut k_acc, &h_next, h / 6.0);
        integrand.push(matrix::commutator(&h_next, &k_acc));
        h_node = h_next;
    }

    let mut s2 = matrix::zeros();
    for (j, g) in integrand.iter().enumerate() {
        let w = if j == 0 || j == n {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        };
        matrix::add_scaled(&mut s2, g, -0.5 * w * h / 3.0);
    }
    Ok(matrix::frobenius(&s2))
}
