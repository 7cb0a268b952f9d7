//! Minimal 3×3 complex matrix helpers.

use num_complex::Complex64;

pub type Mat3 = [[Complex64; 3]; 3];

pub fn zeros() -> Mat3 {
    [[Complex64::new(0.0, 0.0); 3]; 3]
}

pub fn mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = zeros();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn commutator(a: &Mat3, b: &Mat3) -> Mat3 {
    let ab = mul(a, b);
    let ba = mul(b, a);
    let mut out = zeros();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = ab[i][j] - ba[i][j];
        }
    }
    out
}

pub fn add_scaled(acc: &mut Mat3, m: &Mat3, w: f64) {
    for i in 0..3 {
        for j in 0..3 {
            acc[i][j] += m[i][j] * w;
        }
    }
}

pub fn apply(m: &Mat3, v: &[Complex64; 3]) -> [Complex64; 3] {
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (i, row) in m.iter().enumerate() {
        out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
    out
}

pub fn frobenius(m: &Mat3) -> f64 {
    m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn adjoint(m: &Mat3) -> Mat3 {
    let mut out = zeros();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = m[j][i].conj();
        }
    }
    out
}
