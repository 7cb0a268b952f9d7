//! Composite Simpson rules on uniform grids.

use num_complex::Complex64;

/// Number of equal subintervals of length at most `max_step`, rounded up to an even count.
pub(crate) fn even_subdivisions(len: f64, max_step: f64) -> usize {
    let n = (len / max_step).ceil().max(2.0) as usize;
    n + n % 2
}

/// Simpson's rule with `n` (even) equal subintervals on `[a, b]`.
pub(crate) fn simpson_even<F>(f: &F, a: f64, b: f64, n: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    debug_assert!(n >= 2 && n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut odd = Complex64::new(0.0, 0.0);
    let mut even = Complex64::new(0.0, 0.0);
    for k in 1..n {
        let v = f(a + k as f64 * h);
        if k % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    (f(a) + f(b) + odd * 4.0 + even * 2.0) * (h / 3.0)
}

/// Integral over `[a, b]` on the grid `a, a + h, a + 2h, ...`.
///
/// Full intervals use composite Simpson; an odd count closes with the 3/8 rule
/// on the last three intervals. A trailing partial interval shorter than `h`
/// gets its own single Simpson panel.
pub(crate) fn simpson_on_grid<F>(f: &F, a: f64, b: f64, h: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let len = b - a;
    if len <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let ratio = len / h;
    let mut n_full = ratio.floor() as usize;
    // treat a ratio within rounding of an integer as exact
    if ratio - (n_full as f64) > 1.0 - 1e-9 {
        n_full += 1;
    }
    let grid_end = (a + n_full as f64 * h).min(b);
    let mut total = Complex64::new(0.0, 0.0);
    match n_full {
        0 => {}
        1 => total += simpson_even(f, a, grid_end, 2),
        n if n % 2 == 0 => total += simpson_even(f, a, grid_end, n),
        n => {
            let split = a + (n - 3) as f64 * h;
            if n > 3 {
                total += simpson_even(f, a, split, n - 3);
            }
            total += simpson_three_eighths(f, split, grid_end);
        }
    }
    if b - grid_end > 1e-12 * h {
        total += simpson_even(f, grid_end, b, 2);
    }
    total
}

fn simpson_three_eighths<F>(f: &F, a: f64, b: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let h = (b - a) / 3.0;
    (f(a) + f(a + h) * 3.0 + f(a + 2.0 * h) * 3.0 + f(b)) * (3.0 * h / 8.0)
}
