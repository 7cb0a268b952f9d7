//! Dormand–Prince 5(4) with Hairer's continuous extension.
//!
//! Works on fixed-size real state vectors. Outputs are requested up front as a
//! monotone list of times (forward or backward) and filled from the dense
//! interpolant of whichever step covers them.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

// fifth-order minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[derive(Debug, Clone, Copy)]
pub(crate) struct Options {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub initial_step: f64,
    pub max_steps: usize,
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Stats {
    pub accepted: usize,
    pub rejected: usize,
}

/// Integrates `y' = f(t, y)` from `t0`, returning the state at each of `outputs`.
///
/// `outputs` must start at `t0` and be monotone in the direction of integration.
pub(crate) fn solve<const N: usize, F>(
    f: F,
    t0: f64,
    y0: [f64; N],
    outputs: &[f64],
    opts: &Options,
) -> Result<(Vec<[f64; N]>, Stats)>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut out = Vec::with_capacity(outputs.len());
    let mut stats = Stats::default();
    let Some(&t_end) = outputs.last() else {
        return Ok((out, stats));
    };
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };

    let mut next_out = 0;
    while next_out < outputs.len() && (outputs[next_out] - t0) * dir <= 0.0 {
        out.push(y0);
        next_out += 1;
    }
    if next_out == outputs.len() {
        return Ok((out, stats));
    }

    let mut t = t0;
    let mut y = y0;
    let mut k0 = f(t, &y);
    let mut h_abs = opts.initial_step.min(opts.max_step).min((t_end - t0).abs());
    let mut reject_streak = false;

    loop {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::MaxStepsExceeded {
                t,
                steps: opts.max_steps,
            });
        }
        let remaining = (t_end - t).abs();
        let last = h_abs >= remaining * (1.0 - 1e-12);
        if last {
            h_abs = remaining;
        }
        if h_abs <= 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepUnderflow { t, h: h_abs });
        }
        let h = dir * h_abs;

        let mut k = [[0.0; N]; 7];
        k[0] = k0;
        for s in 1..6 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            k[s] = f(t + C[s] * h, &ys);
        }
        let mut y_new = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            let a = A[6][j];
            if a != 0.0 {
                for i in 0..N {
                    y_new[i] += h * a * kj[i];
                }
            }
        }
        let t_new = if last { t_end } else { t + h };
        k[6] = f(t_new, &y_new);

        let mut err_sq = 0.0;
        for i in 0..N {
            let e: f64 = (0..7).map(|s| E[s] * k[s][i]).sum::<f64>() * h;
            let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / sc).powi(2);
        }
        let err = (err_sq / N as f64).sqrt();

        let scale = (0.9 * err.max(1e-20).powf(-0.2)).clamp(0.2, 5.0);
        if err <= 1.0 {
            stats.accepted += 1;

            // continuous extension coefficients
            let mut cont = [[0.0; N]; 5];
            for i in 0..N {
                let dy = y_new[i] - y[i];
                let bspl = h * k[0][i] - dy;
                cont[0][i] = y[i];
                cont[1][i] = dy;
                cont[2][i] = bspl;
                cont[3][i] = dy - h * k[6][i] - bspl;
                cont[4][i] = h * (0..7).map(|s| D[s] * k[s][i]).sum::<f64>();
            }
            while next_out < outputs.len() && (outputs[next_out] - t_new) * dir <= 0.0 {
                let theta = (outputs[next_out] - t) / h;
                let theta1 = 1.0 - theta;
                let mut yo = [0.0; N];
                for i in 0..N {
                    yo[i] = cont[0][i]
                        + theta
                            * (cont[1][i]
                                + theta1
                                    * (cont[2][i] + theta * (cont[3][i] + theta1 * cont[4][i])));
                }
                out.push(yo);
                next_out += 1;
            }

            t = t_new;
            y = y_new;
            k0 = k[6];
            if next_out == outputs.len() || last {
                break;
            }
            let grow = if reject_streak { scale.min(1.0) } else { scale };
            h_abs = (h_abs * grow).min(opts.max_step);
            reject_streak = false;
        } else {
            stats.rejected += 1;
            reject_streak = true;
            h_abs *= scale.min(1.0);
        }
    }
    // outputs that round past t_end land on the final state
    while out.len() < outputs.len() {
        out.push(y);
    }
    Ok((out, stats))
}
