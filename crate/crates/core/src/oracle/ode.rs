//! Adaptive Dormand-Prince 5(4) integrator for real state vectors.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    /// Largest scaled error norm among accepted steps.
    pub max_error: f64,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
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
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const MAX_STEPS: usize = 10_000_000;

/// Integrate `y' = f(t, y)` from `t0` to `t1` in place.
pub fn integrate<F>(
    mut f: F,
    t0: f64,
    t1: f64,
    y: &mut [f64],
    tol: Tolerance,
) -> Result<IntegrationStats>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = y.len();
    let mut stats = IntegrationStats::default();
    if t1 <= t0 {
        return Ok(stats);
    }
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut y5 = vec![0.0; n];
    let mut t = t0;
    f(t, y, &mut k[0]);
    let mut h = initial_step(y, &k[0], t1 - t0, tol);
    while t < t1 {
        if stats.accepted + stats.rejected > MAX_STEPS {
            return Err(Error::Integration(format!("step limit reached at t = {t}")));
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        for s in 1..7 {
            for i in 0..n {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += A[s][j] * kj[i];
                }
                tmp[i] = y[i] + h * acc;
            }
            f(t + C[s] * h, &tmp, &mut k[s]);
            if s == 6 {
                y5.copy_from_slice(&tmp);
            }
        }
        let mut err = 0.0;
        for i in 0..n {
            let mut e = 0.0;
            for (s, ks) in k.iter().enumerate() {
                e += (B5[s] - B4[s]) * ks[i];
            }
            let sc = tol.atol + tol.rtol * y[i].abs().max(y5[i].abs());
            let r = h * e / sc;
            err += r * r;
        }
        err = (err / n as f64).sqrt();
        if !err.is_finite() {
            return Err(Error::Integration(format!("non-finite state at t = {t}")));
        }
        if err <= 1.0 {
            t = if last { t1 } else { t + h };
            y.copy_from_slice(&y5);
            // First-same-as-last: the seventh stage is f at the new point.
            let (first, rest) = k.split_at_mut(1);
            first[0].copy_from_slice(&rest[5]);
            stats.accepted += 1;
            stats.max_error = stats.max_error.max(err);
        } else {
            stats.rejected += 1;
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h < 1e-14 * (t1 - t0) && t < t1 {
            return Err(Error::Integration(format!("step size underflow at t = {t}")));
        }
    }
    Ok(stats)
}

fn initial_step(y: &[f64], dy: &[f64], span: f64, tol: Tolerance) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for (yi, di) in y.iter().zip(dy) {
        let sc = tol.atol + tol.rtol * yi.abs();
        d0 += (yi / sc).powi(2);
        d1 += (di / sc).powi(2);
    }
    let h = if d0 < 1e-10 || d1 < 1e-10 {
        1e-6 * span
    } else {
        0.01 * (d0 / d1).sqrt()
    };
    h.min(span).max(1e-12 * span)
}
