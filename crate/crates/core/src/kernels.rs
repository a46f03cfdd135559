//! Time-integrated pulse kernels of the amplified output modes.

use crate::error::{invalid, Result};
use crate::model::superposition_basis;
use crate::params::SystemParams;

/// Below this squeezing parameter the kernels use truncated series.
pub const SERIES_CROSSOVER: f64 = 1e-6;

/// `sinh(x) - x` without cancellation near zero.
pub fn sinh_minus_x(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        return x.sinh() - x;
    }
    let x2 = x * x;
    let mut term = x * x2 / 6.0;
    let mut sum = term;
    let mut k = 3.0;
    while term.abs() > 1e-18 * sum.abs() {
        term *= x2 / ((k + 1.0) * (k + 2.0));
        sum += term;
        k += 2.0;
    }
    sum
}

/// `e^x - 1 - x` without cancellation near zero.
pub fn expm1_minus_x(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        return x.exp_m1() - x;
    }
    let mut term = x * x / 2.0;
    let mut sum = term;
    let mut k = 2.0;
    while term.abs() > 1e-18 * sum.abs() {
        k += 1.0;
        term *= x / k;
        sum += term;
    }
    sum
}

/// Squeezing-dependent building blocks shared by the kernels and the
/// separability formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Squeeze {
    pub r: f64,
    /// `e^{2r}`
    pub x: f64,
    /// `e^{2r} - 1`
    pub e: f64,
    /// `2 e^{2r} (sinh 2r - 2r) / (e^{2r} - 1)`
    pub y: f64,
    /// `1 - 2r / (e^{2r} - 1)`
    pub l: f64,
    /// `1 - r^2 / sinh^2 r`
    pub k: f64,
}

impl Squeeze {
    pub fn new(r: f64) -> Self {
        let x2 = 2.0 * r;
        let e = x2.exp_m1();
        let x = e + 1.0;
        let (y, l, k) = if r == 0.0 {
            (0.0, 0.0, 0.0)
        } else if r < SERIES_CROSSOVER {
            let y = x2 * x2 / 3.0 * (1.0 + x2 / 2.0 + 2.0 * x2 * x2 / 15.0);
            let l = x2 / 2.0 - x2 * x2 / 12.0 + x2.powi(4) / 720.0;
            let k = r * r / 3.0 * (1.0 - r * r / 5.0);
            (y, l, k)
        } else {
            let y = 2.0 * x * sinh_minus_x(x2) / e;
            let l = expm1_minus_x(x2) / e;
            let sh = r.sinh();
            let k = sinh_minus_x(r) * (sh + r) / (sh * sh);
            (y, l, k)
        };
        Squeeze { r, x, e, y, l, k }
    }

    pub fn er(&self) -> f64 {
        self.r.exp()
    }

    /// `sqrt(e^{2r} - 1)`
    pub fn s(&self) -> f64 {
        self.e.sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseKernels {
    pub squeeze: Squeeze,
    /// `n0 + 1`
    pub n1: f64,
    /// `(gamma / G) (nm + 1)`
    pub b: f64,
    /// Mechanical excess `Gamma`.
    pub gamma_k: f64,
    /// Field population kernel `Upsilon`.
    pub upsilon: f64,
    /// Cross-correlation kernel `Lambda`.
    pub lambda: f64,
}

impl PulseKernels {
    pub fn new(n0: f64, nm: f64, gamma_over_gain: f64, r: f64) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(invalid("r", format!("pulse parameter must be non-negative, got {r}")));
        }
        let sq = Squeeze::new(r);
        let n1 = n0 + 1.0;
        let b = gamma_over_gain * (nm + 1.0);
        let gamma_k = sq.e * (n1 + b);
        let upsilon = n1 * sq.e + b * sq.y;
        let lambda = sq.er() * sq.s() * (n1 + b * sq.l);
        Ok(PulseKernels {
            squeeze: sq,
            n1,
            b,
            gamma_k,
            upsilon,
            lambda,
        })
    }

    pub fn r(&self) -> f64 {
        self.squeeze.r
    }
}

/// Kernels for the system `p` pulsed to `r = G tau`.
pub fn pulse_kernels(p: &SystemParams, r: f64) -> Result<PulseKernels> {
    let basis = superposition_basis(p)?;
    let g = basis.require_amplifying()?;
    PulseKernels::new(p.n0, p.nm, p.gamma / g, r)
}
