//! EPR steering of the mechanical output by a field output, and the
//! phase-resolved classification of who steers.

use crate::coherence::coincidence_rate;
use crate::entanglement::{quadrature_moments, QuadratureMoments};
use crate::error::{invalid, Result};
use crate::kernels::PulseKernels;
use crate::model::{mode_weight_sq, superposition_basis};
use crate::moments::cavity_moments;
use crate::params::{Mode, SystemParams};

/// Vacuum bound of the steering parameter.
pub const STEERING_BOUND: f64 = 0.5;

/// Inferred variance `E = V_m - C^2 / V_j`.
pub fn steering_of(q: &QuadratureMoments) -> f64 {
    q.det() / q.vj
}

pub fn steering_param(p: &SystemParams, r: f64, mode: Mode) -> Result<f64> {
    let b = superposition_basis(p)?;
    let g = b.require_amplifying()?;
    let k = PulseKernels::new(p.n0, p.nm, p.gamma / g, r)?;
    Ok(steering_of(&quadrature_moments(&b, &k, mode)?))
}

/// Undamped closed form
/// `1/2 + [(n0+1)(e^{2r}-1)(1-2|U|^2) + n0] / [1 + 2(n0+1)(e^{2r}-1)|U|^2]`.
pub fn steering_closed_form(n0: f64, r: f64, weight_sq: f64) -> f64 {
    let n1 = n0 + 1.0;
    let e = (2.0 * r).exp_m1();
    // Numerator regrouped to avoid the cancellation against 1/2.
    (n0 + 0.5 + n1 * e * (1.0 - weight_sq)) / (1.0 + 2.0 * n1 * e * weight_sq)
}

/// Squeezing above which a unit-weight field steers the mechanics.
pub fn steering_threshold(n0: f64) -> Result<f64> {
    if !(n0.is_finite() && n0 >= 0.0) {
        return Err(invalid("n0", "must be finite and non-negative"));
    }
    Ok(0.5 * ((2.0 * n0 + 1.0) / (n0 + 1.0)).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SteeringClass {
    /// A single cavity output steers.
    Bipartite,
    /// Only a superposition output steers.
    Collective,
    None,
}

impl SteeringClass {
    pub fn label(self) -> &'static str {
        match self {
            SteeringClass::Bipartite => "bipartite",
            SteeringClass::Collective => "collective",
            SteeringClass::None => "none",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonogamyPoint {
    pub psi: f64,
    /// `E_{m|1}, E_{m|2}, E_{m|w}, E_{m|u}`
    pub steering: [f64; 4],
    pub coincidence: f64,
    pub class: SteeringClass,
    /// Pairs sharing a basis that steer simultaneously.
    pub violations: Vec<(Mode, Mode)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonogamyReport {
    pub points: Vec<MonogamyPoint>,
}

impl MonogamyReport {
    pub fn violation_count(&self) -> usize {
        self.points.iter().map(|p| p.violations.len()).sum()
    }

    /// Indices of strict local minima and maxima of the coincidence rate,
    /// treating the grid as periodic when `periodic` is set.
    pub fn coincidence_extrema(&self, periodic: bool) -> (Vec<usize>, Vec<usize>) {
        let n = self.points.len();
        let mut minima = Vec::new();
        let mut maxima = Vec::new();
        if n < 3 {
            return (minima, maxima);
        }
        let at = |i: usize| self.points[i].coincidence;
        let range: Box<dyn Iterator<Item = usize>> = if periodic {
            Box::new(0..n)
        } else {
            Box::new(1..n - 1)
        };
        for i in range {
            let prev = at((i + n - 1) % n);
            let next = at((i + 1) % n);
            let v = at(i);
            if v < prev && v <= next {
                minima.push(i);
            } else if v > prev && v >= next {
                maxima.push(i);
            }
        }
        (minima, maxima)
    }
}

pub fn classify(steering: &[f64; 4]) -> SteeringClass {
    let steers = |i: usize| steering[i] < STEERING_BOUND;
    if steers(0) || steers(1) {
        SteeringClass::Bipartite
    } else if steers(2) || steers(3) {
        SteeringClass::Collective
    } else {
        SteeringClass::None
    }
}

/// Steering parameters of all four outputs and the cavity coincidence rate
/// across `psis`.
pub fn monogamy_audit(p: &SystemParams, r: f64, psis: &[f64]) -> Result<MonogamyReport> {
    let mut points = Vec::with_capacity(psis.len());
    for &psi in psis {
        let q = p.with_psi(psi);
        let b = superposition_basis(&q)?;
        let g = b.require_amplifying()?;
        let k = PulseKernels::new(q.n0, q.nm, q.gamma / g, r)?;
        let mut steering = [0.0; 4];
        for (slot, mode) in Mode::ALL.iter().enumerate() {
            steering[slot] = steering_of(&quadrature_moments(&b, &k, *mode)?);
        }
        let mut violations = Vec::new();
        for (a, bm) in [(0, 1), (2, 3)] {
            if steering[a] < STEERING_BOUND && steering[bm] < STEERING_BOUND {
                violations.push((Mode::ALL[a], Mode::ALL[bm]));
            }
        }
        let m = cavity_moments(&q, &b, &k)?;
        points.push(MonogamyPoint {
            psi,
            steering,
            coincidence: coincidence_rate(&m).rate,
            class: classify(&steering),
            violations,
        });
    }
    Ok(MonogamyReport { points })
}

/// Weight `|U_j|^2` needed for steering at squeezing `r` without damping.
pub fn steering_weight_threshold(n0: f64, r: f64) -> f64 {
    let n1 = n0 + 1.0;
    0.5 + n0 / (2.0 * n1 * (2.0 * r).exp_m1())
}

/// Mode weight of `mode` at the system's phase.
pub fn weight_sq(p: &SystemParams, mode: Mode) -> Result<f64> {
    mode_weight_sq(&superposition_basis(p)?, mode)
}
