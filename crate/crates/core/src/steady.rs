//! Classical steady state of the driven cavities and the mechanical shift.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{DriveSpec, SystemParams};

pub const MAX_ITERATIONS: usize = 1000;
const DAMPING: f64 = 0.5;
const TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub alpha: [Complex64; 2],
    /// Static mechanical displacement.
    pub chi: Complex64,
    /// Shifted detunings `Delta'_j`.
    pub detuning: [f64; 2],
    pub iterations: usize,
}

/// Bare detunings for a drive on the blue sideband of the cavity pair.
fn bare_detunings(p: &SystemParams, d: &DriveSpec) -> [f64; 2] {
    [p.delta - d.omega_m, -p.delta - d.omega_m]
}

fn mechanical_shift(p: &SystemParams, d: &DriveSpec, alpha: &[Complex64; 2]) -> Complex64 {
    let num = d.g01 * alpha[0].norm_sqr() + d.g02 * alpha[1].norm_sqr();
    -Complex64::i() * num / Complex64::new(p.gamma, d.omega_m)
}

fn cavity_amplitudes(
    p: &SystemParams,
    d: &DriveSpec,
    kappa: [f64; 2],
    detuning: [f64; 2],
) -> [Complex64; 2] {
    let i = Complex64::i();
    let e1 = Complex64::from_polar(d.e01, d.phi01);
    let e2 = Complex64::from_polar(d.e02, d.phi02);
    let l1 = Complex64::new(kappa[0], detuning[0]);
    let l2 = Complex64::new(kappa[1], detuning[1]);
    let den = l1 * l2 + p.j * p.j;
    [(l2 * e1 - i * p.j * e2) / den, (l1 * e2 - i * p.j * e1) / den]
}

pub fn steady_state(p: &SystemParams, d: &DriveSpec) -> Result<SteadyState> {
    steady_state_with_losses(p, d, [p.kappa, p.kappa])
}

/// Steady state with separate cavity losses. Everything downstream of the
/// steady state assumes equal losses.
pub fn steady_state_with_losses(
    p: &SystemParams,
    d: &DriveSpec,
    kappa: [f64; 2],
) -> Result<SteadyState> {
    p.validate()?;
    d.validate()?;
    if kappa.iter().any(|k| !(k.is_finite() && *k > 0.0)) {
        return Err(crate::error::invalid("kappa", "cavity losses must be positive"));
    }
    let bare = bare_detunings(p, d);
    let shifted = |chi: Complex64| {
        let s = 2.0 * chi.re;
        [bare[0] + d.g01 * s, bare[1] + d.g02 * s]
    };
    let mut chi = Complex64::new(0.0, 0.0);
    let mut change = f64::INFINITY;
    for it in 1..=MAX_ITERATIONS {
        let alpha = cavity_amplitudes(p, d, kappa, shifted(chi));
        let target = mechanical_shift(p, d, &alpha);
        let next = chi * (1.0 - DAMPING) + target * DAMPING;
        change = (next - chi).norm();
        chi = next;
        let scale = chi.norm().max(f64::MIN_POSITIVE);
        if change <= TOLERANCE * scale || chi.norm() == 0.0 {
            let detuning = shifted(chi);
            return Ok(SteadyState {
                alpha: cavity_amplitudes(p, d, kappa, detuning),
                chi,
                detuning,
                iterations: it,
            });
        }
    }
    Err(Error::SteadyStateDiverged {
        iterations: MAX_ITERATIONS,
        residual: change,
    })
}

/// Drive that produces the requested intracavity amplitudes. The phases of
/// the returned drive absorb the phases of the linear response.
pub fn drive_for_amplitudes(
    p: &SystemParams,
    alpha: [Complex64; 2],
    g0: [f64; 2],
    omega_m: f64,
) -> Result<DriveSpec> {
    p.validate()?;
    let probe = DriveSpec {
        e01: 0.0,
        e02: 0.0,
        phi01: 0.0,
        phi02: 0.0,
        g01: g0[0],
        g02: g0[1],
        omega_m,
    };
    probe.validate()?;
    let chi = mechanical_shift(p, &probe, &alpha);
    let bare = bare_detunings(p, &probe);
    let s = 2.0 * chi.re;
    let det = [bare[0] + g0[0] * s, bare[1] + g0[1] * s];
    let i = Complex64::i();
    let e1 = Complex64::new(p.kappa, det[0]) * alpha[0] + i * p.j * alpha[1];
    let e2 = Complex64::new(p.kappa, det[1]) * alpha[1] + i * p.j * alpha[0];
    Ok(DriveSpec {
        e01: e1.norm(),
        e02: e2.norm(),
        phi01: e1.arg(),
        phi02: e2.arg(),
        ..probe
    })
}

/// Linearized couplings `g_j = g0_j alpha_j`.
pub fn effective_couplings(d: &DriveSpec, ss: &SteadyState) -> [Complex64; 2] {
    [ss.alpha[0] * d.g01, ss.alpha[1] * d.g02]
}
