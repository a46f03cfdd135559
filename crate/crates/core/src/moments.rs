//! Second moments of the mechanical output and a pair of field outputs.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::PulseKernels;
use crate::model::{interference_amplitudes, SuperpositionBasis};
use crate::params::{Basis, Mode, SystemParams};

/// Moments of `(A_m, A_a, A_b)` where `(a, b)` is the field pair of `basis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeMoments {
    pub basis: Basis,
    /// `<A_a^dag A_a>`, `<A_b^dag A_b>`
    pub populations: [f64; 2],
    /// `<A_m^dag A_m>`
    pub mechanical: f64,
    /// `<A_a^dag A_b>`
    pub coherence: Complex64,
    /// `<A_m A_a>`, `<A_m A_b>`
    pub anomalous: [Complex64; 2],
    /// `<A_a A_b>`; vanishes for the model.
    pub field_anomalous: Complex64,
    /// `<A_m^dag A_a>`, `<A_m^dag A_b>`; vanish for the model.
    pub mech_coherence: [Complex64; 2],
}

impl ModeMoments {
    pub fn modes(&self) -> [Mode; 2] {
        self.basis.modes()
    }

    pub fn total_population(&self) -> f64 {
        self.populations[0] + self.populations[1]
    }
}

fn pair_moments(
    basis: Basis,
    amps: [Complex64; 2],
    scale: f64,
    k: &PulseKernels,
    n0: f64,
) -> ModeMoments {
    // scale = kappa / (G (kappa^2 + w^2))
    let pop = |a: Complex64| scale * k.upsilon * a.norm_sqr();
    let anom = |a: Complex64| -Complex64::i() * scale.sqrt() * k.lambda * a;
    let zero = Complex64::new(0.0, 0.0);
    ModeMoments {
        basis,
        populations: [pop(amps[0]), pop(amps[1])],
        mechanical: n0 + k.gamma_k,
        coherence: amps[0].conj() * amps[1] * (scale * k.upsilon),
        anomalous: [anom(amps[0]), anom(amps[1])],
        field_anomalous: zero,
        mech_coherence: [zero, zero],
    }
}

fn check_kernels(p: &SystemParams, b: &SuperpositionBasis, k: &PulseKernels) -> Result<f64> {
    let g = b.require_amplifying()?;
    let expected = p.gamma / g * (p.nm + 1.0);
    if (k.b - expected).abs() > 1e-12 * expected.abs().max(1.0) || k.n1 != p.n0 + 1.0 {
        return Err(Error::Precondition(
            "pulse kernels were built for different system parameters".into(),
        ));
    }
    Ok(g)
}

pub fn superposition_moments(
    p: &SystemParams,
    b: &SuperpositionBasis,
    k: &PulseKernels,
) -> Result<ModeMoments> {
    let g = check_kernels(p, b, k)?;
    Ok(pair_moments(
        Basis::Superposition,
        [b.gw, b.gu],
        b.lorentz() / g,
        k,
        p.n0,
    ))
}

pub fn cavity_moments(
    p: &SystemParams,
    b: &SuperpositionBasis,
    k: &PulseKernels,
) -> Result<ModeMoments> {
    let g = check_kernels(p, b, k)?;
    Ok(pair_moments(
        Basis::Cavity,
        interference_amplitudes(b),
        b.lorentz() / g,
        k,
        p.n0,
    ))
}

pub fn moments(
    p: &SystemParams,
    b: &SuperpositionBasis,
    k: &PulseKernels,
    basis: Basis,
) -> Result<ModeMoments> {
    match basis {
        Basis::Cavity => cavity_moments(p, b, k),
        Basis::Superposition => superposition_moments(p, b, k),
    }
}

/// Parameter regimes with a reduced closed form for `|<A_1^dag A_2>|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialCase {
    /// Uncoupled cavities, `J = 0`.
    Uncoupled,
    /// Degenerate cavities, `Delta = 0`.
    Degenerate,
    /// Degenerate cavities with equal couplings.
    Symmetric,
}

const CASE_TOL: f64 = 1e-12;

/// Magnitude of the cavity cross-coherence in a special regime.
pub fn mutual_coherence_special(
    p: &SystemParams,
    b: &SuperpositionBasis,
    k: &PulseKernels,
    case: SpecialCase,
) -> Result<f64> {
    let g = check_kernels(p, b, k)?;
    let scale = |den: f64| p.kappa * k.upsilon / (g * den);
    let kk = p.kappa * p.kappa;
    let c2p = (2.0 * p.psi).cos();
    let s2p = (2.0 * p.psi).sin();
    match case {
        SpecialCase::Uncoupled => {
            if p.j != 0.0 {
                return Err(Error::Precondition("uncoupled case requires J = 0".into()));
            }
            Ok(scale(kk + p.delta * p.delta) * p.g1 * p.g2)
        }
        SpecialCase::Degenerate | SpecialCase::Symmetric => {
            if p.delta.abs() > CASE_TOL * p.kappa {
                return Err(Error::Precondition("degenerate case requires Delta = 0".into()));
            }
            let phi = b.phi;
            if case == SpecialCase::Symmetric {
                if (p.g1 - p.g2).abs() > CASE_TOL * p.g1.max(p.g2) {
                    return Err(Error::Precondition(
                        "symmetric case requires |g1| = |g2|".into(),
                    ));
                }
                let gsq = p.g1 * p.g2;
                let s = (2.0 * phi).sin() * s2p;
                let inner = (1.0 - s * s).max(0.0);
                return Ok(scale(kk + p.j * p.j) * gsq * inner.sqrt());
            }
            let a = p.g1 * p.g2 * c2p;
            let c = 0.5 * (p.g1 * p.g1 - p.g2 * p.g2) * (2.0 * phi).sin()
                + p.g1 * p.g2 * (2.0 * phi).cos() * s2p;
            Ok(scale(kk + p.j * p.j) * (a * a + c * c).sqrt())
        }
    }
}
