//! Normal-mode decomposition of the coupled cavities and the resulting
//! gains, frequency pulls and interference amplitudes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{Mode, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionBasis {
    /// Mixing angle in `[0, pi/2]`.
    pub theta: f64,
    /// Normal-mode half splitting `sqrt(J^2 + Delta^2)`.
    pub w: f64,
    /// `atan(w / kappa)`.
    pub phi: f64,
    pub kappa: f64,
    pub gw: Complex64,
    pub gu: Complex64,
    pub gw_sq: f64,
    pub gu_sq: f64,
    pub gain_w: f64,
    pub gain_u: f64,
    /// Net gain `G = G_w + G_u - gamma`.
    pub gain: f64,
    /// Frequency pull `delta`.
    pub pull: f64,
    /// `J = Delta = 0`: theta is conventional, not determined.
    pub degenerate: bool,
}

impl SuperpositionBasis {
    pub fn is_amplifying(&self) -> bool {
        self.gain > 0.0
    }

    pub fn require_amplifying(&self) -> Result<f64> {
        if self.is_amplifying() {
            Ok(self.gain)
        } else {
            Err(Error::NonAmplifying { gain: self.gain })
        }
    }

    /// `kappa / (kappa^2 + w^2)`
    pub fn lorentz(&self) -> f64 {
        self.kappa / (self.kappa * self.kappa + self.w * self.w)
    }

    pub fn coupling(&self, mode: Mode) -> Complex64 {
        match mode {
            Mode::One => self.g_cavity(0),
            Mode::Two => self.g_cavity(1),
            Mode::W => self.gw,
            Mode::U => self.gu,
        }
    }

    fn g_cavity(&self, k: usize) -> Complex64 {
        // Invert the rotation: g1 = cos g_w + sin g_u, g2 = sin g_w - cos g_u.
        let (s, c) = self.theta.sin_cos();
        if k == 0 {
            self.gw * c + self.gu * s
        } else {
            self.gw * s - self.gu * c
        }
    }
}

/// Mixing angle, splitting and lag angle, independent of the couplings.
pub fn mixing(p: &SystemParams) -> (f64, f64, f64, bool) {
    let w = p.j.hypot(p.delta);
    let degenerate = w == 0.0;
    let theta = if degenerate { 0.0 } else { 0.5 * p.j.atan2(p.delta) };
    let phi = w.atan2(p.kappa);
    (theta, w, phi, degenerate)
}

/// `(|g_w|^2, |g_u|^2)` at the phase carried by `p`.
pub fn phase_dependent_couplings(p: &SystemParams, theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    let s2t = (2.0 * theta).sin();
    let a = p.g1 * p.g1;
    let b = p.g2 * p.g2;
    let cross = p.g1 * p.g2 * s2t * (2.0 * p.psi).cos();
    let gw = a * c * c + b * s * s + cross;
    let gu = a * s * s + b * c * c - cross;
    (gw.max(0.0), gu.max(0.0))
}

pub fn superposition_basis(p: &SystemParams) -> Result<SuperpositionBasis> {
    p.validate()?;
    let (theta, w, phi, degenerate) = mixing(p);
    let (s, c) = theta.sin_cos();
    let g1 = Complex64::from_polar(p.g1, p.psi);
    let g2 = Complex64::from_polar(p.g2, -p.psi);
    let gw = g1 * c + g2 * s;
    let gu = g1 * s - g2 * c;
    let (gw_sq, gu_sq) = phase_dependent_couplings(p, theta);
    let lor = p.kappa / (p.kappa * p.kappa + w * w);
    let gain_w = gw_sq * lor;
    let gain_u = gu_sq * lor;
    // The sum is phase independent; evaluate it without the phase terms.
    let gain = (p.g1 * p.g1 + p.g2 * p.g2) * lor - p.gamma;
    let pull = (gw_sq - gu_sq) * w / (p.kappa * p.kappa + w * w);
    Ok(SuperpositionBasis {
        theta,
        w,
        phi,
        kappa: p.kappa,
        gw,
        gu,
        gw_sq,
        gu_sq,
        gain_w,
        gain_u,
        gain,
        pull,
        degenerate,
    })
}

/// Interference amplitudes of the two cavity outputs,
/// `A_1 = e^{-i phi} cos(theta) g_w + e^{i phi} sin(theta) g_u` and
/// `A_2 = e^{-i phi} sin(theta) g_w - e^{i phi} cos(theta) g_u`.
pub fn interference_amplitudes(b: &SuperpositionBasis) -> [Complex64; 2] {
    let (s, c) = b.theta.sin_cos();
    let em = Complex64::from_polar(1.0, -b.phi);
    let ep = Complex64::from_polar(1.0, b.phi);
    [
        em * c * b.gw + ep * s * b.gu,
        em * s * b.gw - ep * c * b.gu,
    ]
}

/// Closed-form `|A_j|^2` as a function of the coupling phase. The leading
/// term is `|g_j|^2`.
pub fn interference_intensity(p: &SystemParams, b: &SuperpositionBasis, mode: Mode) -> f64 {
    let sign = match mode {
        Mode::One => -1.0,
        Mode::Two => 1.0,
        _ => panic!("interference intensity is defined for cavity modes only"),
    };
    let a = p.g1 * p.g1;
    let bb = p.g2 * p.g2;
    let s2t = (2.0 * b.theta).sin();
    let s4t = (4.0 * b.theta).sin();
    let sp = b.phi.sin();
    let s2p = (2.0 * b.phi).sin();
    let lead = if sign < 0.0 { a } else { bb };
    let v = lead + sign * (a - bb) * s2t * s2t * sp * sp
        - sign
            * p.g1
            * p.g2
            * (s4t * sp * sp * (2.0 * p.psi).cos() - s2t * s2p * (2.0 * p.psi).sin());
    v.max(0.0)
}

/// Complex amplitude attached to `mode`: `g_w`/`g_u` or `A_1`/`A_2`.
pub fn mode_amplitude(b: &SuperpositionBasis, mode: Mode) -> Complex64 {
    match mode {
        Mode::W => b.gw,
        Mode::U => b.gu,
        Mode::One => interference_amplitudes(b)[0],
        Mode::Two => interference_amplitudes(b)[1],
    }
}

/// `|U_j|^2 = kappa |amp_j|^2 / (G (kappa^2 + w^2))`. May exceed one when
/// the mechanics is damped.
pub fn mode_weight_sq(b: &SuperpositionBasis, mode: Mode) -> Result<f64> {
    let g = b.require_amplifying()?;
    let amp_sq = match mode {
        Mode::W => b.gw_sq,
        Mode::U => b.gu_sq,
        _ => mode_amplitude(b, mode).norm_sqr(),
    };
    Ok(b.lorentz() * amp_sq / g)
}

pub fn mode_weight(b: &SuperpositionBasis, mode: Mode) -> Result<f64> {
    mode_weight_sq(b, mode).map(f64::sqrt)
}

/// Quadrature reference phase of `mode`: the argument of its amplitude.
pub fn mode_phase(b: &SuperpositionBasis, mode: Mode) -> f64 {
    let a = mode_amplitude(b, mode);
    a.im.atan2(a.re)
}

/// Phase in `[0, pi/2]` at which `|U_w|^2` (or `|U_u|^2`) equals one.
pub fn lock_psi(p: &SystemParams, mode: Mode) -> Result<f64> {
    let b = superposition_basis(p)?;
    let g = b.require_amplifying()?;
    let (s, c) = b.theta.sin_cos();
    let a = p.g1 * p.g1;
    let bb = p.g2 * p.g2;
    let cross = p.g1 * p.g2 * (2.0 * b.theta).sin();
    let target = g / b.lorentz();
    let cos2 = match mode {
        Mode::W => (target - a * c * c - bb * s * s) / cross,
        Mode::U => (a * s * s + bb * c * c - target) / cross,
        _ => {
            return Err(Error::Precondition(
                "the phase lock applies to the superposition modes".into(),
            ))
        }
    };
    let slack = 1e-9;
    if !cos2.is_finite() || cos2.abs() > 1.0 + slack {
        return Err(Error::Precondition(format!(
            "no phase gives |U_{}| = 1 for these couplings",
            mode.label()
        )));
    }
    Ok(0.5 * cos2.clamp(-1.0, 1.0).acos())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(g2: f64, psi: f64, j: f64, delta: f64, gamma: f64) -> SystemParams {
        SystemParams {
            g1: 1.0,
            g2,
            psi,
            j,
            delta,
            kappa: 10.0,
            gamma,
            n0: 0.0,
            nm: 0.0,
        }
    }

    #[test]
    fn weights_frozen_detuned() {
        let b = superposition_basis(&params(1.0, 0.3, 10.0, 2.0, 0.05)).unwrap();
        assert!((b.gain - 0.048_039_215_686_274_51).abs() < 1e-15);
        let expect = [
            (Mode::One, 0.620_672_918_754_402_1),
            (Mode::Two, 1.420_143_407_776_210_2),
            (Mode::W, 1.846_232_811_163_177),
            (Mode::U, 0.194_583_515_367_435_3),
        ];
        for (m, v) in expect {
            assert!((mode_weight_sq(&b, m).unwrap() - v).abs() < 1e-13, "{m:?}");
        }
    }

    #[test]
    fn asymmetric_coupling_sends_all_weight_to_one_mode() {
        let b = superposition_basis(&params(2.5, std::f64::consts::FRAC_PI_4, 4.0, 0.0, 0.0)).unwrap();
        assert!((b.gain - 0.625).abs() < 1e-15);
        assert!((mode_weight_sq(&b, Mode::Two).unwrap() - 1.0).abs() < 1e-13);
        assert!(mode_weight_sq(&b, Mode::One).unwrap() < 1e-13);
    }

    #[test]
    fn closed_intensity_matches_amplitudes() {
        for psi in [0.0, 0.4, 1.1, 2.5] {
            for (g2, j, d) in [(1.0, 10.0, 0.0), (2.5, 4.0, 1.5), (0.3, 7.0, -3.0)] {
                let p = params(g2, psi, j, d, 0.0);
                let b = superposition_basis(&p).unwrap();
                let amps = interference_amplitudes(&b);
                for (m, a) in [(Mode::One, amps[0]), (Mode::Two, amps[1])] {
                    let closed = interference_intensity(&p, &b, m);
                    assert!((closed - a.norm_sqr()).abs() < 1e-12 * (1.0 + closed), "{psi} {g2} {j} {d} {m:?} {closed} {}", a.norm_sqr());
                }
            }
        }
    }

    #[test]
    fn degenerate_cavities_flagged() {
        let b = superposition_basis(&params(1.0, 0.2, 0.0, 0.0, 0.0)).unwrap();
        assert!(b.degenerate);
        assert_eq!(b.theta, 0.0);
        assert_eq!(b.pull, 0.0);
    }

    #[test]
    fn lock_gives_unit_weight() {
        for gamma in [0.0, 0.02, 0.05] {
            let mut p = params(1.0, 0.0, 10.0, 0.0, gamma);
            for mode in [Mode::W, Mode::U] {
                p.psi = lock_psi(&p, mode).unwrap();
                let b = superposition_basis(&p).unwrap();
                assert!((mode_weight_sq(&b, mode).unwrap() - 1.0).abs() < 1e-9);
            }
        }
        let p = params(1.0, 0.0, 10.0, 0.0, 0.0);
        assert!(lock_psi(&p, Mode::One).is_err());
    }

    #[test]
    fn lock_fails_when_unreachable() {
        // A weak second coupling caps the weight of u below one.
        let p = params(0.1, 0.0, 10.0, 0.0, 0.0);
        assert!(lock_psi(&p, Mode::U).is_err());
    }
}
