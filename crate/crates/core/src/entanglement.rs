//! Inseparability of the mechanical output and one field output.
//!
//! With quadratures `X = (A + A^dag)/sqrt 2`, `P = (A - A^dag)/(i sqrt 2)`
//! (vacuum variance 1/2) the criterion is
//! `Delta(h) = [V(X_m + h P_j) + V(P_m + h X_j)] / (1 + h^2) < 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{PulseKernels, Squeeze};
use crate::model::{mode_phase, mode_weight, superposition_basis, SuperpositionBasis};
use crate::moments::ModeMoments;
use crate::params::{Mode, SystemParams};

/// Variances and correlation of the mechanical and one field quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureMoments {
    /// `V(X_m) = V(P_m)`
    pub vm: f64,
    /// `V(X_j) = V(P_j)`
    pub vj: f64,
    /// `<X_m P_j> = <P_m X_j>`, non-positive for the model.
    pub c: f64,
    /// Kernel structure for cancellation-free evaluation.
    structure: Option<(PulseKernels, f64)>,
}

impl QuadratureMoments {
    pub fn new(vm: f64, vj: f64, c: f64) -> Self {
        QuadratureMoments {
            vm,
            vj,
            c,
            structure: None,
        }
    }

    /// Moments built from pulse kernels and a mode weight `|U_j|`.
    pub fn from_kernels(k: &PulseKernels, weight: f64) -> Self {
        QuadratureMoments {
            vm: k.n1 * k.squeeze.x - 0.5 + k.b * k.squeeze.e,
            vj: 0.5 + k.upsilon * weight * weight,
            c: -k.lambda * weight,
            structure: Some((*k, weight)),
        }
    }

    /// Moments from mode correlators, with the field quadrature referenced
    /// to phase `theta`.
    pub fn from_moments(m: &ModeMoments, slot: usize, theta: f64) -> Self {
        let z = m.anomalous[slot] * Complex64::from_polar(1.0, -theta);
        Self::new(m.mechanical + 0.5, m.populations[slot] + 0.5, z.im)
    }

    /// `V_m V_j - C^2`
    pub fn det(&self) -> f64 {
        match self.structure {
            Some((k, u)) => structured_det(&k, u),
            None => self.vm * self.vj - self.c * self.c,
        }
    }

    /// `V_m + h^2 V_j + 2 h C`
    pub fn combined(&self, h: f64) -> f64 {
        match self.structure {
            Some((k, u)) => structured_combined(&k, u, h),
            None => self.vm + h * h * self.vj + 2.0 * h * self.c,
        }
    }

    fn lambda_max(&self) -> f64 {
        let d = self.vm - self.vj;
        0.5 * (self.vm + self.vj + d.hypot(2.0 * self.c))
    }
}

fn structured_det(k: &PulseKernels, u: f64) -> f64 {
    let sq = &k.squeeze;
    let (n1, b) = (k.n1, k.b);
    let u2 = u * u;
    let one_minus = (1.0 - u) * (1.0 + u);
    n1 * (1.0 + sq.e * one_minus) / 2.0 - 0.25
        + b * (sq.e * one_minus - u2 * (sq.y - sq.e)) / 2.0
        + u2 * n1 * b * sq.y
        + u2 * b * b * sq.e * sq.k
}

fn structured_combined(k: &PulseKernels, u: f64, h: f64) -> f64 {
    let sq: &Squeeze = &k.squeeze;
    let p = h * u;
    let er = sq.er();
    let s = sq.s();
    let one_minus = (1.0 - p) * (1.0 + p);
    // e^r - p s and s - p e^r without cancellation for p near one.
    let (a, c) = if p > 0.0 {
        (
            (1.0 + sq.e * one_minus) / (er + p * s),
            (sq.x * one_minus - 1.0) / (s + p * er),
        )
    } else {
        (er - p * s, s - p * er)
    };
    let two_r_over_e = if sq.r == 0.0 { 1.0 } else { 2.0 * sq.r / sq.e };
    let d = c + p * er * two_r_over_e;
    k.n1 * a * a + (h * h - 1.0) / 2.0 + k.b * (d * d + p * p * sq.k)
}

/// Gain of the combination `X_m + h P_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gain {
    Optimal,
    Fixed(f64),
}

/// Gain minimising `Delta(h)`; infinite when the field quadrature alone is
/// best.
pub fn optimal_gain(q: &QuadratureMoments) -> f64 {
    let (vm, vj, c) = (q.vm, q.vj, q.c);
    let d = vj - vm;
    let root = d.hypot(2.0 * c);
    if c == 0.0 {
        return if vj < vm { f64::INFINITY } else { 0.0 };
    }
    if d > 0.0 {
        -2.0 * c / (d + root)
    } else {
        (d - root) / (2.0 * c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Separability {
    pub value: f64,
    pub gain: f64,
}

pub fn separability_of(q: &QuadratureMoments, gain: Gain) -> Separability {
    match gain {
        Gain::Optimal => Separability {
            value: 2.0 * q.det() / q.lambda_max(),
            gain: optimal_gain(q),
        },
        Gain::Fixed(h) if h.is_infinite() => Separability {
            value: 2.0 * q.vj,
            gain: h,
        },
        Gain::Fixed(h) => Separability {
            value: 2.0 * q.combined(h) / (1.0 + h * h),
            gain: h,
        },
    }
}

/// Quadrature moments of the mechanics and output `mode`.
pub fn quadrature_moments(
    b: &SuperpositionBasis,
    k: &PulseKernels,
    mode: Mode,
) -> Result<QuadratureMoments> {
    let u = mode_weight(b, mode)?;
    Ok(QuadratureMoments::from_kernels(k, u))
}

pub fn separability(
    p: &SystemParams,
    r: f64,
    mode: Mode,
    gain: Gain,
) -> Result<Separability> {
    let b = superposition_basis(p)?;
    let g = b.require_amplifying()?;
    let k = PulseKernels::new(p.n0, p.nm, p.gamma / g, r)?;
    Ok(separability_of(&quadrature_moments(&b, &k, mode)?, gain))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    pub value: f64,
    pub gain: f64,
    /// Set when damping is large enough for the undamped form to mislead.
    pub damping_warning: bool,
}

/// Undamped closed form
/// `(h^2-1)/(h^2+1) + 2(n0+1) e^{2r} (1 - h sqrt(1-e^{-2r}) |U|)^2/(h^2+1)`.
pub fn separability_closed_form(
    p: &SystemParams,
    r: f64,
    mode: Mode,
    gain: Gain,
) -> Result<ClosedForm> {
    let b = superposition_basis(p)?;
    let g = b.require_amplifying()?;
    let u = mode_weight(&b, mode)?;
    let undamped = PulseKernels::new(p.n0, p.nm, 0.0, r)?;
    let h = match gain {
        Gain::Optimal => optimal_gain(&QuadratureMoments::from_kernels(&undamped, u)),
        Gain::Fixed(h) => h,
    };
    let n1 = p.n0 + 1.0;
    let sq = Squeeze::new(r);
    let value = if h.is_infinite() {
        1.0 + 2.0 * n1 * sq.e * u * u
    } else {
        // e^r (1 - h U sqrt(1 - e^{-2r})) = e^r - h U sqrt(e^{2r} - 1)
        let p_ = h * u;
        let a = if p_ > 0.0 {
            (1.0 + sq.e * (1.0 - p_) * (1.0 + p_)) / (sq.er() + p_ * sq.s())
        } else {
            sq.er() - p_ * sq.s()
        };
        (h * h - 1.0) / (h * h + 1.0) + 2.0 * n1 * a * a / (h * h + 1.0)
    };
    Ok(ClosedForm {
        value,
        gain: h,
        damping_warning: p.gamma / g > 0.01,
    })
}

/// Damped closed form at unit mode weight for degenerate, equally coupled
/// cavities with a common thermal occupation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampedSeparability {
    pub value: f64,
    /// `(n+1)(gamma/G) T(r)`, the damping-only contribution.
    pub damping_term: f64,
    /// Large-`r` limit `(n+1) gamma / G`.
    pub asymptote: f64,
}

fn check_damped(p: &SystemParams) -> Result<()> {
    let tol = 1e-12;
    if p.delta.abs() > tol * p.kappa {
        return Err(Error::Precondition("damped form requires Delta = 0".into()));
    }
    if (p.g1 - p.g2).abs() > tol * p.g1.max(p.g2) {
        return Err(Error::Precondition("damped form requires |g1| = |g2|".into()));
    }
    if (p.n0 - p.nm).abs() > tol * p.n0.max(p.nm).max(1.0) {
        return Err(Error::Precondition("damped form requires n0 = nm".into()));
    }
    Ok(())
}

/// `T(r) = 1 - 4r (1 - sqrt(1 - e^{-2r})) / (1 - e^{-2r})`.
pub fn damping_factor(r: f64) -> f64 {
    if r == 0.0 {
        return -1.0;
    }
    let em = (-2.0 * r).exp_m1().abs();
    let e = (2.0 * r).exp_m1();
    1.0 - 4.0 * r / ((1.0 + em.sqrt()) * e)
}

/// Small-`r` approximation of `T(r)`: `-(1 - 2 sqrt(2r))`.
pub fn damping_factor_small_r(r: f64) -> f64 {
    -(1.0 - 2.0 * (2.0 * r).sqrt())
}

pub fn separability_damped(p: &SystemParams, r: f64) -> Result<DampedSeparability> {
    check_damped(p)?;
    let b = superposition_basis(p)?;
    let g = b.require_amplifying()?;
    if !(r.is_finite() && r >= 0.0) {
        return Err(crate::error::invalid("r", "pulse parameter must be non-negative"));
    }
    let f = p.gamma / g;
    let n1 = p.n0 + 1.0;
    let sq = Squeeze::new(r);
    // e^{2r} (1 - sqrt(1 - e^{-2r}))^2 = 1 / (e^r + sqrt(e^{2r} - 1))^2
    let lead = 1.0 / (sq.er() + sq.s()).powi(2);
    let damping_term = n1 * f * damping_factor(r);
    Ok(DampedSeparability {
        value: n1 * (1.0 + f) * lead + damping_term,
        damping_term,
        asymptote: n1 * f,
    })
}

/// Separability between the two field modes of a moment set, minimised over
/// the gain and the relative quadrature phase.
pub fn field_pair_separability(m: &ModeMoments) -> f64 {
    let va = 2.0 * m.populations[0] + 1.0;
    let vb = 2.0 * m.populations[1] + 1.0;
    // Cross terms reduce to 4h Im(<ab> e^{-i t}), minimised to -4h|<ab>|.
    let q = QuadratureMoments::new(va / 2.0, vb / 2.0, -m.field_anomalous.norm());
    separability_of(&q, Gain::Optimal).value
}

/// Reference phase used for the quadrature of `mode`.
pub fn quadrature_phase(b: &SuperpositionBasis, mode: Mode) -> f64 {
    mode_phase(b, mode)
}
