//! First-order coherence, which-path information and coincidences.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::PulseKernels;
use crate::moments::ModeMoments;
use crate::params::SystemParams;

/// Which two outputs a coherence refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pair {
    /// The two field modes of the moment set.
    Fields,
    /// Mechanics with field `0` or `1` of the moment set.
    MechanicsField(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coherence {
    Defined(f64),
    /// A population vanishes. `limit` is the value approached along the
    /// parameter line.
    Undefined { limit: f64 },
}

impl Coherence {
    pub fn value(self) -> Option<f64> {
        match self {
            Coherence::Defined(v) => Some(v),
            Coherence::Undefined { .. } => None,
        }
    }

    /// The value, or the limit when undefined.
    pub fn value_or_limit(self) -> f64 {
        match self {
            Coherence::Defined(v) => v,
            Coherence::Undefined { limit } => limit,
        }
    }
}

pub fn first_order_coherence(m: &ModeMoments, pair: Pair) -> Coherence {
    let (na, nb, c, limit) = match pair {
        Pair::Fields => (m.populations[0], m.populations[1], m.coherence, 1.0),
        Pair::MechanicsField(k) => (m.mechanical, m.populations[k], m.mech_coherence[k], 0.0),
    };
    if na == 0.0 || nb == 0.0 {
        return Coherence::Undefined { limit };
    }
    Coherence::Defined(c.norm() / (na * nb).sqrt())
}

/// Fringe visibility `2|<a^dag b>| / (n_a + n_b)`.
pub fn visibility(m: &ModeMoments) -> Result<f64> {
    let total = m.total_population();
    if total <= 0.0 {
        return Err(Error::Undefined("visibility of empty modes".into()));
    }
    Ok(2.0 * m.coherence.norm() / total)
}

/// Which-path distinguishability `|n_a - n_b| / (n_a + n_b)`.
pub fn distinguishability(m: &ModeMoments) -> Result<f64> {
    let total = m.total_population();
    if total <= 0.0 {
        return Err(Error::Undefined("distinguishability of empty modes".into()));
    }
    Ok((m.populations[0] - m.populations[1]).abs() / total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoincidenceRate {
    /// `2 n_a n_b`, the pure-state form for unit first-order coherence.
    pub rate: f64,
    /// Gaussian factorization `n_a n_b + |<a^dag b>|^2 + |<a b>|^2`.
    pub gaussian: f64,
}

pub fn coincidence_rate(m: &ModeMoments) -> CoincidenceRate {
    let [na, nb] = m.populations;
    CoincidenceRate {
        rate: 2.0 * na * nb,
        gaussian: na * nb + m.coherence.norm_sqr() + m.field_anomalous.norm_sqr(),
    }
}

/// Coincidence rate for degenerate, equally coupled cavities.
pub fn coincidence_rate_symmetric(p: &SystemParams, k: &PulseKernels, gain: f64) -> Result<f64> {
    if p.delta != 0.0 || p.g1 != p.g2 {
        return Err(Error::Precondition(
            "symmetric coincidence form requires Delta = 0 and |g1| = |g2|".into(),
        ));
    }
    let phi = p.j.atan2(p.kappa);
    let g2 = p.g1 * p.g2;
    let pre = p.kappa * k.upsilon * g2 / (gain * (p.kappa * p.kappa + p.j * p.j));
    let s = (2.0 * phi).sin() * (2.0 * p.psi).sin();
    Ok(2.0 * pre * pre * (1.0 - s * s))
}

/// Complex cross-coherence normalised by the populations.
pub fn normalized_coherence(m: &ModeMoments) -> Option<Complex64> {
    let [na, nb] = m.populations;
    if na == 0.0 || nb == 0.0 {
        None
    } else {
        Some(m.coherence / (na * nb).sqrt())
    }
}
