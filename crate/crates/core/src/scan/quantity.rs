//! Named output quantities and their evaluation at one parameter point.

use crate::coherence::{
    coincidence_rate, distinguishability, first_order_coherence, visibility, Pair,
};
use crate::entanglement::{
    quadrature_moments, separability_damped, separability_of, Gain,
};
use crate::error::{Error, Result};
use crate::kernels::PulseKernels;
use crate::model::{mode_weight_sq, superposition_basis};
use crate::moments::moments;
use crate::noise::{noisy_moments, noisy_separability, NoiseSpec};
use crate::oracle::{compare_to_analytic, DEFAULT_TOLERANCE};
use crate::params::{Basis, Mode, SystemParams};
use crate::steady::SteadyState;
use crate::steering::{classify, steering_of};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Population(Mode),
    MechanicalPopulation,
    Coherence(Basis),
    FirstOrder(Basis),
    Visibility,
    Distinguishability,
    Coincidence,
    CoincidenceGaussian,
    WeightSq(Mode),
    Separability(Mode),
    Gain(Mode),
    SeparabilityDamped,
    Steering(Mode),
    SteeringClass,
    OracleDeviation,
    OracleZeroBlock,
    OracleCommutator,
    NoisySeparability(Mode),
    NoisyPopulation(Mode),
    NoisyMechanicalPopulation,
}

fn basis_tag(b: Basis) -> &'static str {
    match b {
        Basis::Cavity => "12",
        Basis::Superposition => "wu",
    }
}

impl Kind {
    /// Every quantity the registry knows.
    pub fn all() -> Vec<Kind> {
        let mut v = Vec::new();
        for m in Mode::ALL {
            v.push(Kind::Population(m));
        }
        v.push(Kind::MechanicalPopulation);
        for b in [Basis::Cavity, Basis::Superposition] {
            v.push(Kind::Coherence(b));
            v.push(Kind::FirstOrder(b));
        }
        v.extend([
            Kind::Visibility,
            Kind::Distinguishability,
            Kind::Coincidence,
            Kind::CoincidenceGaussian,
        ]);
        for m in Mode::ALL {
            v.push(Kind::WeightSq(m));
            v.push(Kind::Separability(m));
            v.push(Kind::Gain(m));
            v.push(Kind::Steering(m));
        }
        v.extend([
            Kind::SeparabilityDamped,
            Kind::SteeringClass,
            Kind::OracleDeviation,
            Kind::OracleZeroBlock,
            Kind::OracleCommutator,
        ]);
        for m in [Mode::W, Mode::U] {
            v.push(Kind::NoisySeparability(m));
            v.push(Kind::NoisyPopulation(m));
        }
        v.push(Kind::NoisyMechanicalPopulation);
        v
    }

    pub fn name(self) -> String {
        match self {
            Kind::Population(m) => format!("pop_{}", m.label()),
            Kind::MechanicalPopulation => "pop_m".into(),
            Kind::Coherence(b) => format!("coh_{}", basis_tag(b)),
            Kind::FirstOrder(b) => format!("gamma1_{}", basis_tag(b)),
            Kind::Visibility => "V".into(),
            Kind::Distinguishability => "D".into(),
            Kind::Coincidence => "R12".into(),
            Kind::CoincidenceGaussian => "R12_gaussian".into(),
            Kind::WeightSq(m) => format!("U2_{}", m.label()),
            Kind::Separability(m) => format!("Delta_m_{}", m.label()),
            Kind::Gain(m) => format!("h_m_{}", m.label()),
            Kind::SeparabilityDamped => "Delta_m_damped".into(),
            Kind::Steering(m) => format!("E_m_{}", m.label()),
            Kind::SteeringClass => "steering_class".into(),
            Kind::OracleDeviation => "oracle_max_rel_dev".into(),
            Kind::OracleZeroBlock => "oracle_zero_block".into(),
            Kind::OracleCommutator => "oracle_commutator_err".into(),
            Kind::NoisySeparability(m) => format!("noisy_Delta_m_{}", m.label()),
            Kind::NoisyPopulation(m) => format!("noisy_pop_{}", m.label()),
            Kind::NoisyMechanicalPopulation => "noisy_pop_m".into(),
        }
    }

    pub fn needs_noise(self) -> bool {
        matches!(
            self,
            Kind::NoisySeparability(_) | Kind::NoisyPopulation(_) | Kind::NoisyMechanicalPopulation
        )
    }
}

/// A registry quantity, optionally evaluated with the cavities uncoupled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quantity {
    pub kind: Kind,
    pub uncoupled: bool,
}

const UNCOUPLED_SUFFIX: &str = "@J0";

impl Quantity {
    pub fn parse(name: &str) -> Option<Quantity> {
        let (base, uncoupled) = match name.strip_suffix(UNCOUPLED_SUFFIX) {
            Some(b) => (b, true),
            None => (name, false),
        };
        Kind::all()
            .into_iter()
            .find(|k| k.name() == base)
            .map(|kind| Quantity { kind, uncoupled })
    }

    pub fn name(&self) -> String {
        if self.uncoupled {
            format!("{}{UNCOUPLED_SUFFIX}", self.kind.name())
        } else {
            self.kind.name()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Text(String),
}

/// Everything needed to evaluate quantities at one point.
#[derive(Debug, Clone, Copy)]
pub struct Point {
    pub params: SystemParams,
    pub r: f64,
    pub gain: Gain,
    pub noise: Option<NoiseSpec>,
    pub steady: Option<SteadyState>,
}

pub fn evaluate(q: &Quantity, pt: &Point) -> Result<Cell> {
    let mut p = pt.params;
    if q.uncoupled {
        p.j = 0.0;
    }
    let num = |v: f64| Ok(Cell::Number(v));
    let b = superposition_basis(&p)?;
    let g = b.require_amplifying()?;
    let k = PulseKernels::new(p.n0, p.nm, p.gamma / g, pt.r)?;
    let noisy = || -> Result<(&NoiseSpec, &SteadyState)> {
        match (&pt.noise, &pt.steady) {
            (Some(n), Some(s)) => Ok((n, s)),
            _ => Err(Error::Precondition(
                "noise quantities need [noise] and [drive] sections".into(),
            )),
        }
    };
    match q.kind {
        Kind::Population(m) => num(moments(&p, &b, &k, m.basis())?.populations[m.slot()]),
        Kind::MechanicalPopulation => num(p.n0 + k.gamma_k),
        Kind::Coherence(basis) => num(moments(&p, &b, &k, basis)?.coherence.norm()),
        Kind::FirstOrder(basis) => {
            let m = moments(&p, &b, &k, basis)?;
            match first_order_coherence(&m, Pair::Fields).value() {
                Some(v) => num(v),
                None => Err(Error::Undefined("first-order coherence with an empty mode".into())),
            }
        }
        Kind::Visibility => num(visibility(&moments(&p, &b, &k, Basis::Cavity)?)?),
        Kind::Distinguishability => {
            num(distinguishability(&moments(&p, &b, &k, Basis::Cavity)?)?)
        }
        Kind::Coincidence => num(coincidence_rate(&moments(&p, &b, &k, Basis::Cavity)?).rate),
        Kind::CoincidenceGaussian => {
            num(coincidence_rate(&moments(&p, &b, &k, Basis::Cavity)?).gaussian)
        }
        Kind::WeightSq(m) => num(mode_weight_sq(&b, m)?),
        Kind::Separability(m) => num(separability_of(&quadrature_moments(&b, &k, m)?, pt.gain).value),
        Kind::Gain(m) => num(separability_of(&quadrature_moments(&b, &k, m)?, pt.gain).gain),
        Kind::SeparabilityDamped => num(separability_damped(&p, pt.r)?.value),
        Kind::Steering(m) => num(steering_of(&quadrature_moments(&b, &k, m)?)),
        Kind::SteeringClass => {
            let mut e = [0.0; 4];
            for (slot, m) in Mode::ALL.iter().enumerate() {
                e[slot] = steering_of(&quadrature_moments(&b, &k, *m)?);
            }
            Ok(Cell::Text(classify(&e).label().into()))
        }
        Kind::OracleDeviation => num(compare_to_analytic(&p, pt.r, DEFAULT_TOLERANCE)?.max_relative),
        Kind::OracleZeroBlock => {
            num(compare_to_analytic(&p, pt.r, DEFAULT_TOLERANCE)?.max_zero_block)
        }
        Kind::OracleCommutator => {
            num(compare_to_analytic(&p, pt.r, DEFAULT_TOLERANCE)?.commutator_error)
        }
        Kind::NoisySeparability(m) => {
            let (n, s) = noisy()?;
            num(noisy_separability(&p, s, n, pt.r, m, pt.gain)?.value)
        }
        Kind::NoisyPopulation(m) => {
            let (n, s) = noisy()?;
            num(noisy_moments(&p, s, n, pt.r)?.moments.populations[m.slot()])
        }
        Kind::NoisyMechanicalPopulation => {
            let (n, s) = noisy()?;
            num(noisy_moments(&p, s, n, pt.r)?.moments.mechanical)
        }
    }
}
