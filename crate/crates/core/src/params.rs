//! Parameter types. All rates are dimensionless, measured in units of a
//! reference coupling `g`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Output field modes. `One`/`Two` are the cavity modes, `W`/`U` the
/// superposition (normal) modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    One,
    Two,
    W,
    U,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::One, Mode::Two, Mode::W, Mode::U];

    pub fn label(self) -> &'static str {
        match self {
            Mode::One => "1",
            Mode::Two => "2",
            Mode::W => "w",
            Mode::U => "u",
        }
    }

    pub fn basis(self) -> Basis {
        match self {
            Mode::One | Mode::Two => Basis::Cavity,
            Mode::W | Mode::U => Basis::Superposition,
        }
    }

    /// Index of the mode within its basis pair.
    pub fn slot(self) -> usize {
        match self {
            Mode::One | Mode::W => 0,
            Mode::Two | Mode::U => 1,
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "1" => Some(Mode::One),
            "2" => Some(Mode::Two),
            "w" => Some(Mode::W),
            "u" => Some(Mode::U),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Cavity,
    Superposition,
}

impl Basis {
    pub fn modes(self) -> [Mode; 2] {
        match self {
            Basis::Cavity => [Mode::One, Mode::Two],
            Basis::Superposition => [Mode::W, Mode::U],
        }
    }
}

/// Linearized three-mode system. The coupling phases are split
/// symmetrically: `g1 = |g1| e^{i psi}`, `g2 = |g2| e^{-i psi}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// |g1|
    pub g1: f64,
    /// |g2|
    pub g2: f64,
    pub psi: f64,
    /// Inter-cavity tunnelling.
    pub j: f64,
    /// Half the cavity-frequency splitting.
    pub delta: f64,
    pub kappa: f64,
    /// Mechanical damping.
    pub gamma: f64,
    /// Initial mechanical occupation.
    pub n0: f64,
    /// Thermal bath occupation.
    pub nm: f64,
}

impl SystemParams {
    /// Every violated constraint as `(field, reason)`.
    pub fn violations(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let fields: [(&'static str, f64, bool); 9] = [
            ("g1", self.g1, false),
            ("g2", self.g2, false),
            ("psi", self.psi, true),
            ("J", self.j, false),
            ("Delta", self.delta, true),
            ("kappa", self.kappa, false),
            ("gamma", self.gamma, false),
            ("n0", self.n0, false),
            ("nm", self.nm, false),
        ];
        for (name, v, signed) in fields {
            if !v.is_finite() {
                out.push((name, format!("must be finite, got {v}")));
            } else if !signed && v < 0.0 {
                out.push((name, format!("must be non-negative, got {v}")));
            }
        }
        if self.kappa.is_finite() && self.kappa == 0.0 {
            out.push(("kappa", "must be positive".to_string()));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().into_iter().next() {
            Some((name, reason)) => Err(invalid(name, reason)),
            None => Ok(()),
        }
    }

    pub fn with_psi(mut self, psi: f64) -> Self {
        self.psi = psi;
        self
    }
}

/// Classical drive and single-photon couplings used for the steady state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveSpec {
    pub e01: f64,
    pub e02: f64,
    pub phi01: f64,
    pub phi02: f64,
    pub g01: f64,
    pub g02: f64,
    pub omega_m: f64,
}

impl DriveSpec {
    pub fn violations(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        for (name, v) in [
            ("E01", self.e01),
            ("E02", self.e02),
            ("phi01", self.phi01),
            ("phi02", self.phi02),
            ("g01", self.g01),
            ("g02", self.g02),
            ("omega_m", self.omega_m),
        ] {
            if !v.is_finite() {
                out.push((name, format!("must be finite, got {v}")));
            }
        }
        if self.omega_m.is_finite() && self.omega_m <= 0.0 {
            out.push(("omega_m", "must be positive".to_string()));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().into_iter().next() {
            Some((name, reason)) => Err(invalid(name, reason)),
            None => Ok(()),
        }
    }
}
