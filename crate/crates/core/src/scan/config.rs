//! Scan configuration files.
//!
//! ```toml
//! [system]            # rates in units of the reference coupling g
//! g1 = 1.0
//! g2 = 1.0
//! psi = 0.0           # or psi_pi = 0.25
//! J = 10.0
//! Delta = 0.0
//! kappa = 10.0
//! gamma = 0.0         # or gamma_over_G = 0.25
//! n0 = 200.0
//! nm = 200.0          # or n = 200.0 for both
//! g_hz = 1e5          # reference coupling in Hz, needed for [noise]
//!
//! [drive]             # optional; g01/g02 in Hz
//! # Without further keys the amplitudes follow from alpha_j = g_j / g0_j.
//! # Otherwise give real target amplitudes alpha1/alpha2 or the drive
//! # fields E01/E02/phi01/phi02.
//! g01 = 10.0
//! g02 = 10.0
//! omega_m = 15.5
//!
//! [noise]             # optional; Hz
//! Gamma_l = 1e3
//! gamma_c = 1.0
//!
//! [scan]
//! r = 5.0
//! gain = "optimal"    # or a number
//! lock_psi = "w"      # optional: choose psi so that |U_w| = 1
//! axes = [{ name = "psi", from = 0.0, to = 1.0, points = 721, unit = "pi" }]
//! quantities = ["pop_1", "pop_2"]
//! output = "out.csv"
//! ```

use std::path::PathBuf;

use num_complex::Complex64;
use toml::{Table, Value};

use crate::entanglement::Gain;
use crate::error::{ConfigIssue, Error, Result};
use crate::noise::NoiseSpec;
use crate::params::{DriveSpec, Mode, SystemParams};
use crate::scan::presets::preset_text;
use crate::scan::quantity::Quantity;

pub const MAX_AXES: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisKind {
    Psi,
    R,
    GammaOverG,
    N,
    GammaC,
}

impl AxisKind {
    pub fn parse(s: &str) -> Option<AxisKind> {
        match s {
            "psi" => Some(AxisKind::Psi),
            "r" => Some(AxisKind::R),
            "gamma_over_G" => Some(AxisKind::GammaOverG),
            "n" => Some(AxisKind::N),
            "gamma_c" => Some(AxisKind::GammaC),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AxisKind::Psi => "psi",
            AxisKind::R => "r",
            AxisKind::GammaOverG => "gamma_over_G",
            AxisKind::N => "n",
            AxisKind::GammaC => "gamma_c",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub kind: AxisKind,
    /// Values in the units written to the CSV (radians for psi, Hz for
    /// gamma_c).
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DriveSetup {
    Explicit(DriveSpec),
    /// Drive solved for the amplitudes `alpha_j = g_j / g0_j` implied by
    /// the system couplings, phases included.
    Consistent { g0: [f64; 2], omega_m: f64 },
    /// Drive solved for the requested intracavity amplitudes.
    Target {
        alpha: [Complex64; 2],
        g0: [f64; 2],
        omega_m: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub name: String,
    pub system: SystemParams,
    /// When set, `system.gamma` is derived per point as `f G`.
    pub gamma_over_gain: Option<f64>,
    pub r: f64,
    pub gain: Gain,
    pub lock_psi: Option<Mode>,
    /// Reference coupling in Hz.
    pub g_hz: Option<f64>,
    pub drive: Option<DriveSetup>,
    /// Noise in units of g.
    pub noise: Option<NoiseSpec>,
    pub axes: Vec<Axis>,
    pub quantities: Vec<Quantity>,
    pub output: Option<PathBuf>,
}

struct Reader<'a> {
    text: &'a str,
    issues: Vec<ConfigIssue>,
}

impl<'a> Reader<'a> {
    fn line_of(&self, section: &str, key: &str) -> Option<usize> {
        let mut current = String::new();
        for (i, raw) in self.text.lines().enumerate() {
            let line = raw.trim();
            if let Some(rest) = line.strip_prefix('[') {
                current = rest.trim_end_matches(']').trim().to_string();
                if key.is_empty() && current == section {
                    return Some(i + 1);
                }
                continue;
            }
            if current == section && !key.is_empty() {
                if let Some(after) = line.strip_prefix(key) {
                    let after = after.trim_start();
                    if after.starts_with('=') {
                        return Some(i + 1);
                    }
                }
            }
        }
        None
    }

    fn issue(&mut self, section: &str, key: &str, message: impl Into<String>) {
        let path = if key.is_empty() {
            section.to_string()
        } else if section.is_empty() {
            key.to_string()
        } else {
            format!("{section}.{key}")
        };
        let line = self.line_of(section, key);
        self.issues.push(ConfigIssue {
            key: path,
            line,
            message: message.into(),
        });
    }

    fn number(&mut self, t: &Table, section: &str, key: &str) -> Option<f64> {
        match t.get(key)? {
            Value::Float(f) => Some(*f),
            Value::Integer(i) => Some(*i as f64),
            other => {
                self.issue(section, key, format!("expected a number, got {}", other.type_str()));
                None
            }
        }
    }

    fn required(&mut self, t: &Table, section: &str, key: &str) -> Option<f64> {
        if !t.contains_key(key) {
            self.issue(section, key, "missing required key");
            return None;
        }
        self.number(t, section, key)
    }

    fn unknown_keys(&mut self, t: &Table, section: &str, allowed: &[&str]) {
        for k in t.keys() {
            if !allowed.contains(&k.as_str()) {
                self.issue(section, k, "unknown key");
            }
        }
    }
}

/// Replace keys of `base` by those of `top`, one section deep.
fn overlay(base: &mut Table, top: Table) {
    for (k, v) in top {
        match (base.get_mut(&k), v) {
            (Some(Value::Table(b)), Value::Table(t)) => {
                for (kk, vv) in t {
                    b.insert(kk, vv);
                }
            }
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

fn section<'t>(root: &'t Table, name: &str, r: &mut Reader) -> Option<&'t Table> {
    match root.get(name) {
        Some(Value::Table(t)) => Some(t),
        Some(_) => {
            r.issue(name, "", "expected a table");
            None
        }
        None => None,
    }
}

const SYSTEM_KEYS: &[&str] = &[
    "g1", "g2", "psi", "psi_pi", "J", "Delta", "kappa", "gamma", "gamma_over_G", "n0", "nm", "n",
    "g_hz",
];
const DRIVE_KEYS: &[&str] = &[
    "E01", "E02", "phi01", "phi02", "alpha1", "alpha2", "g01", "g02", "omega_m",
];
const NOISE_KEYS: &[&str] = &["Gamma_l", "gamma_c"];
const SCAN_KEYS: &[&str] = &["name", "r", "gain", "lock_psi", "axes", "quantities", "output"];

/// Parse and validate a configuration, reporting every problem found.
pub fn parse_config(text: &str) -> Result<ScanSpec> {
    let mut root: Table = toml::from_str(text).map_err(|e| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1);
        Error::Config(vec![ConfigIssue {
            key: "<syntax>".into(),
            line,
            message: e.message().to_string(),
        }])
    })?;
    let mut r = Reader {
        text,
        issues: Vec::new(),
    };
    match root.remove("preset") {
        None => {}
        Some(Value::String(name)) => match preset_text(&name) {
            Some(base) => {
                let mut merged: Table = toml::from_str(base).expect("presets are valid TOML");
                overlay(&mut merged, root);
                root = merged;
            }
            None => r.issue("", "preset", format!("unknown preset `{name}`")),
        },
        Some(_) => r.issue("", "preset", "expected a preset name"),
    }
    for key in root.keys() {
        if !["system", "drive", "noise", "scan"].contains(&key.as_str()) {
            r.issue(key, "", "unknown section");
        }
    }

    let empty = Table::new();
    let sys = match section(&root, "system", &mut r) {
        Some(t) => t,
        None => {
            if !root.contains_key("system") {
                r.issue("system", "", "missing required section");
            }
            &empty
        }
    };
    r.unknown_keys(sys, "system", SYSTEM_KEYS);
    let g1 = r.required(sys, "system", "g1");
    let g2 = r.required(sys, "system", "g2");
    let psi = match (sys.contains_key("psi"), sys.contains_key("psi_pi")) {
        (true, true) => {
            r.issue("system", "psi_pi", "give either psi or psi_pi, not both");
            None
        }
        (false, true) => r.number(sys, "system", "psi_pi").map(|v| v * std::f64::consts::PI),
        (true, false) => r.number(sys, "system", "psi"),
        (false, false) => Some(0.0),
    };
    let j = r.required(sys, "system", "J");
    let delta = r.number(sys, "system", "Delta").or(Some(0.0));
    let kappa = r.required(sys, "system", "kappa");
    let (gamma, gamma_over_gain) =
        match (sys.contains_key("gamma"), sys.contains_key("gamma_over_G")) {
            (true, true) => {
                r.issue("system", "gamma_over_G", "give either gamma or gamma_over_G, not both");
                (None, None)
            }
            (false, true) => {
                let f = r.number(sys, "system", "gamma_over_G");
                if let Some(v) = f {
                    if !(v.is_finite() && v >= 0.0) {
                        r.issue("system", "gamma_over_G", "must be non-negative");
                    }
                }
                (Some(0.0), f)
            }
            (true, false) => (r.number(sys, "system", "gamma"), None),
            (false, false) => (Some(0.0), None),
        };
    let (n0, nm) = if sys.contains_key("n") {
        if sys.contains_key("n0") || sys.contains_key("nm") {
            r.issue("system", "n", "give either n or n0/nm, not both");
        }
        let n = r.number(sys, "system", "n");
        (n, n)
    } else {
        (r.required(sys, "system", "n0"), r.required(sys, "system", "nm"))
    };
    let g_hz = r.number(sys, "system", "g_hz");
    if let Some(v) = g_hz {
        if !(v.is_finite() && v > 0.0) {
            r.issue("system", "g_hz", "must be positive");
        }
    }

    let mut system = None;
    if let (Some(g1), Some(g2), Some(psi), Some(j), Some(delta), Some(kappa), Some(gamma), Some(n0), Some(nm)) =
        (g1, g2, psi, j, delta, kappa, gamma, n0, nm)
    {
        let p = SystemParams {
            g1,
            g2,
            psi,
            j,
            delta,
            kappa,
            gamma,
            n0,
            nm,
        };
        for (field, reason) in p.violations() {
            r.issue("system", field, reason);
        }
        system = Some(p);
    }

    let hz = |v: f64| g_hz.map(|g| v / g);

    let drive = match section(&root, "drive", &mut r) {
        None => None,
        Some(t) => {
            r.unknown_keys(t, "drive", DRIVE_KEYS);
            let g0_hz = [r.required(t, "drive", "g01"), r.required(t, "drive", "g02")];
            let omega_m = r.required(t, "drive", "omega_m");
            if g_hz.is_none() {
                r.issue("system", "g_hz", "required when [drive] gives couplings in Hz");
            }
            let targets = t.contains_key("alpha1") || t.contains_key("alpha2");
            let explicit = ["E01", "E02", "phi01", "phi02"]
                .iter()
                .any(|k| t.contains_key(*k));
            if targets && explicit {
                r.issue("drive", "alpha1", "give target amplitudes or drive fields, not both");
                None
            } else if let (Some(a), Some(b), Some(om)) = (g0_hz[0], g0_hz[1], omega_m) {
                let g0 = [hz(a).unwrap_or(f64::NAN), hz(b).unwrap_or(f64::NAN)];
                if targets {
                    let a1 = r.required(t, "drive", "alpha1");
                    let a2 = r.required(t, "drive", "alpha2");
                    match (a1, a2) {
                        (Some(a1), Some(a2)) => Some(DriveSetup::Target {
                            alpha: [Complex64::new(a1, 0.0), Complex64::new(a2, 0.0)],
                            g0,
                            omega_m: om,
                        }),
                        _ => None,
                    }
                } else if !explicit {
                    Some(DriveSetup::Consistent { g0, omega_m: om })
                } else {
                    let e01 = r.required(t, "drive", "E01");
                    let e02 = r.required(t, "drive", "E02");
                    let phi01 = r.number(t, "drive", "phi01").unwrap_or(0.0);
                    let phi02 = r.number(t, "drive", "phi02").unwrap_or(0.0);
                    match (e01, e02) {
                        (Some(e01), Some(e02)) => {
                            let d = DriveSpec {
                                e01,
                                e02,
                                phi01,
                                phi02,
                                g01: g0[0],
                                g02: g0[1],
                                omega_m: om,
                            };
                            for (field, reason) in d.violations() {
                                if g_hz.is_some() || !field.starts_with("g0") {
                                    r.issue("drive", field, reason);
                                }
                            }
                            Some(DriveSetup::Explicit(d))
                        }
                        _ => None,
                    }
                }
            } else {
                None
            }
        }
    };

    let noise = match section(&root, "noise", &mut r) {
        None => None,
        Some(t) => {
            r.unknown_keys(t, "noise", NOISE_KEYS);
            let lw = r.required(t, "noise", "Gamma_l");
            let gc = r.number(t, "noise", "gamma_c");
            if g_hz.is_none() {
                r.issue("system", "g_hz", "required when [noise] is present");
            }
            match (lw, g_hz) {
                (Some(lw), Some(_)) => {
                    let n = NoiseSpec {
                        linewidth: hz(lw).unwrap(),
                        gamma_c: gc.and_then(hz).unwrap_or(f64::NAN),
                    };
                    if !(lw.is_finite() && lw >= 0.0) {
                        r.issue("noise", "Gamma_l", "must be non-negative");
                    }
                    if let Some(v) = gc {
                        if !(v.is_finite() && v > 0.0) {
                            r.issue("noise", "gamma_c", "must be positive");
                        }
                    }
                    Some(n)
                }
                _ => None,
            }
        }
    };

    let scan = match section(&root, "scan", &mut r) {
        Some(t) => t,
        None => {
            if !root.contains_key("scan") {
                r.issue("scan", "", "missing required section");
            }
            &empty
        }
    };
    r.unknown_keys(scan, "scan", SCAN_KEYS);
    let name = match scan.get("name") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => {
            r.issue("scan", "name", "expected a string");
            String::new()
        }
        None => String::from("scan"),
    };
    let rr = r.number(scan, "scan", "r");
    let gain = match scan.get("gain") {
        None => Gain::Optimal,
        Some(Value::String(s)) if s == "optimal" => Gain::Optimal,
        Some(Value::Float(h)) => Gain::Fixed(*h),
        Some(Value::Integer(h)) => Gain::Fixed(*h as f64),
        Some(_) => {
            r.issue("scan", "gain", "expected \"optimal\" or a number");
            Gain::Optimal
        }
    };
    if let Gain::Fixed(h) = gain {
        if !(h.is_finite() && h >= 0.0) {
            r.issue("scan", "gain", "must be non-negative");
        }
    }
    let lock_psi = match scan.get("lock_psi") {
        None => None,
        Some(Value::String(s)) if s == "w" || s == "u" => Mode::parse(s),
        Some(_) => {
            r.issue("scan", "lock_psi", "expected \"w\" or \"u\"");
            None
        }
    };
    let output = match scan.get("output") {
        None => None,
        Some(Value::String(s)) => Some(PathBuf::from(s)),
        Some(_) => {
            r.issue("scan", "output", "expected a string path");
            None
        }
    };

    let mut axes = Vec::new();
    match scan.get("axes") {
        None => {}
        Some(Value::Array(list)) => {
            if list.len() > MAX_AXES {
                r.issue(
                    "scan",
                    "axes",
                    format!("at most {MAX_AXES} axes are supported, got {}", list.len()),
                );
            }
            for item in list {
                match item {
                    Value::Table(t) => {
                        if let Some(a) = parse_axis(t, &mut r, g_hz) {
                            axes.push(a);
                        }
                    }
                    _ => r.issue("scan", "axes", "each axis must be an inline table"),
                }
            }
        }
        Some(_) => r.issue("scan", "axes", "expected an array of axis tables"),
    }
    for (i, a) in axes.iter().enumerate() {
        if axes[..i].iter().any(|b| b.kind == a.kind) {
            r.issue("scan", "axes", format!("axis `{}` given twice", a.kind.name()));
        }
    }
    let has_axis = |k: AxisKind| axes.iter().any(|a| a.kind == k);
    if rr.is_none() && !has_axis(AxisKind::R) {
        r.issue("scan", "r", "missing: give scan.r or an `r` axis");
    }
    if let Some(v) = rr {
        if !(v.is_finite() && v >= 0.0) {
            r.issue("scan", "r", "must be non-negative");
        }
    }
    if has_axis(AxisKind::GammaC) && noise.is_none() {
        r.issue("scan", "axes", "a gamma_c axis needs a [noise] section");
    }
    if lock_psi.is_some() && has_axis(AxisKind::Psi) {
        r.issue("scan", "lock_psi", "cannot lock psi while scanning it");
    }
    if let Some(n) = &noise {
        if n.gamma_c.is_nan() && !has_axis(AxisKind::GammaC) {
            r.issue("noise", "gamma_c", "missing: give noise.gamma_c or a gamma_c axis");
        }
    }

    let mut quantities = Vec::new();
    match scan.get("quantities") {
        Some(Value::Array(list)) if !list.is_empty() => {
            for item in list {
                match item.as_str() {
                    Some(s) => match Quantity::parse(s) {
                        Some(q) => {
                            if q.kind.needs_noise() && (noise.is_none() || drive.is_none()) {
                                r.issue(
                                    "scan",
                                    "quantities",
                                    format!("`{s}` needs [noise] and [drive] sections"),
                                );
                            }
                            quantities.push(q);
                        }
                        None => r.issue("scan", "quantities", format!("unknown quantity `{s}`")),
                    },
                    None => r.issue("scan", "quantities", "quantity names must be strings"),
                }
            }
        }
        Some(Value::Array(_)) => r.issue("scan", "quantities", "list at least one quantity"),
        Some(_) => r.issue("scan", "quantities", "expected an array of names"),
        None => r.issue("scan", "quantities", "missing required key"),
    }

    if !r.issues.is_empty() {
        return Err(Error::Config(r.issues));
    }
    Ok(ScanSpec {
        name,
        system: system.expect("validated"),
        gamma_over_gain,
        r: rr.unwrap_or(f64::NAN),
        gain,
        lock_psi,
        g_hz,
        drive,
        noise,
        axes,
        quantities,
        output,
    })
}

fn parse_axis(t: &Table, r: &mut Reader, g_hz: Option<f64>) -> Option<Axis> {
    let kind = match t.get("name").and_then(Value::as_str) {
        Some(s) => match AxisKind::parse(s) {
            Some(k) => k,
            None => {
                r.issue(
                    "scan",
                    "axes",
                    format!("unknown axis `{s}` (allowed: psi, r, gamma_over_G, n, gamma_c)"),
                );
                return None;
            }
        },
        None => {
            r.issue("scan", "axes", "axis needs a string `name`");
            return None;
        }
    };
    for k in t.keys() {
        if !["name", "from", "to", "points", "values", "spacing", "unit"].contains(&k.as_str()) {
            r.issue("scan", "axes", format!("unknown axis key `{k}`"));
        }
    }
    let scale = match t.get("unit").and_then(Value::as_str) {
        None => 1.0,
        Some("pi") => std::f64::consts::PI,
        Some(other) => {
            r.issue("scan", "axes", format!("unknown axis unit `{other}`"));
            1.0
        }
    };
    let num = |v: &Value| v.as_float().or_else(|| v.as_integer().map(|i| i as f64));
    let values: Vec<f64> = if let Some(vals) = t.get("values") {
        match vals.as_array() {
            Some(list) if !list.is_empty() => {
                let parsed: Option<Vec<f64>> = list.iter().map(num).collect();
                match parsed {
                    Some(v) => v.into_iter().map(|x| x * scale).collect(),
                    None => {
                        r.issue("scan", "axes", "axis values must be numbers");
                        return None;
                    }
                }
            }
            _ => {
                r.issue("scan", "axes", "axis `values` must be a non-empty array");
                return None;
            }
        }
    } else {
        let from = t.get("from").and_then(num);
        let to = t.get("to").and_then(num);
        let points = t.get("points").and_then(Value::as_integer);
        let (Some(from), Some(to), Some(points)) = (from, to, points) else {
            r.issue(
                "scan",
                "axes",
                format!("axis `{}` needs from, to, points or values", kind.name()),
            );
            return None;
        };
        if points < 1 {
            r.issue("scan", "axes", "points must be at least 1");
            return None;
        }
        let log = match t.get("spacing").and_then(Value::as_str) {
            None | Some("linear") => false,
            Some("log") => true,
            Some(other) => {
                r.issue("scan", "axes", format!("unknown spacing `{other}`"));
                return None;
            }
        };
        if log && !(from > 0.0 && to > 0.0) {
            r.issue("scan", "axes", "log spacing needs positive bounds");
            return None;
        }
        grid(from, to, points as usize, log)
            .into_iter()
            .map(|x| x * scale)
            .collect()
    };
    if values.iter().any(|v| !v.is_finite()) {
        r.issue("scan", "axes", "axis values must be finite");
        return None;
    }
    let bad = match kind {
        AxisKind::R | AxisKind::N | AxisKind::GammaOverG => values.iter().any(|v| *v < 0.0),
        AxisKind::GammaC => values.iter().any(|v| *v <= 0.0),
        AxisKind::Psi => false,
    };
    if bad {
        r.issue("scan", "axes", format!("axis `{}` has out-of-range values", kind.name()));
        return None;
    }
    if kind == AxisKind::GammaC && g_hz.is_none() {
        r.issue("system", "g_hz", "required for a gamma_c axis (Hz)");
    }
    Some(Axis { kind, values })
}

/// `points` values from `from` to `to` inclusive.
pub fn grid(from: f64, to: f64, points: usize, log: bool) -> Vec<f64> {
    if points == 1 {
        return vec![from];
    }
    let n = (points - 1) as f64;
    (0..points)
        .map(|i| {
            let t = i as f64 / n;
            if i == 0 {
                from
            } else if i == points - 1 {
                to
            } else if log {
                (from.ln() + t * (to.ln() - from.ln())).exp()
            } else {
                from + t * (to - from)
            }
        })
        .collect()
}
