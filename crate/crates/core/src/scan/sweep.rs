//! Grid expansion, parallel row evaluation and CSV output.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{lock_psi, superposition_basis};
use crate::noise::NoiseSpec;
use crate::scan::config::{AxisKind, DriveSetup, ScanSpec};
use crate::scan::quantity::{evaluate, Cell, Kind, Point, Quantity};
use crate::steady::{drive_for_amplitudes, steady_state, SteadyState};
use crate::steering::{monogamy_audit, MonogamyReport};

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    /// Axis values in the order of `ScanSpec::axes`.
    pub axes: Vec<f64>,
    /// One entry per quantity; `None` where evaluation failed.
    pub cells: Vec<Option<Cell>>,
    /// Empty when every quantity evaluated.
    pub errors: Vec<String>,
}

impl Row {
    pub fn ok(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn status(&self) -> String {
        if self.ok() {
            "ok".into()
        } else {
            self.errors.join("; ")
        }
    }

    pub fn number(&self, i: usize) -> Option<f64> {
        match self.cells.get(i)? {
            Some(Cell::Number(v)) => Some(*v),
            _ => None,
        }
    }
}

/// All grid points, first axis outermost.
pub fn grid_points(spec: &ScanSpec) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in &spec.axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(*v);
                    p
                })
            })
            .collect();
    }
    out
}

/// Parameters at one grid point.
pub fn point_at(spec: &ScanSpec, values: &[f64]) -> Result<Point> {
    let mut p = spec.system;
    let mut r = spec.r;
    let mut f = spec.gamma_over_gain;
    let mut noise: Option<NoiseSpec> = spec.noise;
    for (axis, &v) in spec.axes.iter().zip(values) {
        match axis.kind {
            AxisKind::Psi => p.psi = v,
            AxisKind::R => r = v,
            AxisKind::GammaOverG => f = Some(v),
            AxisKind::N => {
                p.n0 = v;
                p.nm = v;
            }
            AxisKind::GammaC => {
                let g_hz = spec.g_hz.expect("validated with gamma_c axis");
                if let Some(n) = noise.as_mut() {
                    n.gamma_c = v / g_hz;
                }
            }
        }
    }
    if let Some(f) = f {
        // G = G0 - gamma, so gamma = f G needs gamma = f G0 / (1 + f).
        p.gamma = 0.0;
        let g0 = superposition_basis(&p)?.gain;
        p.gamma = f * g0 / (1.0 + f);
    }
    if let Some(mode) = spec.lock_psi {
        p.psi = lock_psi(&p, mode)?;
    }
    let steady = match &spec.drive {
        None => None,
        Some(setup) => Some(solve_drive(&p, setup)?),
    };
    Ok(Point {
        params: p,
        r,
        gain: spec.gain,
        noise,
        steady,
    })
}

fn solve_drive(p: &crate::SystemParams, setup: &DriveSetup) -> Result<SteadyState> {
    let drive = match setup {
        DriveSetup::Explicit(d) => *d,
        DriveSetup::Consistent { g0, omega_m } => {
            let alpha = [
                Complex64::from_polar(p.g1 / g0[0], p.psi),
                Complex64::from_polar(p.g2 / g0[1], -p.psi),
            ];
            drive_for_amplitudes(p, alpha, *g0, *omega_m)?
        }
        DriveSetup::Target { alpha, g0, omega_m } => drive_for_amplitudes(p, *alpha, *g0, *omega_m)?,
    };
    steady_state(p, &drive)
}

fn evaluate_row(spec: &ScanSpec, values: Vec<f64>) -> Row {
    let n = spec.quantities.len();
    match point_at(spec, &values) {
        Err(e) => Row {
            axes: values,
            cells: vec![None; n],
            errors: vec![e.to_string()],
        },
        Ok(pt) => {
            let mut cells = Vec::with_capacity(n);
            let mut errors = Vec::new();
            for q in &spec.quantities {
                match evaluate(q, &pt) {
                    Ok(c) => cells.push(Some(c)),
                    Err(e) => {
                        cells.push(None);
                        errors.push(format!("{}: {e}", q.name()));
                    }
                }
            }
            Row {
                axes: values,
                cells,
                errors,
            }
        }
    }
}

/// Evaluate every grid point. Rows come back in grid order regardless of
/// how the work was scheduled; failures are recorded per row.
pub fn run_sweep(spec: &ScanSpec) -> Vec<Row> {
    grid_points(spec)
        .into_par_iter()
        .map(|values| evaluate_row(spec, values))
        .collect()
}

pub fn header(spec: &ScanSpec) -> Vec<String> {
    let mut h: Vec<String> = spec.axes.iter().map(|a| a.kind.name().to_string()).collect();
    h.extend(spec.quantities.iter().map(Quantity::name));
    h.push("status".into());
    h
}

fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write the header and rows as CSV with LF line endings.
pub fn write_csv<W: Write>(out: W, spec: &ScanSpec, rows: &[Row]) -> std::result::Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header(spec))?;
    for row in rows {
        let mut rec: Vec<String> = row.axes.iter().map(|v| format_number(*v)).collect();
        for c in &row.cells {
            rec.push(match c {
                Some(Cell::Number(v)) => format_number(*v),
                Some(Cell::Text(s)) => s.clone(),
                None => String::new(),
            });
        }
        rec.push(row.status());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(path: &Path, spec: &ScanSpec, rows: &[Row]) -> Result<()> {
    let io = |source: std::io::Error| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    let file = File::create(path).map_err(io)?;
    write_csv(file, spec, rows).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => io(source),
        other => io(std::io::Error::other(format!("{other:?}"))),
    })
}

/// Where a sweep writes: an explicit path wins, then the configured output,
/// then `<name>.csv`. A directory override keeps only the file name.
pub fn output_path(spec: &ScanSpec, explicit: Option<&Path>, dir_override: Option<&Path>) -> PathBuf {
    let base = explicit
        .map(Path::to_path_buf)
        .or_else(|| spec.output.clone())
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", spec.name)));
    match dir_override {
        Some(dir) => dir.join(base.file_name().unwrap_or(base.as_os_str())),
        None => base,
    }
}

/// The same grid with the oracle comparison columns in place of the
/// configured quantities.
pub fn oracle_spec(spec: &ScanSpec) -> ScanSpec {
    let mut s = spec.clone();
    s.quantities = [Kind::OracleDeviation, Kind::OracleZeroBlock, Kind::OracleCommutator]
        .into_iter()
        .map(|kind| Quantity {
            kind,
            uncoupled: false,
        })
        .collect();
    s
}

/// Monogamy report over the configured psi axis at the configured r.
pub fn audit(spec: &ScanSpec) -> Result<MonogamyReport> {
    let psis = match spec.axes.iter().find(|a| a.kind == AxisKind::Psi) {
        Some(a) => a.values.clone(),
        None => {
            return Err(Error::Precondition(
                "the monogamy audit needs a psi axis".into(),
            ))
        }
    };
    if spec.axes.len() != 1 {
        return Err(Error::Precondition(
            "the monogamy audit scans psi only".into(),
        ));
    }
    let pt = point_at(spec, &[psis[0]])?;
    monogamy_audit(&pt.params, pt.r, &psis)
}
