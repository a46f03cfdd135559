use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use trimode::scan::{
    emit_csv, output_path, parse_config, preset_names, preset_text, run_sweep, sweep, write_csv,
    ScanSpec,
};
use trimode::Error;

/// Environment variable that redirects every CSV into one directory.
const OUT_DIR_VAR: &str = "TRIMODE_OUT_DIR";

const EXIT_CONFIG: u8 = 1;
const EXIT_EVALUATION: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "trimode", version, about = "Scans of output-mode coherence, entanglement and steering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a configuration file.
    Sweep {
        config: PathBuf,
        /// Write here instead of the configured output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in figure scan.
    Preset {
        /// Preset name; `list` prints the available names.
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare analytic moments with the covariance integrator over the
    /// configured grid and print CSV to stdout.
    Oracle { config: PathBuf },
    /// Steering classification and monogamy check over the psi axis.
    Audit { config: PathBuf },
}

const EXIT_OK: u8 = 0;

fn fail(code: u8, msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    code
}

fn load(path: &Path) -> Result<ScanSpec, u8> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))?;
    parse_spec(&text, &path.display().to_string())
}

fn parse_spec(text: &str, origin: &str) -> Result<ScanSpec, u8> {
    parse_config(text).map_err(|e| match e {
        Error::Config(issues) => {
            for i in &issues {
                eprintln!("{origin}: {i}");
            }
            EXIT_CONFIG
        }
        other => fail(EXIT_CONFIG, other),
    })
}

fn sweep_to_file(spec: &ScanSpec, out: Option<&Path>, dir: Option<&Path>) -> u8 {
    let path = output_path(spec, out, dir);
    let rows = run_sweep(spec);
    if let Err(e) = emit_csv(&path, spec, &rows) {
        return fail(EXIT_IO, e);
    }
    let failed = rows.iter().filter(|r| !r.ok()).count();
    eprintln!("{}: {} rows -> {}", spec.name, rows.len(), path.display());
    if failed > 0 {
        return fail(EXIT_EVALUATION, format!("{failed} rows had evaluation errors"));
    }
    EXIT_OK
}

/// Execute one command; `out_dir` overrides where CSV files go.
fn run(cli: Cli, out_dir: Option<&Path>) -> u8 {
    match cli.command {
        Command::Sweep { config, out } => match load(&config) {
            Ok(spec) => sweep_to_file(&spec, out.as_deref(), out_dir),
            Err(code) => code,
        },
        Command::Preset { name, out } => {
            if name == "list" {
                for n in preset_names() {
                    println!("{n}");
                }
                return EXIT_OK;
            }
            let Some(text) = preset_text(&name) else {
                let known: Vec<_> = preset_names().collect();
                return fail(
                    EXIT_CONFIG,
                    format!("unknown preset `{name}` (known: {})", known.join(", ")),
                );
            };
            match parse_spec(text, &name) {
                Ok(spec) => sweep_to_file(&spec, out.as_deref(), out_dir),
                Err(code) => code,
            }
        }
        Command::Oracle { config } => {
            let spec = match load(&config) {
                Ok(s) => sweep::oracle_spec(&s),
                Err(code) => return code,
            };
            let rows = run_sweep(&spec);
            if let Err(e) = write_csv(io::stdout().lock(), &spec, &rows) {
                return fail(EXIT_IO, e);
            }
            if rows.iter().any(|r| !r.ok()) {
                return EXIT_EVALUATION;
            }
            EXIT_OK
        }
        Command::Audit { config } => {
            let spec = match load(&config) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let report = match sweep::audit(&spec) {
                Ok(r) => r,
                Err(e) => return fail(EXIT_EVALUATION, e),
            };
            let mut counts = [0usize; 3];
            for p in &report.points {
                counts[p.class as usize] += 1;
            }
            let (minima, maxima) = report.coincidence_extrema(false);
            let mut out = io::stdout().lock();
            let printed = writeln!(out, "points: {}", report.points.len())
                .and_then(|_| writeln!(out, "monogamy violations: {}", report.violation_count()))
                .and_then(|_| {
                    writeln!(
                        out,
                        "bipartite: {}  collective: {}  none: {}",
                        counts[0], counts[1], counts[2]
                    )
                })
                .and_then(|_| {
                    let fmt = |idx: &[usize]| {
                        idx.iter()
                            .map(|&i| {
                                let p = &report.points[i];
                                format!("{:.6} ({})", p.psi, p.class.label())
                            })
                            .collect::<Vec<_>>()
                            .join(", ")
                    };
                    writeln!(out, "R12 minima at psi: {}", fmt(&minima))?;
                    writeln!(out, "R12 maxima at psi: {}", fmt(&maxima))
                });
            if let Err(e) = printed {
                return fail(EXIT_IO, e);
            }
            if report.violation_count() > 0 {
                return EXIT_EVALUATION;
            }
            EXIT_OK
        }
    }
}

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => {
            let dir = std::env::var_os(OUT_DIR_VAR).map(PathBuf::from);
            ExitCode::from(run(cli, dir.as_deref()))
        }
        Err(e) => {
            // Usage errors count as configuration errors; help and version are not errors.
            let _ = e.print();
            if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"
[system]
g1 = 1.0
g2 = 1.0
J = 10.0
kappa = 10.0
n0 = 200.0
nm = 200.0

[scan]
name = "small"
r = 5.0
axes = [{ name = "psi", from = 0.0, to = 1.0, points = 41, unit = "pi" }]
quantities = ["pop_1", "E_m_1", "steering_class"]
"#;

    const PSI_AXIS: &str =
        "axes = [{ name = \"psi\", from = 0.0, to = 1.0, points = 41, unit = \"pi\" }]";

    fn exec(args: &[&str], out_dir: Option<&Path>) -> u8 {
        let cli = Cli::try_parse_from(std::iter::once("trimode").chain(args.iter().copied())).unwrap();
        run(cli, out_dir)
    }

    fn write(dir: &Path, name: &str, text: &str) -> String {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    }

    #[test]
    fn sweep_writes_csv() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write(dir.path(), "small.toml", SMALL);
        let out = dir.path().join("a/b/small.csv");
        assert_eq!(exec(&["sweep", &cfg, "--out", out.to_str().unwrap()], None), EXIT_OK);
        let csv = std::fs::read_to_string(&out).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "psi,pop_1,E_m_1,steering_class,status");
        assert_eq!(lines.len(), 42);
        assert!(lines[1..].iter().all(|l| l.ends_with(",ok")));
    }

    #[test]
    fn out_dir_override_keeps_the_file_name() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("collected");
        let code = exec(&["preset", "fig6b", "--out", "elsewhere/fig6b.csv"], Some(&target));
        assert_eq!(code, EXIT_OK);
        assert!(target.join("fig6b.csv").is_file());
        assert!(!Path::new("elsewhere").exists());
    }

    #[test]
    fn repeated_sweeps_are_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write(dir.path(), "small.toml", SMALL);
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        assert_eq!(exec(&["sweep", &cfg, "--out", a.to_str().unwrap()], None), EXIT_OK);
        assert_eq!(exec(&["sweep", &cfg, "--out", b.to_str().unwrap()], None), EXIT_OK);
        assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    }

    #[test]
    fn exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path();
        let bad = write(d, "bad.toml", &SMALL.replace("kappa = 10.0", "kappa = -10.0"));
        assert_eq!(exec(&["sweep", &bad], Some(d)), EXIT_CONFIG);
        assert_eq!(exec(&["preset", "fig99"], Some(d)), EXIT_CONFIG);
        assert_eq!(exec(&["preset", "list"], Some(d)), EXIT_OK);

        let missing = d.join("nowhere.toml");
        assert_eq!(exec(&["sweep", missing.to_str().unwrap()], Some(d)), EXIT_IO);
        let cfg = write(d, "small.toml", SMALL);
        write(d, "blocker", "");
        let blocked = d.join("blocker/x.csv");
        assert_eq!(exec(&["sweep", &cfg, "--out", blocked.to_str().unwrap()], None), EXIT_IO);

        // |U_w| = 1 is out of reach with such unequal couplings.
        let lock = SMALL.replace("g2 = 1.0", "g2 = 0.01").replace(PSI_AXIS, "lock_psi = \"w\"");
        let lock = write(d, "lock.toml", &lock);
        assert_eq!(exec(&["sweep", &lock], Some(d)), EXIT_EVALUATION);
        let csv = std::fs::read_to_string(d.join("small.csv")).unwrap();
        assert!(csv.lines().nth(1).unwrap().contains("precondition"));
    }

    #[test]
    fn usage_errors_are_rejected() {
        assert!(Cli::try_parse_from(["trimode", "sweep"]).is_err());
        assert!(Cli::try_parse_from(["trimode", "frobnicate"]).is_err());
    }

    #[test]
    fn audit_and_oracle() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write(dir.path(), "small.toml", SMALL);
        assert_eq!(exec(&["audit", &cfg], None), EXIT_OK);
        let flat = write(
            dir.path(),
            "flat.toml",
            &SMALL.replace(PSI_AXIS, "axes = [{ name = \"r\", values = [1.0] }]"),
        );
        assert_eq!(exec(&["audit", &flat], None), EXIT_EVALUATION);
        let text = SMALL
            .replace("J = 10.0", "J = 100.0")
            .replace("kappa = 10.0", "kappa = 100.0")
            .replace("r = 5.0", "r = 1.0")
            .replace("points = 41", "points = 2");
        let oracle = write(dir.path(), "o.toml", &text);
        assert_eq!(exec(&["oracle", &oracle], None), EXIT_OK);
    }
}
