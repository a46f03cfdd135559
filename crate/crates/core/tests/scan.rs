use std::f64::consts::PI;

use trimode::entanglement::Gain;
use trimode::scan::config::{grid, AxisKind, DriveSetup};
use trimode::scan::sweep::{grid_points, header, point_at};
use trimode::scan::{parse_config, preset_names, preset_text, run_sweep, write_csv, Cell};
use trimode::{Error, Mode};

const MINIMAL: &str = r#"
[system]
g1 = 1.0
g2 = 1.0
J = 10.0
kappa = 10.0
n0 = 200.0
nm = 200.0

[scan]
r = 2.0
quantities = ["pop_1", "Delta_m_w"]
"#;

fn issues(text: &str) -> Vec<(String, Option<usize>, String)> {
    match parse_config(text) {
        Err(Error::Config(list)) => list.into_iter().map(|i| (i.key, i.line, i.message)).collect(),
        Err(e) => panic!("unexpected error {e}"),
        Ok(_) => panic!("config was accepted"),
    }
}

fn csv_bytes(text: &str) -> Vec<u8> {
    let spec = parse_config(text).unwrap();
    let rows = run_sweep(&spec);
    let mut out = Vec::new();
    write_csv(&mut out, &spec, &rows).unwrap();
    out
}

#[test]
fn defaults() {
    let s = parse_config(MINIMAL).unwrap();
    assert_eq!(s.name, "scan");
    assert_eq!(s.system.psi, 0.0);
    assert_eq!(s.system.delta, 0.0);
    assert_eq!(s.system.gamma, 0.0);
    assert_eq!(s.gain, Gain::Optimal);
    assert!(s.axes.is_empty() && s.drive.is_none() && s.noise.is_none() && s.lock_psi.is_none());
    assert_eq!(grid_points(&s), vec![Vec::<f64>::new()]);
    let rows = run_sweep(&s);
    assert_eq!(rows.len(), 1);
    assert!(rows[0].ok());
}

#[test]
fn bad_value_is_reported_with_its_line() {
    let text = MINIMAL.replace("kappa = 10.0", "kappa = -1.0");
    let list = issues(&text);
    assert_eq!(list.len(), 1);
    let (key, line, _) = &list[0];
    assert_eq!(key, "system.kappa");
    assert_eq!(*line, Some(6));
    let shown = parse_config(&text).unwrap_err().to_string();
    assert!(shown.contains("line 6: system.kappa"), "{shown}");
}

#[test]
fn every_problem_is_reported() {
    let text = r#"
[system]
g1 = 1.0
g2 = "two"
J = 10.0
kappa = 10.0
n0 = 200.0
nm = 200.0
colour = 3

[extra]

[scan]
r = 2.0
quantities = ["pop_1", "nonsense"]
"#;
    let keys: Vec<String> = issues(text).into_iter().map(|(k, _, _)| k).collect();
    for want in ["system.g2", "system.colour", "extra", "scan.quantities"] {
        assert!(keys.iter().any(|k| k == want), "{want} missing from {keys:?}");
    }
}

#[test]
fn missing_sections_and_keys() {
    let keys: Vec<String> = issues("[scan]\nr = 1.0\nquantities = [\"V\"]\n")
        .into_iter()
        .map(|(k, _, _)| k)
        .collect();
    assert!(keys.contains(&"system".to_string()));
    let text = MINIMAL.replace("r = 2.0\n", "");
    assert_eq!(issues(&text)[0].0, "scan.r");
    let text = MINIMAL.replace("J = 10.0\n", "");
    assert_eq!(issues(&text)[0].0, "system.J");
}

#[test]
fn syntax_errors_carry_a_line() {
    let list = issues("[system]\ng1 = = 1\n");
    assert_eq!(list[0].0, "<syntax>");
    assert_eq!(list[0].1, Some(2));
}

#[test]
fn conflicting_keys_are_rejected() {
    let text = MINIMAL.replace("n0 = 200.0", "n0 = 200.0\nn = 3.0");
    assert_eq!(issues(&text)[0].0, "system.n");
    let text = MINIMAL.replace("J = 10.0", "J = 10.0\npsi = 0.1\npsi_pi = 0.5");
    assert_eq!(issues(&text)[0].0, "system.psi_pi");
    let text = MINIMAL.replace("J = 10.0", "J = 10.0\ngamma = 0.1\ngamma_over_G = 0.5");
    assert_eq!(issues(&text)[0].0, "system.gamma_over_G");
}

#[test]
fn axes_are_parsed() {
    let text = MINIMAL.replace(
        "r = 2.0",
        "r = 2.0\naxes = [{ name = \"psi\", from = 0.0, to = 0.5, points = 3, unit = \"pi\" },\n        { name = \"n\", values = [0, 10] }]",
    );
    let s = parse_config(&text).unwrap();
    assert_eq!(s.axes.len(), 2);
    assert_eq!(s.axes[0].kind, AxisKind::Psi);
    assert_eq!(s.axes[0].values, vec![0.0, 0.25 * PI, 0.5 * PI]);
    assert_eq!(s.axes[1].values, vec![0.0, 10.0]);
    let pts = grid_points(&s);
    assert_eq!(pts.len(), 6);
    assert_eq!(pts[1], vec![0.0, 10.0]);
    assert_eq!(pts[2], vec![0.25 * PI, 0.0]);
    let pt = point_at(&s, &pts[3]).unwrap();
    assert_eq!(pt.params.nm, 10.0);
    assert_eq!(pt.params.n0, 10.0);
    assert_eq!(header(&s), ["psi", "n", "pop_1", "Delta_m_w", "status"]);
}

#[test]
fn axis_errors() {
    for (axes, fragment) in [
        ("[{ name = \"omega\", values = [1] }]", "unknown axis"),
        ("[{ name = \"r\", from = 0, to = 1 }]", "needs from, to, points"),
        ("[{ name = \"r\", values = [-1] }]", "out-of-range"),
        ("[{ name = \"r\", from = 0, to = 1, points = 2, spacing = \"log\" }]", "positive bounds"),
        ("[{ name = \"r\", values = [1] }, { name = \"r\", values = [2] }]", "twice"),
        (
            "[{ name = \"r\", values = [1] }, { name = \"n\", values = [1] }, { name = \"psi\", values = [1] }]",
            "at most 2",
        ),
        ("[{ name = \"gamma_c\", values = [1] }]", "[noise]"),
    ] {
        let text = MINIMAL.replace("r = 2.0", &format!("r = 2.0\naxes = {axes}"));
        let list = issues(&text);
        assert!(
            list.iter().any(|(k, _, m)| k.starts_with("scan.axes") && m.contains(fragment)),
            "{axes}: {list:?}"
        );
    }
}

#[test]
fn log_grid_hits_its_ends() {
    let g = grid(1e-9, 1e4, 131, true);
    assert_eq!(g.len(), 131);
    assert_eq!(g[0], 1e-9);
    assert_eq!(g[130], 1e4);
    assert!(((g[10] / 1e-8) - 1.0).abs() < 1e-12);
    assert_eq!(grid(2.0, 5.0, 1, false), vec![2.0]);
}

#[test]
fn locking_conflicts_with_a_psi_axis() {
    let text = MINIMAL.replace(
        "r = 2.0",
        "r = 2.0\nlock_psi = \"w\"\naxes = [{ name = \"psi\", values = [0.0] }]",
    );
    assert_eq!(issues(&text)[0].0, "scan.lock_psi");
}

#[test]
fn noise_quantities_need_noise_and_drive() {
    let text = MINIMAL.replace("\"Delta_m_w\"", "\"noisy_Delta_m_w\"");
    let list = issues(&text);
    assert!(list.iter().any(|(k, _, m)| k == "scan.quantities" && m.contains("[noise]")));
}

#[test]
fn drive_modes() {
    let base = MINIMAL.replace("nm = 200.0", "nm = 200.0\ng_hz = 1e5");
    let consistent = format!("{base}\n[drive]\ng01 = 10.0\ng02 = 10.0\nomega_m = 15.5\n");
    match parse_config(&consistent).unwrap().drive {
        Some(DriveSetup::Consistent { g0, omega_m }) => {
            assert_eq!(g0, [1e-4, 1e-4]);
            assert_eq!(omega_m, 15.5);
        }
        other => panic!("{other:?}"),
    }
    let target = consistent.replace("omega_m = 15.5", "omega_m = 15.5\nalpha1 = 2.0\nalpha2 = 3.0");
    assert!(matches!(parse_config(&target).unwrap().drive, Some(DriveSetup::Target { .. })));
    let explicit = consistent.replace("omega_m = 15.5", "omega_m = 15.5\nE01 = 2.0\nE02 = 3.0");
    assert!(matches!(parse_config(&explicit).unwrap().drive, Some(DriveSetup::Explicit(_))));
    let both = explicit.replace("E02 = 3.0", "E02 = 3.0\nalpha1 = 1.0");
    assert_eq!(issues(&both)[0].0, "drive.alpha1");
    let no_hz = consistent.replace("g_hz = 1e5\n", "");
    assert!(issues(&no_hz).iter().any(|(k, _, _)| k == "system.g_hz"));
}

#[test]
fn consistent_drive_reproduces_the_couplings() {
    let text = MINIMAL.replace("nm = 200.0", "nm = 200.0\npsi = 0.7\ng_hz = 1e5")
        + "\n[drive]\ng01 = 10.0\ng02 = 10.0\nomega_m = 15.5\n";
    let s = parse_config(&text).unwrap();
    let pt = point_at(&s, &[]).unwrap();
    let ss = pt.steady.unwrap();
    let g0 = 1e-4;
    assert!((ss.alpha[0] * g0 - num_complex::Complex64::from_polar(1.0, 0.7)).norm() < 1e-8);
    assert!((ss.alpha[1] * g0 - num_complex::Complex64::from_polar(1.0, -0.7)).norm() < 1e-8);
}

#[test]
fn preset_reference_with_overrides() {
    let text = "preset = \"fig3a\"\n[system]\nn0 = 50.0\n[scan]\nname = \"mine\"\n";
    let s = parse_config(text).unwrap();
    assert_eq!(s.name, "mine");
    assert_eq!(s.system.n0, 50.0);
    assert_eq!(s.system.nm, 200.0);
    assert_eq!(s.r, 5.0);
    let list = issues("preset = \"fig99\"\n");
    assert!(list.iter().any(|(k, _, m)| k == "preset" && m.contains("fig99")));
}

#[test]
fn every_preset_parses() {
    let names: Vec<&str> = preset_names().collect();
    assert_eq!(names.len(), 13);
    for name in names {
        let s = parse_config(preset_text(name).unwrap()).unwrap();
        assert_eq!(s.name, name);
    }
}

#[test]
fn presets_match_the_documented_table() {
    // (name, g2, J, kappa, n0, r, points)
    let table = [
        ("fig2a", 1.0, 10.0, 10.0, 200.0, 5.0, 721),
        ("fig2b", 2.5, 40.0, 100.0, 200.0, 5.0, 721),
        ("fig3a", 1.0, 10.0, 10.0, 200.0, 5.0, 721),
        ("fig3b", 1.0, 10.0, 10.0, 200.0, 5.0, 721),
        ("fig4a", 2.5, 4.0, 10.0, 200.0, 6.25, 721),
        ("fig4b", 2.5, 4.0, 10.0, 200.0, 6.25, 721),
        ("fig6a", 1.0, 10.0, 10.0, 200.0, 5.0, 1001),
        ("fig6b", 2.5, 4.0, 10.0, 200.0, 5.0, 1001),
    ];
    for (name, g2, j, kappa, n0, r, points) in table {
        let s = parse_config(preset_text(name).unwrap()).unwrap();
        assert_eq!(s.system.g1, 1.0, "{name}");
        assert_eq!(s.system.g2, g2, "{name}");
        assert_eq!(s.system.j, j, "{name}");
        assert_eq!(s.system.kappa, kappa, "{name}");
        assert_eq!(s.system.delta, 0.0, "{name}");
        assert_eq!((s.system.n0, s.system.nm), (n0, n0), "{name}");
        assert_eq!(s.r, r, "{name}");
        assert_eq!(s.axes.len(), 1);
        assert_eq!(s.axes[0].kind, AxisKind::Psi);
        assert_eq!(s.axes[0].values.len(), points);
        assert_eq!(*s.axes[0].values.last().unwrap(), PI);
    }
    let f5 = parse_config(preset_text("fig5").unwrap()).unwrap();
    assert_eq!(f5.axes[0].values, vec![0.0, 0.25, 0.5, 1.0]);
    assert_eq!(f5.lock_psi, Some(Mode::W));
    assert_eq!((f5.system.n0, f5.system.nm), (0.0, 0.0));
    let f7b = parse_config(preset_text("fig7b").unwrap()).unwrap();
    assert_eq!(f7b.gamma_over_gain, Some(0.1));
    for (name, psi) in [("fig8a", 0.0), ("fig8b", 0.5 * PI)] {
        let s = parse_config(preset_text(name).unwrap()).unwrap();
        assert_eq!(s.system.psi, psi);
        assert_eq!(s.g_hz, Some(1e5));
        assert!((s.noise.unwrap().linewidth - 1e-2).abs() < 1e-15);
        assert!(matches!(s.drive, Some(DriveSetup::Consistent { .. })));
        assert_eq!(s.axes[0].kind, AxisKind::GammaC);
        assert_eq!(s.axes[0].values.len(), 131);
    }
}

#[test]
fn damping_ratio_sets_gamma() {
    let s = parse_config(preset_text("fig5").unwrap()).unwrap();
    let pt = point_at(&s, &[0.25, 1.0]).unwrap();
    let b = trimode::model::superposition_basis(&pt.params).unwrap();
    assert!((pt.params.gamma / b.gain - 0.25).abs() < 1e-12);
    assert!((trimode::model::mode_weight_sq(&b, Mode::W).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn csv_format() {
    let text = MINIMAL.replace(
        "r = 2.0",
        "r = 2.0\naxes = [{ name = \"psi\", values = [0.0, 1.0] }]",
    )
    .replace("\"Delta_m_w\"", "\"Delta_m_w\", \"steering_class\"");
    let out = String::from_utf8(csv_bytes(&text)).unwrap();
    assert!(!out.contains('\r'));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "psi,pop_1,Delta_m_w,steering_class,status");
    let fields: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(fields[0], "1.0000000000000000e0");
    assert!(fields[1].contains('e') && fields[1].split('e').next().unwrap().len() == 18);
    assert_eq!(*fields.last().unwrap(), "ok");
    assert!(out.ends_with('\n'));
}

#[test]
fn failures_are_recorded_per_row() {
    // Growing |U_w|^2 past one is impossible, so locking fails everywhere.
    let text = MINIMAL
        .replace("g2 = 1.0", "g2 = 0.01")
        .replace("r = 2.0", "r = 2.0\nlock_psi = \"w\"");
    let s = parse_config(&text).unwrap();
    let rows = run_sweep(&s);
    assert!(!rows[0].ok());
    assert!(rows[0].cells.iter().all(Option::is_none));
    let mut out = Vec::new();
    write_csv(&mut out, &s, &rows).unwrap();
    let out = String::from_utf8(out).unwrap();
    let last = out.lines().nth(1).unwrap();
    assert!(last.starts_with(",,"), "{last}");
    assert!(last.contains("precondition"), "{last}");
}

#[test]
fn header_only_for_no_rows() {
    let s = parse_config(MINIMAL).unwrap();
    let mut out = Vec::new();
    write_csv(&mut out, &s, &[]).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), "pop_1,Delta_m_w,status\n");
}

#[test]
fn sweeps_are_deterministic() {
    for name in ["fig2b", "fig5", "fig8a"] {
        let text = preset_text(name).unwrap();
        assert_eq!(csv_bytes(text), csv_bytes(text), "{name}");
    }
}

#[test]
fn text_cells_pass_through() {
    let text = MINIMAL.replace("\"Delta_m_w\"", "\"steering_class\"");
    let s = parse_config(&text).unwrap();
    let rows = run_sweep(&s);
    assert!(matches!(rows[0].cells[1], Some(Cell::Text(_))));
    assert!(rows[0].number(0).unwrap() > 0.0);
    assert!(rows[0].number(1).is_none());
}
