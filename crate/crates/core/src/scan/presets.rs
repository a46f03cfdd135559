//! Built-in scans. Rates are in units
//! of g; `g_hz` records the reference coupling in Hz.
//!
//! | preset | couplings | J, kappa | gamma | n0, nm | r | axes |
//! |---|---|---|---|---|---|---|
//! | fig2a | 1, 1 | 10, 10 | 0.01 | 200, 200 | 5 | psi |
//! | fig2b | 1, 2.5 | 40, 100 | 0.01 | 200, 200 | 5 | psi |
//! | fig3a, fig3b | 1, 1 | 10, 10 | 0 | 200, 200 | 5 | psi |
//! | fig4a, fig4b | 1, 2.5 | 4, 10 | 0 | 200, 200 | 6.25 | psi |
//! | fig5 | 1, 1 | 10, 10 (assumed) | gamma/G in {0, 0.25, 0.5, 1} | 0, 0 | axis | gamma/G, r |
//! | fig6a | 1, 1 | 10, 10 | 0 | 200, 200 | 5 (assumed) | psi |
//! | fig6b | 1, 2.5 | 4, 10 | 0 | 200, 200 | 5 (assumed) | psi |
//! | fig7a | 1, 1 | 10, 10 (assumed) | axis | 0, 0 | axis | r, gamma/G |
//! | fig7b | 1, 1 | 10, 10 (assumed) | 0.1 G | axis | axis | r, n |
//! | fig8a | 1, 1, psi = 0 | 10, 10 | 0 | 200, 200 | 5 | gamma_c |
//! | fig8b | 1, 1, psi = pi/2 | 10, 10 | 0 | 200, 200 | 5 | gamma_c |
//!
//! Phase-locked presets choose psi so that the named superposition mode has
//! unit weight. The fig8 presets take `g0 = 10 Hz`, `g = 0.1 MHz`,
//! `omega_m = 15.5 g` and `Gamma_l = 1 kHz`; the drive is solved for the
//! amplitudes `|alpha_j| = g / g0 = 1e4` carrying the coupling phases.

const FIG2A: &str = r#"
[system]
g1 = 1.0
g2 = 1.0
J = 10.0
Delta = 0.0
kappa = 10.0
gamma = 0.01
n0 = 200.0
nm = 200.0
g_hz = 1e5

[scan]
name = "fig2a"
r = 5.0
axes = [{ name = "psi", from = 0.0, to = 1.0, points = 721, unit = "pi" }]
quantities = ["pop_1", "pop_2", "coh_12", "coh_12@J0", "gamma1_12", "V", "D"]
"#;

const FIG2B: &str = r#"
[system]
g1 = 1.0
g2 = 2.5
J = 40.0
Delta = 0.0
kappa = 100.0
gamma = 0.01
n0 = 200.0
nm = 200.0
g_hz = 1e4

[scan]
name = "fig2b"
r = 5.0
axes = [{ name = "psi", from = 0.0, to = 1.0, points = 721, unit = "pi" }]
quantities = ["pop_1", "pop_2", "coh_12", "coh_12@J0", "gamma1_12", "V", "D"]
"#;

const FIG3A: &str = r#"
[system]
g1 = 1.0
g2 = 1.0
J = 10.0
Delta = 0.0
kappa = 10.0
gamma = 0.0
n0 = 200.0
nm = 200.0
g_hz = 1e5

[scan]
name = "fig3a"
r = 5.0
gain = "optimal"
axes = [{ name = "psi", from = 0.0, to = 1.0, points = 721, unit = "pi" }]
quantities = ["Delta_m_1", "Delta_m_2", "h_m_1", "h_m_2", "Delta_m_1@J0", "Delta_m_2@J0"]
"#;

const FIG3B: &str = r#"
[system]
g1 = 1.0
g2 = 1.0
J = 10.0
Delta = 0.0
kappa = 10.0
gamma = 0.0
n0 = 200.0
nm = 200.0
g_hz = 1e5

[scan]
name = "fig3b"
r = 5.0
gain = "optimal"
axes = [{ name = "psi", from = 0.0, to = 1.0, points = 721, unit = "pi" }]
quantities = ["Delta_m_w", "Delta_m_u", "h_m_w", "h_m_u", "Delta_m_w@J0", "Delta_m_u@J0"]
"#;

const FIG4A: &str = r#"
[system]
g1 = 1.0
g2 = 2.5
J = 4.0
Delta = 0.0
kappa = 10.0
gamma = 0.0
n0 = 200.0
nm = 200.0
g_hz = 1e5

[scan]
name = "fig4a"
r = 6.25
gain = "optimal"
axes = [{ name = "psi", from = 0.0, to = 1.0, points = 721, unit = "pi" }]
quantities = ["Delta_m_1", "Delta_m_2", "h_m_1", "h_m_2", "Delta_m_1@J0", "Delta_m_2@J0"]
"#;

const FIG4B: &str = r#"
[system]
g1 = 1.0
g2 = 2.5
J = 4.0
Delta = 0.0
kappa = 10.0
gamma = 0.0
n0 = 200.0
nm = 200.0
g_hz = 1e5

[scan]
name = "fig4b"
r = 6.25
gain = "optimal"
axes = [{ name = "psi", from = 0.0, to = 1.0, points = 721, unit = "pi" }]
quantities = ["Delta_m_w", "Delta_m_u", "h_m_w", "h_m_u", "Delta_m_w@J0", "Delta_m_u@J0"]
"#;

const FIG5: &str = r#"
[system]
g1 = 1.0
g2 = 1.0
J = 10.0
Delta = 0.0
kappa = 10.0
gamma_over_G = 0.0
n = 0.0
g_hz = 1e5

[scan]
name = "fig5"
gain = "optimal"
lock_psi = "w"
axes = [
    { name = "gamma_over_G", values = [0.0, 0.25, 0.5, 1.0] },
    { name = "r", from = 0.0, to = 3.0, points = 301 },
]
quantities = ["Delta_m_w", "Delta_m_damped", "U2_w"]
"#;

const FIG6A: &str = r#"
[system]
g1 = 1.0
g2 = 1.0
J = 10.0
Delta = 0.0
kappa = 10.0
gamma = 0.0
n0 = 200.0
nm = 200.0
g_hz = 1e5

[scan]
name = "fig6a"
r = 5.0
axes = [{ name = "psi", from = 0.0, to = 1.0, points = 1001, unit = "pi" }]
quantities = ["E_m_1", "E_m_2", "E_m_w", "E_m_u", "steering_class", "R12"]
"#;

const FIG6B: &str = r#"
[system]
g1 = 1.0
g2 = 2.5
J = 4.0
Delta = 0.0
kappa = 10.0
gamma = 0.0
n0 = 200.0
nm = 200.0
g_hz = 1e5

[scan]
name = "fig6b"
r = 5.0
axes = [{ name = "psi", from = 0.0, to = 1.0, points = 1001, unit = "pi" }]
quantities = ["E_m_1", "E_m_2", "E_m_w", "E_m_u", "steering_class", "R12"]
"#;

const FIG7A: &str = r#"
[system]
g1 = 1.0
g2 = 1.0
J = 10.0
Delta = 0.0
kappa = 10.0
gamma_over_G = 0.0
n = 0.0
g_hz = 1e5

[scan]
name = "fig7a"
lock_psi = "w"
axes = [
    { name = "r", from = 0.0, to = 3.0, points = 61 },
    { name = "gamma_over_G", from = 0.0, to = 1.0, points = 41 },
]
quantities = ["E_m_w"]
"#;

const FIG7B: &str = r#"
[system]
g1 = 1.0
g2 = 1.0
J = 10.0
Delta = 0.0
kappa = 10.0
gamma_over_G = 0.1
n = 0.0
g_hz = 1e5

[scan]
name = "fig7b"
lock_psi = "w"
axes = [
    { name = "r", from = 0.0, to = 3.0, points = 61 },
    { name = "n", from = 0.0, to = 10.0, points = 41 },
]
quantities = ["E_m_w"]
"#;

const FIG8A: &str = r#"
[system]
g1 = 1.0
g2 = 1.0
psi = 0.0
J = 10.0
Delta = 0.0
kappa = 10.0
gamma = 0.0
n0 = 200.0
nm = 200.0
g_hz = 1e5

[drive]
g01 = 10.0
g02 = 10.0
omega_m = 15.5

[noise]
Gamma_l = 1e3

[scan]
name = "fig8a"
r = 5.0
gain = "optimal"
axes = [{ name = "gamma_c", from = 1e-9, to = 1e4, points = 131, spacing = "log" }]
quantities = ["noisy_Delta_m_w", "noisy_Delta_m_u"]
"#;

const FIG8B: &str = r#"
[system]
g1 = 1.0
g2 = 1.0
psi_pi = 0.5
J = 10.0
Delta = 0.0
kappa = 10.0
gamma = 0.0
n0 = 200.0
nm = 200.0
g_hz = 1e5

[drive]
g01 = 10.0
g02 = 10.0
omega_m = 15.5

[noise]
Gamma_l = 1e3

[scan]
name = "fig8b"
r = 5.0
gain = "optimal"
axes = [{ name = "gamma_c", from = 1e-9, to = 1e4, points = 131, spacing = "log" }]
quantities = ["noisy_Delta_m_w", "noisy_Delta_m_u"]
"#;

pub const PRESETS: [(&str, &str); 13] = [
    ("fig2a", FIG2A),
    ("fig2b", FIG2B),
    ("fig3a", FIG3A),
    ("fig3b", FIG3B),
    ("fig4a", FIG4A),
    ("fig4b", FIG4B),
    ("fig5", FIG5),
    ("fig6a", FIG6A),
    ("fig6b", FIG6B),
    ("fig7a", FIG7A),
    ("fig7b", FIG7B),
    ("fig8a", FIG8A),
    ("fig8b", FIG8B),
];

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

/// Configuration text of a named preset.
pub fn preset_text(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
