use trimode::oracle::{compare_to_analytic, oracle_moments, DEFAULT_TOLERANCE, MAX_ORACLE_R};
use trimode::SystemParams;

fn adiabatic(psi: f64, gamma: f64, n: f64) -> SystemParams {
    SystemParams {
        g1: 1.0,
        g2: 1.0,
        psi,
        j: 100.0,
        delta: 0.0,
        kappa: 100.0,
        gamma,
        n0: n,
        nm: n,
    }
}

#[test]
fn undamped_moments_agree() {
    let c = compare_to_analytic(&adiabatic(0.3, 0.0, 10.0), 1.0, DEFAULT_TOLERANCE).unwrap();
    assert!(c.regime_ok);
    assert!(c.max_relative < 2e-3, "{c:?}");
    assert!(c.max_zero_block < 1e-3, "{c:?}");
    assert!(c.commutator_error < 1e-6, "{c:?}");
}

#[test]
fn damped_moments_agree() {
    // gamma = G / 4 with G = 2 g^2 kappa / (kappa^2 + J^2) - gamma.
    let g0 = 2.0 * 100.0 / 20000.0;
    let p = adiabatic(1.0, 0.2 * g0, 3.0);
    let c = compare_to_analytic(&p, 1.0, DEFAULT_TOLERANCE).unwrap();
    assert!(c.max_relative < 2e-3, "{c:?}");
    assert!(c.commutator_error < 1e-6, "{c:?}");
}

#[test]
fn detuned_asymmetric_moments_agree() {
    let p = SystemParams {
        g2: 0.6,
        delta: 40.0,
        ..adiabatic(0.7, 0.0, 2.0)
    };
    let c = compare_to_analytic(&p, 0.5, DEFAULT_TOLERANCE).unwrap();
    assert!(c.max_relative < 5e-3, "{c:?}");
    assert!(c.max_zero_block < 1e-3, "{c:?}");
}

#[test]
fn oracle_rejects_long_pulses() {
    assert!(oracle_moments(&adiabatic(0.0, 0.0, 0.0), MAX_ORACLE_R * 1.5, DEFAULT_TOLERANCE).is_err());
}

#[test]
fn strong_coupling_is_flagged() {
    let p = SystemParams {
        kappa: 5.0,
        j: 5.0,
        ..adiabatic(0.0, 0.0, 0.0)
    };
    let m = oracle_moments(&p, 0.5, DEFAULT_TOLERANCE).unwrap();
    assert!(!m.regime_ok);
}
