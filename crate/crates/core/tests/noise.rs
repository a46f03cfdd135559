use num_complex::Complex64;
use trimode::entanglement::Gain;
use trimode::noise::{
    beta_wu, coloured_integral, filtered_noise_moments, filtered_noise_quadrature,
    noisy_moments, noisy_separability, quadrature_deviation, NoiseSpec,
};
use trimode::model::superposition_basis;
use trimode::steady::{drive_for_amplitudes, steady_state, steady_state_with_losses};
use trimode::{DriveSpec, Mode, SystemParams};

const G_HZ: f64 = 1e5;

fn system(psi: f64) -> SystemParams {
    SystemParams {
        g1: 1.0,
        g2: 1.0,
        psi,
        j: 10.0,
        delta: 0.0,
        kappa: 10.0,
        gamma: 0.0,
        n0: 200.0,
        nm: 200.0,
    }
}

fn close(a: Complex64, re: f64, im: f64, tol: f64) -> bool {
    (a - Complex64::new(re, im)).norm() <= tol * a.norm()
}

#[test]
fn filtered_moments_frozen() {
    let noise = NoiseSpec {
        linewidth: 0.01,
        gamma_c: 0.7,
    };
    let f = filtered_noise_moments(0.1, 0.03, 2.0, &noise).unwrap();
    assert!(close(f.dd, 0.085_245_632_650_990_66, 0.0, 1e-12));
    assert!(close(f.tt, 4.654_253_841_149_087, 0.0, 1e-12));
    assert!(close(f.td, 0.377_315_116_658_294_1, 0.003_967_615_957_895_883, 1e-12));
    assert!(close(f.dd_rev, 0.085_245_632_650_990_66, 0.0, 1e-12));
    assert!(close(f.dt, 0.377_315_116_658_294_1, 0.003_967_615_957_895_883, 1e-12));
}

#[test]
fn closed_forms_match_quadrature() {
    for gc in [1e-4, 1.0, 1e3] {
        let noise = NoiseSpec {
            linewidth: 0.02,
            gamma_c: gc,
        };
        let a = filtered_noise_moments(0.1, 0.05, 1.5, &noise).unwrap();
        let b = filtered_noise_quadrature(0.1, 0.05, 1.5, &noise, 1e-11).unwrap();
        assert!(quadrature_deviation(&a, &b) < 1e-8, "{gc}");
    }
}

#[test]
fn coloured_integral_white_limit() {
    // Fast decorrelation: gamma_c e^{-gamma_c|t|} -> 2 delta(t), so the
    // double integral tends to 2 Gamma_l int e^{(a+b)t}.
    let noise = NoiseSpec {
        linewidth: 1.0,
        gamma_c: 1e9,
    };
    let a = Complex64::new(-0.3, 0.1);
    let b = Complex64::new(-0.2, -0.1);
    let tau = 2.0;
    let v = coloured_integral(a, b, &noise, tau);
    let s = a + b;
    let white = 2.0 * ((s * tau).exp() - 1.0) / s;
    assert!((v - white).norm() < 1e-6 * white.norm());
}

#[test]
fn noise_validation() {
    let bad = NoiseSpec {
        linewidth: -1.0,
        gamma_c: 1.0,
    };
    assert!(filtered_noise_moments(0.1, 0.0, 1.0, &bad).is_err());
    let bad = NoiseSpec {
        linewidth: 1.0,
        gamma_c: 0.0,
    };
    assert!(filtered_noise_moments(0.1, 0.0, 1.0, &bad).is_err());
    let ok = NoiseSpec {
        linewidth: 1.0,
        gamma_c: 1.0,
    };
    assert!(filtered_noise_moments(-0.1, 0.0, 1.0, &ok).is_err());
}

#[test]
fn drive_inversion_reaches_target() {
    let p = system(0.0);
    let g0 = 10.0 / G_HZ;
    let target = [Complex64::new(1e4, 0.0), Complex64::new(1e4, 0.0)];
    let d = drive_for_amplitudes(&p, target, [g0, g0], 15.5).unwrap();
    let ss = steady_state(&p, &d).unwrap();
    for (a, t) in ss.alpha.iter().zip(target) {
        assert!((a - t).norm() < 1e-8 * t.norm());
    }
    assert!(ss.iterations < 1000);
}

#[test]
fn steady_state_without_shift_is_linear() {
    let p = system(0.0);
    let d = DriveSpec {
        e01: 3.0,
        e02: 1.0,
        phi01: 0.2,
        phi02: -0.4,
        g01: 0.0,
        g02: 0.0,
        omega_m: 15.5,
    };
    let ss = steady_state(&p, &d).unwrap();
    let i = Complex64::i();
    let e1 = Complex64::from_polar(3.0, 0.2);
    let e2 = Complex64::from_polar(1.0, -0.4);
    let l1 = Complex64::new(10.0, -15.5);
    let l2 = Complex64::new(10.0, -15.5);
    let r1 = l1 * ss.alpha[0] + i * 10.0 * ss.alpha[1] - e1;
    let r2 = l2 * ss.alpha[1] + i * 10.0 * ss.alpha[0] - e2;
    assert!(r1.norm() < 1e-12 && r2.norm() < 1e-12);
    assert!(steady_state_with_losses(&p, &d, [10.0, -1.0]).is_err());
}

#[test]
fn beta_vanishes_for_symmetric_drive_at_half_pi() {
    let p = system(std::f64::consts::FRAC_PI_2);
    let g0 = 10.0 / G_HZ;
    let d = drive_for_amplitudes(&p, [Complex64::new(1e4, 0.0); 2], [g0, g0], 15.5).unwrap();
    let ss = steady_state(&p, &d).unwrap();
    let b = superposition_basis(&p).unwrap();
    assert!(beta_wu(&b, &ss).norm() < 1e-6);
}

#[test]
fn noise_degrades_entanglement_monotonically() {
    let p = system(0.0);
    let g0 = 10.0 / G_HZ;
    let d = drive_for_amplitudes(&p, [Complex64::new(1e4, 0.0); 2], [g0, g0], 15.5).unwrap();
    let ss = steady_state(&p, &d).unwrap();
    let mut last = 0.0;
    for e in -9..=2 {
        let noise = NoiseSpec {
            linewidth: 1e3 / G_HZ,
            gamma_c: 10f64.powi(e) / G_HZ,
        };
        let v = noisy_separability(&p, &ss, &noise, 5.0, Mode::W, Gain::Optimal).unwrap().value;
        assert!(v >= last);
        last = v;
    }
    let noise = NoiseSpec {
        linewidth: 1e3 / G_HZ,
        gamma_c: 1.0,
    };
    assert!(noisy_separability(&p, &ss, &noise, 5.0, Mode::One, Gain::Optimal).is_err());
}

#[test]
fn zero_linewidth_recovers_noise_free_moments() {
    let p = system(0.4);
    let d = drive_for_amplitudes(&p, [Complex64::new(1e4, 0.0); 2], [1e-4, 1e-4], 15.5).unwrap();
    let ss = steady_state(&p, &d).unwrap();
    let noise = NoiseSpec {
        linewidth: 0.0,
        gamma_c: 1.0,
    };
    let noisy = noisy_moments(&p, &ss, &noise, 3.0).unwrap().moments;
    let b = superposition_basis(&p).unwrap();
    let k = trimode::kernels::pulse_kernels(&p, 3.0).unwrap();
    let clean = trimode::moments::superposition_moments(&p, &b, &k).unwrap();
    for j in 0..2 {
        assert!((noisy.populations[j] - clean.populations[j]).abs() <= 1e-12 * clean.populations[j].max(1.0));
        assert!((noisy.anomalous[j] - clean.anomalous[j]).norm() <= 1e-12 * clean.anomalous[j].norm().max(1.0));
    }
    assert_eq!(noisy.mechanical, clean.mechanical);
}
