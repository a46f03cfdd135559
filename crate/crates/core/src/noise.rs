//! Laser phase noise. The frequency fluctuation `sigma(t)` is coloured,
//! `<sigma(t) sigma(t')> = Gamma_l gamma_c exp(-gamma_c |t - t'|)`, and
//! enters through the filtered integrals
//! `D = int sigma e^{-(G + i delta) t}` and `D~ = int sigma e^{(G - i delta) t}`.

use num_complex::Complex64;

use crate::entanglement::{separability_of, Gain, QuadratureMoments, Separability};
use crate::error::{invalid, Error, Result};
use crate::kernels::PulseKernels;
use crate::model::{superposition_basis, SuperpositionBasis};
use crate::moments::ModeMoments;
use crate::params::{Basis, Mode, SystemParams};
use crate::quadrature;
use crate::steady::SteadyState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    /// Laser linewidth.
    pub linewidth: f64,
    /// Inverse correlation time of the phase noise.
    pub gamma_c: f64,
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.linewidth.is_finite() && self.linewidth >= 0.0) {
            return Err(invalid("Gamma_l", "linewidth must be finite and non-negative"));
        }
        if !(self.gamma_c.is_finite() && self.gamma_c > 0.0) {
            return Err(invalid("gamma_c", "correlation rate must be positive"));
        }
        Ok(())
    }
}

/// The five filtered noise correlators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilteredNoise {
    /// `<D^* D>`
    pub dd: Complex64,
    /// `<D~^* D~>`
    pub tt: Complex64,
    /// `<D~^* D>`
    pub td: Complex64,
    /// `<D D^*>`
    pub dd_rev: Complex64,
    /// `<D D~^*>`
    pub dt: Complex64,
}

/// Exponents `(a, b)` such that each correlator is
/// `int int K(t - t') e^{a t} e^{b t'}`.
fn exponents(gain: f64, pull: f64) -> [(Complex64, Complex64); 5] {
    let p = Complex64::new(gain, pull); // G + i delta
    let m = Complex64::new(gain, -pull); // G - i delta
    [
        (-m, -p), // D^* D
        (p, m),   // D~^* D~
        (p, -p),  // D~^* D
        (-p, -m), // D D^*
        (-p, p),  // D D~^*
    ]
}

fn assemble(v: [Complex64; 5]) -> FilteredNoise {
    FilteredNoise {
        dd: v[0],
        tt: v[1],
        td: v[2],
        dd_rev: v[3],
        dt: v[4],
    }
}

/// `e^z - 1` for complex `z` without cancellation.
fn expm1(z: Complex64) -> Complex64 {
    let (s, c) = z.im.sin_cos();
    let em = z.re.exp_m1();
    let half = (0.5 * z.im).sin();
    Complex64::new(em * c - 2.0 * half * half, (em + 1.0) * s)
}

/// `mu_k(z) = int_0^1 u^k e^{z u} du` for `k = 0..=5`.
fn moments_mu(z: Complex64) -> [Complex64; 6] {
    let mut out = [Complex64::new(0.0, 0.0); 6];
    if z.norm() < 2.0 {
        // Series sum_n z^n / (n! (n + k + 1)).
        for (k, slot) in out.iter_mut().enumerate() {
            let mut term = Complex64::new(1.0, 0.0);
            let mut sum = term / (k as f64 + 1.0);
            for n in 1..80 {
                term *= z / n as f64;
                let add = term / (n as f64 + k as f64 + 1.0);
                sum += add;
                if add.norm() < 1e-18 * sum.norm() {
                    break;
                }
            }
            *slot = sum;
        }
    } else {
        let ez = z.exp();
        out[0] = expm1(z) / z;
        for k in 1..6 {
            out[k] = (ez - out[k - 1] * k as f64) / z;
        }
    }
    out
}

/// `phi1(z) = (e^z - 1) / z`
fn phi1(z: Complex64) -> Complex64 {
    moments_mu(z)[0]
}

/// Divided difference `(phi1(z1) - phi1(z2)) / (z1 - z2)`.
fn phi1_divided(z1: Complex64, z2: Complex64) -> Complex64 {
    let h = z1 - z2;
    if h.norm() < 1e-2 {
        let mu = moments_mu(0.5 * (z1 + z2));
        let h2 = h * h;
        mu[1] + mu[3] * h2 / 24.0 + mu[5] * h2 * h2 / 1920.0
    } else {
        (phi1(z1) - phi1(z2)) / h
    }
}

/// Closed form of `Gamma_l gamma_c int_0^tau int_0^tau e^{-c|t-t'|} e^{a t + b t'}`.
pub fn coloured_integral(a: Complex64, b: Complex64, noise: &NoiseSpec, tau: f64) -> Complex64 {
    let c = noise.gamma_c;
    let zab = (a + b) * tau;
    let pre = noise.linewidth * c * tau * tau;
    pre * (phi1_divided(zab, (a - c) * tau) + phi1_divided(zab, (b - c) * tau))
}

pub fn filtered_noise_moments(
    gain: f64,
    pull: f64,
    r: f64,
    noise: &NoiseSpec,
) -> Result<FilteredNoise> {
    noise.validate()?;
    if gain <= 0.0 {
        return Err(Error::NonAmplifying { gain });
    }
    let tau = r / gain;
    let ex = exponents(gain, pull);
    Ok(assemble(ex.map(|(a, b)| coloured_integral(a, b, noise, tau))))
}

/// Split points `0, 1/c, 10/c, ...` so that each piece resolves the
/// boundary layer of width `1/c`.
fn layer_points(end: f64, c: f64) -> Vec<f64> {
    let mut pts = vec![0.0];
    let mut x = 1.0 / c;
    while x < end {
        pts.push(x);
        x *= 10.0;
    }
    pts.push(end);
    pts
}

fn integrate_layered<F: FnMut(f64) -> Complex64>(
    mut f: F,
    end: f64,
    c: f64,
    rel_tol: f64,
) -> Result<Complex64> {
    let pts = layer_points(end, c);
    let mut total = Complex64::new(0.0, 0.0);
    for w in pts.windows(2) {
        total += quadrature::integrate(&mut f, w[0], w[1], rel_tol, 0.0, 4000)?.value;
    }
    Ok(total)
}

/// Direct nested quadrature of the defining double integrals, written as
/// `int_0^tau dt e^{(a+b)t} int_0^t du e^{-c u}(e^{-b u} + e^{-a u})`.
pub fn filtered_noise_quadrature(
    gain: f64,
    pull: f64,
    r: f64,
    noise: &NoiseSpec,
    rel_tol: f64,
) -> Result<FilteredNoise> {
    noise.validate()?;
    if gain <= 0.0 {
        return Err(Error::NonAmplifying { gain });
    }
    let tau = r / gain;
    let c = noise.gamma_c;
    let ex = exponents(gain, pull);
    let mut out = [Complex64::new(0.0, 0.0); 5];
    for (slot, (a, b)) in out.iter_mut().zip(ex) {
        let mut failure = None;
        let outer = integrate_layered(
            |t| {
                if t == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let inner = integrate_layered(
                    |u| ((-c - b) * u).exp() + ((-c - a) * u).exp(),
                    t,
                    c,
                    rel_tol * 0.1,
                );
                match inner {
                    Ok(q) => ((a + b) * t).exp() * q,
                    Err(e) => {
                        failure.get_or_insert(e);
                        Complex64::new(0.0, 0.0)
                    }
                }
            },
            tau,
            c,
            rel_tol,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        *slot = outer * (noise.linewidth * c);
    }
    Ok(assemble(out))
}

/// Largest relative deviation between the closed forms and quadrature.
pub fn quadrature_deviation(a: &FilteredNoise, b: &FilteredNoise) -> f64 {
    let pairs = [
        (a.dd, b.dd),
        (a.tt, b.tt),
        (a.td, b.td),
        (a.dd_rev, b.dd_rev),
        (a.dt, b.dt),
    ];
    pairs
        .iter()
        .map(|(x, y)| (x - y).norm() / x.norm().max(y.norm()))
        .fold(0.0, f64::max)
}

/// Intracavity amplitudes of the superposition modes.
pub fn superposition_amplitudes(b: &SuperpositionBasis, ss: &SteadyState) -> [Complex64; 2] {
    let (s, c) = b.theta.sin_cos();
    [
        ss.alpha[0] * c + ss.alpha[1] * s,
        ss.alpha[0] * s - ss.alpha[1] * c,
    ]
}

/// `beta = (g_w^* alpha_w e^{-i phi} + g_u^* alpha_u e^{i phi}) / sqrt(kappa^2 + w^2)`
pub fn beta_wu(b: &SuperpositionBasis, ss: &SteadyState) -> Complex64 {
    let [aw, au] = superposition_amplitudes(b, ss);
    let num = b.gw.conj() * aw * Complex64::from_polar(1.0, -b.phi)
        + b.gu.conj() * au * Complex64::from_polar(1.0, b.phi);
    num / b.kappa.hypot(b.w)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoisyMoments {
    /// Superposition-basis moments including the noise corrections. The
    /// `w`-`u` coherence is the noise-free value.
    pub moments: ModeMoments,
    pub beta: Complex64,
    pub noise: FilteredNoise,
}

/// Superposition-mode moments with the laser-noise corrections. The
/// corrections are written with `g_j` multiplied through, so a mode with a
/// vanishing coupling keeps its (finite) noise-driven population.
pub fn noisy_moments(
    p: &SystemParams,
    ss: &SteadyState,
    noise: &NoiseSpec,
    r: f64,
) -> Result<NoisyMoments> {
    let b = superposition_basis(p)?;
    let g = b.require_amplifying()?;
    let k = PulseKernels::new(p.n0, p.nm, p.gamma / g, r)?;
    let fnoise = filtered_noise_moments(g, b.pull, r, noise)?;
    let beta = beta_wu(&b, ss);
    let alphas = superposition_amplitudes(&b, ss);
    let sq = &k.squeeze;
    let e = sq.e;
    let er = sq.er();
    let b2 = beta.norm_sqr();
    let pre = b.lorentz() / g;
    let rot = Complex64::from_polar(1.0, -b.phi);
    let couplings = [b.gw, b.gu];
    let mut populations = [0.0; 2];
    let mut anomalous = [Complex64::new(0.0, 0.0); 2];
    for j in 0..2 {
        let gj = couplings[j];
        // g_j (2 alpha_j G / g_j - beta)
        let y = alphas[j] * (2.0 * g) - beta * gj;
        let pop = gj.norm_sqr() * k.upsilon
            + gj.norm_sqr() * b2 * sq.x * sq.x / e * fnoise.dd.re
            + y.norm_sqr() / e * fnoise.tt.re
            + sq.x / e * 2.0 * (beta.conj() * gj.conj() * y * fnoise.td).re;
        populations[j] = pre * pop;
        let inner = gj * k.lambda
            + rot * gj * (b2 * er * er * er / e.sqrt()) * fnoise.dd_rev
            + rot * y * beta.conj() * (er / e.sqrt()) * fnoise.dt;
        anomalous[j] = -Complex64::i() * pre.sqrt() * inner;
    }
    let zero = Complex64::new(0.0, 0.0);
    let moments = ModeMoments {
        basis: Basis::Superposition,
        populations,
        mechanical: p.n0 + k.gamma_k + b2 * sq.x * fnoise.dd.re,
        coherence: b.gw.conj() * b.gu * (pre * k.upsilon),
        anomalous,
        field_anomalous: zero,
        mech_coherence: [zero, zero],
    };
    Ok(NoisyMoments {
        moments,
        beta,
        noise: fnoise,
    })
}

/// Separability of the mechanics and a superposition mode under laser
/// noise, with the field quadrature referenced to the coupling phase.
pub fn noisy_separability(
    p: &SystemParams,
    ss: &SteadyState,
    noise: &NoiseSpec,
    r: f64,
    mode: Mode,
    gain: Gain,
) -> Result<Separability> {
    if mode.basis() != Basis::Superposition {
        return Err(Error::Precondition(
            "laser-noise corrections are available for the superposition modes only".into(),
        ));
    }
    let nm = noisy_moments(p, ss, noise, r)?;
    let b = superposition_basis(p)?;
    let g = b.coupling(mode);
    let theta = g.im.atan2(g.re);
    let q = QuadratureMoments::from_moments(&nm.moments, mode.slot(), theta);
    Ok(separability_of(&q, gain))
}
