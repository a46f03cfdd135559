//! Independent check of the analytic moments: integrate the linear
//! Langevin equations for the intracavity modes, the mechanics and the
//! accumulating output-mode filters, and propagate their second moments.
//!
//! State `x = (a1, a2, c^dag, B1, B2)` with `B_j` the running filter of the
//! cavity output `j`. Three moment sets are evolved: `P = <x x^dag>`,
//! `N = <x^* x^T>` (normal ordered) and `S = <x x^T>`.

pub mod ode;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::kernels::PulseKernels;
use crate::model::{superposition_basis, SuperpositionBasis};
use crate::moments::{cavity_moments, superposition_moments, ModeMoments};
use crate::params::{Basis, SystemParams};

pub use ode::{IntegrationStats, Tolerance};

/// Longest pulse the oracle integrates directly.
pub const MAX_ORACLE_R: f64 = 2.0;

pub const DEFAULT_TOLERANCE: Tolerance = Tolerance {
    rtol: 1e-10,
    atol: 1e-10,
};

type Mat = [[Complex64; 5]; 5];
type Noise = [[Complex64; 3]; 5];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Drift and noise-input matrices of the linear model.
#[derive(Debug, Clone, Copy)]
pub struct LinearModel {
    kappa: f64,
    gamma: f64,
    delta: f64,
    j: f64,
    g: [Complex64; 2],
    nm: f64,
    n0: f64,
    gain: f64,
    pull: f64,
    norm: f64,
}

impl LinearModel {
    fn filter(&self, t: f64) -> Complex64 {
        Complex64::from_polar(self.norm * (self.gain * t).exp(), self.pull * t)
    }

    fn matrices(&self, t: f64) -> (Mat, Noise) {
        let i = Complex64::i();
        let sk = (2.0 * self.kappa).sqrt();
        let sg = (2.0 * self.gamma).sqrt();
        let f = self.filter(t);
        let mut a = [[ZERO; 5]; 5];
        a[0][0] = -Complex64::new(self.kappa, self.delta);
        a[0][1] = -i * self.j;
        a[0][2] = -i * self.g[0];
        a[1][0] = -i * self.j;
        a[1][1] = -Complex64::new(self.kappa, -self.delta);
        a[1][2] = -i * self.g[1];
        a[2][0] = i * self.g[0].conj();
        a[2][1] = i * self.g[1].conj();
        a[2][2] = Complex64::new(-self.gamma, 0.0);
        a[3][0] = f * sk;
        a[4][1] = f * sk;
        let mut l = [[ZERO; 3]; 5];
        l[0][0] = Complex64::new(-sk, 0.0);
        l[1][1] = Complex64::new(-sk, 0.0);
        l[2][2] = Complex64::new(-sg, 0.0);
        l[3][0] = f;
        l[4][1] = f;
        (a, l)
    }
}

pub fn build_model(p: &SystemParams, b: &SuperpositionBasis, r: f64) -> Result<LinearModel> {
    let g = b.require_amplifying()?;
    if !(r > 0.0 && r <= MAX_ORACLE_R) {
        return Err(invalid(
            "r",
            format!("oracle pulse parameter must lie in (0, {MAX_ORACLE_R}], got {r}"),
        ));
    }
    Ok(LinearModel {
        kappa: p.kappa,
        gamma: p.gamma,
        delta: p.delta,
        j: p.j,
        g: [
            Complex64::from_polar(p.g1, p.psi),
            Complex64::from_polar(p.g2, -p.psi),
        ],
        nm: p.nm,
        n0: p.n0,
        gain: g,
        pull: b.pull,
        norm: (2.0 * g / (2.0 * r).exp_m1()).sqrt(),
    })
}

fn pack(ms: &[Mat; 3], out: &mut [f64]) {
    let mut idx = 0;
    for m in ms {
        for row in m {
            for z in row {
                out[idx] = z.re;
                out[idx + 1] = z.im;
                idx += 2;
            }
        }
    }
}

fn unpack(y: &[f64]) -> [Mat; 3] {
    let mut ms = [[[ZERO; 5]; 5]; 3];
    let mut idx = 0;
    for m in ms.iter_mut() {
        for row in m.iter_mut() {
            for z in row.iter_mut() {
                *z = Complex64::new(y[idx], y[idx + 1]);
                idx += 2;
            }
        }
    }
    ms
}

fn lyapunov(a: &Mat, x: &Mat, b: &Mat, l: &Noise, q: [f64; 3], lr: &Noise) -> Mat {
    // a x + x b + l diag(q) lr^T
    let mut out = [[ZERO; 5]; 5];
    for r in 0..5 {
        for c in 0..5 {
            let mut acc = ZERO;
            for k in 0..5 {
                acc += a[r][k] * x[k][c] + x[r][k] * b[k][c];
            }
            for n in 0..3 {
                acc += l[r][n] * q[n] * lr[c][n];
            }
            out[r][c] = acc;
        }
    }
    out
}

fn map<F: Fn(Complex64) -> Complex64>(m: &Mat, f: F) -> Mat {
    let mut out = *m;
    for row in out.iter_mut() {
        for z in row.iter_mut() {
            *z = f(*z);
        }
    }
    out
}

fn transpose(m: &Mat) -> Mat {
    let mut out = [[ZERO; 5]; 5];
    for r in 0..5 {
        for c in 0..5 {
            out[r][c] = m[c][r];
        }
    }
    out
}

fn conj_noise(l: &Noise) -> Noise {
    let mut out = *l;
    for row in out.iter_mut() {
        for z in row.iter_mut() {
            *z = z.conj();
        }
    }
    out
}

/// Raw moment matrices at the end of the pulse.
#[derive(Debug, Clone, Copy)]
pub struct MomentMatrices {
    pub p: Mat,
    pub n: Mat,
    pub s: Mat,
    pub stats: IntegrationStats,
}

pub fn evolve_moments(model: &LinearModel, tau: f64, tol: Tolerance) -> Result<MomentMatrices> {
    let mut p0 = [[ZERO; 5]; 5];
    p0[0][0] = Complex64::new(1.0, 0.0);
    p0[1][1] = Complex64::new(1.0, 0.0);
    p0[2][2] = Complex64::new(model.n0, 0.0);
    let mut n0 = [[ZERO; 5]; 5];
    n0[2][2] = Complex64::new(model.n0 + 1.0, 0.0);
    let s0 = [[ZERO; 5]; 5];
    let mut y = vec![0.0; 150];
    pack(&[p0, n0, s0], &mut y);
    let qa = [1.0, 1.0, model.nm];
    let qn = [0.0, 0.0, model.nm + 1.0];
    let qs = [0.0, 0.0, 0.0];
    let scale = model.n0 + model.nm + 1.0;
    let tol = Tolerance {
        rtol: tol.rtol,
        atol: tol.atol * scale,
    };
    let stats = ode::integrate(
        |t, y, dy| {
            let [p, n, s] = unpack(y);
            let (a, l) = model.matrices(t);
            let ah = transpose(&map(&a, |z| z.conj()));
            let ac = map(&a, |z| z.conj());
            let at = transpose(&a);
            let lc = conj_noise(&l);
            let dp = lyapunov(&a, &p, &ah, &l, qa, &lc);
            let dn = lyapunov(&ac, &n, &at, &lc, qn, &l);
            let ds = lyapunov(&a, &s, &at, &l, qs, &l);
            pack(&[dp, dn, ds], dy);
        },
        0.0,
        tau,
        &mut y,
        tol,
    )?;
    let [p, n, s] = unpack(&y);
    Ok(MomentMatrices { p, n, s, stats })
}

/// Oracle moments in both bases plus bookkeeping.
#[derive(Debug, Clone, Copy)]
pub struct OracleMoments {
    pub cavity: ModeMoments,
    pub superposition: ModeMoments,
    /// Largest deviation of `[A, A^dag] = 1` over the three outputs, and of
    /// `[A_1, A_2^dag] = 0`.
    pub commutator_error: f64,
    pub stats: IntegrationStats,
    /// Adiabatic elimination is trustworthy only for `kappa >> |g|`.
    pub regime_ok: bool,
}

/// Moments of the output pair `A = T B` built from the filter moments.
fn pair_from_filters(
    basis: Basis,
    t: [[Complex64; 2]; 2],
    m: &MomentMatrices,
    phase: Complex64,
) -> ModeMoments {
    // Filters sit at indices 3 and 4 of the state; the mechanics at 2.
    let normal = |x: usize, y: usize| {
        let mut acc = ZERO;
        for k in 0..2 {
            for l in 0..2 {
                acc += t[x][k].conj() * t[y][l] * m.n[3 + k][3 + l];
            }
        }
        acc
    };
    let plain = |x: usize, y: usize| {
        let mut acc = ZERO;
        for k in 0..2 {
            for l in 0..2 {
                acc += t[x][k] * t[y][l] * m.s[3 + k][3 + l];
            }
        }
        acc
    };
    let with_mech = |x: usize, src: &Mat| t[x][0] * src[2][3] + t[x][1] * src[2][4];
    ModeMoments {
        basis,
        populations: [normal(0, 0).re, normal(1, 1).re],
        mechanical: m.p[2][2].re,
        coherence: normal(0, 1),
        // N[2][k] = <c B_k>, S[2][k] = <c^dag B_k>
        anomalous: [with_mech(0, &m.n) * phase, with_mech(1, &m.n) * phase],
        field_anomalous: plain(0, 1),
        mech_coherence: [
            with_mech(0, &m.s) * phase.conj(),
            with_mech(1, &m.s) * phase.conj(),
        ],
    }
}

pub fn oracle_moments(p: &SystemParams, r: f64, tol: Tolerance) -> Result<OracleMoments> {
    let b = superposition_basis(p)?;
    let model = build_model(p, &b, r)?;
    let tau = r / model.gain;
    let m = evolve_moments(&model, tau, tol)?;
    let ph = Complex64::from_polar(1.0, -b.pull * tau);
    let one = Complex64::new(1.0, 0.0);
    let (sn, cs) = b.theta.sin_cos();
    let ep = Complex64::from_polar(1.0, b.phi);
    let em = ep.conj();
    // A_w = e^{i phi}(cos B1 + sin B2), A_u = e^{-i phi}(sin B1 - cos B2)
    let sup = [[ep * cs, ep * sn], [em * sn, -em * cs]];
    let cavity = pair_from_filters(Basis::Cavity, [[one, ZERO], [ZERO, one]], &m, ph);
    let superposition = pair_from_filters(Basis::Superposition, sup, &m, ph);
    let commutator_error = [
        (m.p[3][3] - m.n[3][3] - one).norm(),
        (m.p[4][4] - m.n[4][4] - one).norm(),
        (m.n[2][2] - m.p[2][2] - one).norm(),
        (m.p[3][4] - m.n[4][3]).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(OracleMoments {
        cavity,
        superposition,
        commutator_error,
        stats: m.stats,
        regime_ok: p.kappa >= 10.0 * p.g1.max(p.g2),
    })
}

/// Deviations between oracle and analytic moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleComparison {
    /// Largest relative deviation over entries the analytic model predicts
    /// to be nonzero.
    pub max_relative: f64,
    /// Largest modulus of entries predicted to vanish, relative to the
    /// largest field population.
    pub max_zero_block: f64,
    pub commutator_error: f64,
    pub steps: usize,
    pub max_step_error: f64,
    pub regime_ok: bool,
}

fn entries(m: &ModeMoments) -> (Vec<Complex64>, Vec<Complex64>) {
    let c = |x: f64| Complex64::new(x, 0.0);
    let nonzero_candidates = vec![
        c(m.populations[0]),
        c(m.populations[1]),
        c(m.mechanical),
        m.coherence,
        m.anomalous[0],
        m.anomalous[1],
    ];
    let zero_blocks = vec![m.field_anomalous, m.mech_coherence[0], m.mech_coherence[1]];
    (nonzero_candidates, zero_blocks)
}

pub fn compare_to_analytic(p: &SystemParams, r: f64, tol: Tolerance) -> Result<OracleComparison> {
    let b = superposition_basis(p)?;
    let g = b.require_amplifying()?;
    let k = PulseKernels::new(p.n0, p.nm, p.gamma / g, r)?;
    let oracle = oracle_moments(p, r, tol)?;
    let analytic = [
        cavity_moments(p, &b, &k)?,
        superposition_moments(p, &b, &k)?,
    ];
    let numeric = [oracle.cavity, oracle.superposition];
    let mut max_relative: f64 = 0.0;
    let mut max_zero: f64 = 0.0;
    for (a, o) in analytic.iter().zip(&numeric) {
        let scale = a.populations[0].max(a.populations[1]).max(a.mechanical);
        let (an, az) = entries(a);
        let (on, oz) = entries(o);
        for (x, y) in an.iter().zip(&on) {
            if x.norm() <= 1e-9 * scale {
                max_zero = max_zero.max(y.norm() / scale);
            } else {
                max_relative = max_relative.max((x - y).norm() / x.norm());
            }
        }
        for (x, y) in az.iter().zip(&oz) {
            max_zero = max_zero.max((x - y).norm() / scale);
        }
    }
    Ok(OracleComparison {
        max_relative,
        max_zero_block: max_zero,
        commutator_error: oracle.commutator_error,
        steps: oracle.stats.accepted,
        max_step_error: oracle.stats.max_error,
        regime_ok: oracle.regime_ok,
    })
}
