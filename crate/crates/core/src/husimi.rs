//! Coherent states, Husimi functions, and phase-space Monte Carlo.
//!
//! Coherent states of an N-level system are parametrized by squared
//! magnitudes x_1..x_{N−1} (with Σx ≤ 1) and phases φ_1..φ_{N−1}:
//!
//!   |α⟩ = √(1−Σx)·|0⟩ + Σ_i √x_i·e^{iφ_i}|i⟩ .
//!
//! The invariant measure dμ is uniform in these coordinates with density
//! N!/(2π)^{N−1}, so its total mass is N — the unique normalization under
//! which ∫dμ |α⟩⟨α| = 1 and the first Husimi moment is one. Sampling x from
//! the flat Dirichlet distribution over the N squared magnitudes and φ
//! uniformly realizes dμ/N exactly, and every estimator below multiplies
//! the plain sample mean by the mass (N monopartite, N² bipartite).
//!
//! These estimators are the end-to-end oracle for the closed forms in
//! [`crate::moments`] and [`crate::entropies`].

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use crate::moments::{McEstimate, MomentOrder, MIN_MC_SAMPLES};
use crate::spectra::{BipartitePureState, HermitianState, RngSeed};
use crate::{Error, Result};

/// Σx may exceed one by at most this much (rounding headroom).
pub const COORDINATE_TOL: f64 = 1e-12;
/// Husimi values below this contribute zero to the H·ln H integrand.
pub const WEHRL_LOG_CUTOFF: f64 = 1e-300;
/// Husimi values may undershoot zero by at most this much before they are
/// reported as-is instead of clamped.
const HUSIMI_NOISE_TOL: f64 = 1e-12;

/// A point of the coherent-state manifold: squared-magnitude coordinates
/// x_1..x_{N−1} with Σx ≤ 1 and phases φ_1..φ_{N−1} in [0, 2π).
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentPoint {
    x: Vec<f64>,
    phi: Vec<f64>,
}

impl CoherentPoint {
    pub fn new(x: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        if phi.len() != x.len() {
            return Err(Error::LengthMismatch {
                expected: x.len(),
                got: phi.len(),
            });
        }
        let mut sum = 0.0;
        for (i, &v) in x.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite(v));
            }
            if v < 0.0 {
                return Err(Error::NegativeEntry { index: i, value: v });
            }
            sum += v;
        }
        if sum > 1.0 + COORDINATE_TOL {
            return Err(Error::CoordinatesExceedOne(sum));
        }
        for &p in &phi {
            if !p.is_finite() {
                return Err(Error::NonFinite(p));
            }
        }
        let phi = phi.into_iter().map(|p| p.rem_euclid(TAU)).collect();
        Ok(Self { x, phi })
    }

    /// The reference point x = 0, whose coherent state is |0⟩.
    pub fn origin(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        Self::new(vec![0.0; n - 1], vec![0.0; n - 1])
    }

    /// Hilbert-space dimension N of the coherent state at this point.
    pub fn dim(&self) -> usize {
        self.x.len() + 1
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }
}

/// A normalized N-component state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(norm_sq - 1.0));
        }
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }
}

/// The coherent state at a point: amplitude √(1−Σx) on |0⟩ and √x_i·e^{iφ_i}
/// on |i⟩.
pub fn coherent_state(p: &CoherentPoint) -> StateVector {
    let mut amp = Vec::with_capacity(p.dim());
    fill_amplitudes(&p.x, &p.phi, &mut amp);
    StateVector { amplitudes: amp }
}

fn fill_amplitudes(x: &[f64], phi: &[f64], out: &mut Vec<Complex64>) {
    out.clear();
    let sum: f64 = x.iter().sum();
    out.push(Complex64::new((1.0 - sum).max(0.0).sqrt(), 0.0));
    for (&xi, &ph) in x.iter().zip(phi) {
        let r = xi.sqrt();
        out.push(Complex64::new(r * ph.cos(), r * ph.sin()));
    }
}

/// Husimi function of a density matrix: H(α) = ⟨α|ϱ|α⟩ ∈ [0, 1].
pub fn husimi_mono(rho: &HermitianState, p: &CoherentPoint) -> Result<f64> {
    if p.dim() != rho.dim() {
        return Err(Error::LengthMismatch {
            expected: rho.dim(),
            got: p.dim(),
        });
    }
    let alpha = coherent_state(p);
    Ok(expectation(rho.entries(), rho.dim(), alpha.amplitudes()))
}

fn expectation(entries: &[Complex64], n: usize, amp: &[Complex64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        let mut row = Complex64::new(0.0, 0.0);
        for j in 0..n {
            row += entries[i * n + j] * amp[j];
        }
        acc += (amp[i].conj() * row).re;
    }
    // clamp eigensolver-scale noise at the positivity boundary
    if acc < 0.0 && acc > -HUSIMI_NOISE_TOL {
        0.0
    } else {
        acc
    }
}

/// Husimi function of a bipartite pure state over product coherent states:
/// H(α_A, α_B) = |⟨Ψ|α_A ⊗ α_B⟩|² ∈ [0, 1].
pub fn husimi_bi(psi: &BipartitePureState, pa: &CoherentPoint, pb: &CoherentPoint) -> Result<f64> {
    let n = psi.dim();
    if pa.dim() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: pa.dim(),
        });
    }
    if pb.dim() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: pb.dim(),
        });
    }
    let a = coherent_state(pa);
    let b = coherent_state(pb);
    Ok(overlap_sqr(
        psi.coeffs(),
        n,
        a.amplitudes(),
        b.amplitudes(),
    ))
}

fn overlap_sqr(coeffs: &[Complex64], n: usize, a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut z = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let mut t = Complex64::new(0.0, 0.0);
        for j in 0..n {
            t += coeffs[i * n + j].conj() * b[j];
        }
        z += a[i] * t;
    }
    z.norm_sqr()
}

/// Draws the squared magnitudes (flat Dirichlet over the N of them, the
/// first one implicit) and then the phases, in that fixed order.
fn sample_coordinates(
    n: usize,
    rng: &mut impl Rng,
    x: &mut Vec<f64>,
    phi: &mut Vec<f64>,
) {
    x.clear();
    phi.clear();
    let mut sum = 0.0;
    for i in 0..n {
        let e = -(1.0 - rng.gen::<f64>()).ln();
        sum += e;
        if i > 0 {
            x.push(e);
        }
    }
    for v in x.iter_mut() {
        *v /= sum;
    }
    for _ in 0..n - 1 {
        phi.push(rng.gen::<f64>() * TAU);
    }
}

/// A point drawn from the invariant (Fubini–Study) distribution: squared
/// magnitudes uniform on the simplex, phases uniform on [0, 2π)^{N−1}.
pub fn sample_fubini_study(n: usize, seed: RngSeed) -> Result<CoherentPoint> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: n });
    }
    let mut rng = seed.rng();
    let mut x = Vec::with_capacity(n - 1);
    let mut phi = Vec::with_capacity(n - 1);
    sample_coordinates(n, &mut rng, &mut x, &mut phi);
    CoherentPoint::new(x, phi)
}

fn check_mc_config(q: Option<MomentOrder>, samples: u64, n: usize) -> Result<()> {
    if let Some(q) = q {
        if q.get() <= 0.0 {
            return Err(Error::NonPositiveOrder(q.get()));
        }
    }
    if samples < MIN_MC_SAMPLES {
        return Err(Error::TooFewSamples {
            min: MIN_MC_SAMPLES,
            got: samples,
        });
    }
    if n < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: n });
    }
    Ok(())
}

fn finalize(mass: f64, sum: f64, sum_sq: f64, samples: u64, seed: RngSeed) -> McEstimate {
    let s = samples as f64;
    let mean = sum / s;
    let var = ((sum_sq - s * mean * mean) / (s - 1.0)).max(0.0);
    McEstimate {
        mean: mass * mean,
        std_error: mass * (var / s).sqrt(),
        samples,
        seed,
    }
}

/// Monte-Carlo estimate of the Husimi moment m_q = ∫ H^q dμ of a
/// monopartite state: mass N times the sample mean of H^q.
pub fn mc_moment_mono(
    rho: &HermitianState,
    q: MomentOrder,
    samples: u64,
    seed: RngSeed,
) -> Result<McEstimate> {
    let n = rho.dim();
    check_mc_config(Some(q), samples, n)?;
    let qv = q.get();
    let mut rng = seed.rng();
    let mut x = Vec::with_capacity(n - 1);
    let mut phi = Vec::with_capacity(n - 1);
    let mut amp = Vec::with_capacity(n);
    let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        sample_coordinates(n, &mut rng, &mut x, &mut phi);
        fill_amplitudes(&x, &phi, &mut amp);
        let h = expectation(rho.entries(), n, &amp).max(0.0);
        let v = h.powf(qv);
        sum += v;
        sum_sq += v * v;
    }
    Ok(finalize(n as f64, sum, sum_sq, samples, seed))
}

/// Monte-Carlo estimate of the bipartite Husimi moment
/// m_q = ∫∫ H^q dμ_A dμ_B: mass N² times the sample mean over independent
/// point pairs.
pub fn mc_moment_bi(
    psi: &BipartitePureState,
    q: MomentOrder,
    samples: u64,
    seed: RngSeed,
) -> Result<McEstimate> {
    let n = psi.dim();
    check_mc_config(Some(q), samples, n)?;
    let qv = q.get();
    let mut rng = seed.rng();
    let mut x = Vec::with_capacity(n - 1);
    let mut phi = Vec::with_capacity(n - 1);
    let (mut a, mut b) = (Vec::with_capacity(n), Vec::with_capacity(n));
    let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        sample_coordinates(n, &mut rng, &mut x, &mut phi);
        fill_amplitudes(&x, &phi, &mut a);
        sample_coordinates(n, &mut rng, &mut x, &mut phi);
        fill_amplitudes(&x, &phi, &mut b);
        let h = overlap_sqr(psi.coeffs(), n, &a, &b);
        let v = h.powf(qv);
        sum += v;
        sum_sq += v * v;
    }
    Ok(finalize((n * n) as f64, sum, sum_sq, samples, seed))
}

fn neg_h_ln_h(h: f64) -> f64 {
    if h > WEHRL_LOG_CUTOFF {
        -h * h.ln()
    } else {
        0.0
    }
}

/// Monte-Carlo estimate of the Wehrl entropy −∫ H ln H dμ of a monopartite
/// state. Converges to Q(λ) + C_N.
pub fn mc_wehrl_mono(rho: &HermitianState, samples: u64, seed: RngSeed) -> Result<McEstimate> {
    let n = rho.dim();
    check_mc_config(None, samples, n)?;
    let mut rng = seed.rng();
    let mut x = Vec::with_capacity(n - 1);
    let mut phi = Vec::with_capacity(n - 1);
    let mut amp = Vec::with_capacity(n);
    let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        sample_coordinates(n, &mut rng, &mut x, &mut phi);
        fill_amplitudes(&x, &phi, &mut amp);
        let v = neg_h_ln_h(expectation(rho.entries(), n, &amp).max(0.0));
        sum += v;
        sum_sq += v * v;
    }
    Ok(finalize(n as f64, sum, sum_sq, samples, seed))
}

/// Monte-Carlo estimate of the bipartite Wehrl entropy
/// −∫∫ H ln H dμ_A dμ_B. Converges to Q(λ) + 2·C_N.
pub fn mc_wehrl_bi(psi: &BipartitePureState, samples: u64, seed: RngSeed) -> Result<McEstimate> {
    let n = psi.dim();
    check_mc_config(None, samples, n)?;
    let mut rng = seed.rng();
    let mut x = Vec::with_capacity(n - 1);
    let mut phi = Vec::with_capacity(n - 1);
    let (mut a, mut b) = (Vec::with_capacity(n), Vec::with_capacity(n));
    let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        sample_coordinates(n, &mut rng, &mut x, &mut phi);
        fill_amplitudes(&x, &phi, &mut a);
        sample_coordinates(n, &mut rng, &mut x, &mut phi);
        fill_amplitudes(&x, &phi, &mut b);
        let v = neg_h_ln_h(overlap_sqr(psi.coeffs(), n, &a, &b));
        sum += v;
        sum_sq += v * v;
    }
    Ok(finalize((n * n) as f64, sum, sum_sq, samples, seed))
}

/// Sampled estimate of N·E[|α⟩⟨α|], which must equal the identity matrix.
#[derive(Debug, Clone)]
pub struct ResolutionEstimate {
    pub dim: usize,
    /// Row-major entry means of N·E[α_i·conj(α_j)].
    pub mean: Vec<Complex64>,
    /// Standard errors of the real parts, row-major.
    pub std_error_re: Vec<f64>,
    /// Standard errors of the imaginary parts, row-major.
    pub std_error_im: Vec<f64>,
    pub samples: u64,
    pub seed: RngSeed,
}

impl ResolutionEstimate {
    /// Worst entrywise deviation from the identity, in standard errors.
    pub fn worst_sigma_vs_identity(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                let m = self.mean[i * n + j];
                worst = worst.max(sigma_ratio(m.re - target, self.std_error_re[i * n + j]));
                worst = worst.max(sigma_ratio(m.im, self.std_error_im[i * n + j]));
            }
        }
        worst
    }
}

fn sigma_ratio(dev: f64, se: f64) -> f64 {
    let dev = dev.abs();
    if se > 0.0 {
        dev / se
    } else if dev == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Estimates the resolution of identity N·∫ (dμ/N) |α⟩⟨α| entrywise.
pub fn mc_identity_resolution(n: usize, samples: u64, seed: RngSeed) -> Result<ResolutionEstimate> {
    check_mc_config(None, samples, n)?;
    let mut rng = seed.rng();
    let mut x = Vec::with_capacity(n - 1);
    let mut phi = Vec::with_capacity(n - 1);
    let mut amp = Vec::with_capacity(n);
    let nn = n * n;
    let (mut sum_re, mut sum_im) = (vec![0.0f64; nn], vec![0.0f64; nn]);
    let (mut sq_re, mut sq_im) = (vec![0.0f64; nn], vec![0.0f64; nn]);
    for _ in 0..samples {
        sample_coordinates(n, &mut rng, &mut x, &mut phi);
        fill_amplitudes(&x, &phi, &mut amp);
        for i in 0..n {
            for j in 0..n {
                let v = amp[i] * amp[j].conj();
                let k = i * n + j;
                sum_re[k] += v.re;
                sum_im[k] += v.im;
                sq_re[k] += v.re * v.re;
                sq_im[k] += v.im * v.im;
            }
        }
    }
    let s = samples as f64;
    let mass = n as f64;
    let mut mean = Vec::with_capacity(nn);
    let (mut se_re, mut se_im) = (Vec::with_capacity(nn), Vec::with_capacity(nn));
    for k in 0..nn {
        let m_re = sum_re[k] / s;
        let m_im = sum_im[k] / s;
        mean.push(Complex64::new(mass * m_re, mass * m_im));
        let var_re = ((sq_re[k] - s * m_re * m_re) / (s - 1.0)).max(0.0);
        let var_im = ((sq_im[k] - s * m_im * m_im) / (s - 1.0)).max(0.0);
        se_re.push(mass * (var_re / s).sqrt());
        se_im.push(mass * (var_im / s).sqrt());
    }
    Ok(ResolutionEstimate {
        dim: n,
        mean,
        std_error_re: se_re,
        std_error_im: se_im,
        samples,
        seed,
    })
}
