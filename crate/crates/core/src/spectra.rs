//! Core state types and spectral decompositions.
//!
//! A [`Spectrum`] is an ordered probability vector: the eigenvalues of a
//! density matrix or the Schmidt coefficients of a bipartite pure state.
//! Every monotone in this crate is a symmetric function of the spectrum, so
//! spectra are stored sorted in non-increasing order and renormalized at
//! construction. Random-state generation is seeded explicitly and uses a
//! fixed counter-based stream, so identical seeds reproduce identical
//! states bit for bit.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::{Error, Result};

/// Entries below zero by more than this are rejected; entries within it are
/// clamped to exactly zero.
pub const ENTRY_TOL: f64 = 1e-12;
/// Largest tolerated deviation from Hermiticity, |A_ij − conj(A_ji)|.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Largest tolerated deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues of a valid state may undershoot zero by at most this much.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Largest tolerated deviation of a pure-state norm from one.
pub const NORM_TOL: f64 = 1e-8;

/// An ordered probability vector: eigenvalues or Schmidt coefficients.
///
/// Invariants established at construction: all entries nonnegative (values
/// in [−1e−12, 0) are clamped to zero), entries sum to one after
/// renormalization, and the vector is sorted in non-increasing order.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Builds a spectrum from raw weights, clamping negative noise,
    /// renormalizing to unit sum and sorting in non-increasing order.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        let mut vals = values;
        for (i, v) in vals.iter_mut().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite(*v));
            }
            if *v < -ENTRY_TOL {
                return Err(Error::NegativeEntry {
                    index: i,
                    value: *v,
                });
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let sum: f64 = vals.iter().sum();
        if sum <= 0.0 {
            return Err(Error::NotNormalizable(sum));
        }
        for v in &mut vals {
            *v /= sum;
        }
        vals.sort_unstable_by(|a, b| b.partial_cmp(a).expect("entries are finite"));
        Ok(Self { values: vals })
    }

    /// The flat spectrum (1/n, …, 1/n).
    pub fn flat(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    /// The pure spectrum (1, 0, …, 0) of ambient dimension `n`.
    pub fn pure(n: usize) -> Result<Self> {
        let mut v = vec![0.0; n];
        if let Some(first) = v.first_mut() {
            *first = 1.0;
        }
        Self::new(v)
    }

    /// Entries, sorted non-increasing.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The ambient dimension N (number of entries, zeros included).
    pub fn ambient_dim(&self) -> usize {
        self.values.len()
    }

    /// The largest entry λ_max.
    pub fn max_value(&self) -> f64 {
        self.values[0]
    }

    /// The nonzero entries (the leading prefix, since entries are sorted).
    pub fn support(&self) -> &[f64] {
        let k = self.values.iter().take_while(|&&v| v > 0.0).count();
        &self.values[..k]
    }

    /// True when only one entry is nonzero.
    pub fn is_pure(&self) -> bool {
        self.support().len() == 1
    }

    /// Copy of this spectrum extended by `extra` zero entries.
    pub fn padded(&self, extra: usize) -> Self {
        let mut values = self.values.clone();
        values.extend(std::iter::repeat_n(0.0, extra));
        Self { values }
    }
}

/// An N×N density matrix: complex Hermitian with unit trace.
///
/// Hermiticity and trace are validated at construction; positive
/// semidefiniteness is validated where the eigenvalues are first computed,
/// in [`eigen_spectrum`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianState {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HermitianState {
    /// Builds a state from row-major entries, checking Hermiticity and trace.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        if entries.len() != dim * dim {
            return Err(Error::LengthMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        for z in &entries {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite(if z.re.is_finite() { z.im } else { z.re }));
            }
        }
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                let dev = (entries[i * dim + j] - entries[j * dim + i].conj()).norm();
                worst = worst.max(dev);
            }
        }
        if worst > HERMITIAN_TOL {
            return Err(Error::NotHermitian(worst));
        }
        let trace: Complex64 = (0..dim).map(|i| entries[i * dim + i]).sum();
        if (trace.re - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne(trace.re - 1.0));
        }
        Ok(Self { dim, entries })
    }

    /// Diagonal density matrix with the given weights (renormalized).
    pub fn from_diagonal(weights: &[f64]) -> Result<Self> {
        let lam = Spectrum::new(weights.to_vec())?;
        let n = lam.ambient_dim();
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, &v) in lam.values().iter().enumerate() {
            entries[i * n + i] = Complex64::new(v, 0.0);
        }
        Self::new(n, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub(crate) fn to_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.entries)
    }
}

/// A pure state of an N×N bipartite system, stored as its coefficient
/// matrix C in a product basis: |Ψ⟩ = Σ_ij C_ij |i⟩⊗|j⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartitePureState {
    dim: usize,
    coeffs: Vec<Complex64>,
}

impl BipartitePureState {
    /// Builds a state from row-major coefficients. The squared norm must be
    /// within 1e−8 of one; the stored coefficients are renormalized exactly.
    pub fn new(dim: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        if coeffs.len() != dim * dim {
            return Err(Error::LengthMismatch {
                expected: dim * dim,
                got: coeffs.len(),
            });
        }
        for z in &coeffs {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite(if z.re.is_finite() { z.im } else { z.re }));
            }
        }
        let norm_sq: f64 = coeffs.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sq - 1.0));
        }
        let scale = norm_sq.sqrt().recip();
        let coeffs = coeffs.into_iter().map(|z| z * scale).collect();
        Ok(Self { dim, coeffs })
    }

    /// Builds a state from a rectangular coefficient matrix, zero-padding
    /// the smaller subsystem so the stored matrix is square.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.iter().map(Vec::len).max().unwrap_or(0);
        let dim = r.max(c);
        if dim == 0 {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, row) in rows.iter().enumerate() {
            for (j, &z) in row.iter().enumerate() {
                coeffs[i * dim + j] = z;
            }
        }
        Self::new(dim, coeffs)
    }

    /// The state in Schmidt form: C = diag(√λ_1, …, √λ_N).
    pub fn from_schmidt(lam: &Spectrum) -> Result<Self> {
        let n = lam.ambient_dim();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, &v) in lam.values().iter().enumerate() {
            coeffs[i * n + i] = Complex64::new(v.sqrt(), 0.0);
        }
        Self::new(n, coeffs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major coefficients.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> Complex64 {
        self.coeffs[i * self.dim + j]
    }

    /// Gram matrix C·C† (the reduced density matrix of subsystem A).
    pub(crate) fn gram(&self) -> DMatrix<Complex64> {
        let c = DMatrix::from_row_slice(self.dim, self.dim, &self.coeffs);
        &c * c.adjoint()
    }
}

/// Seed for reproducible random-state generation. The same seed always
/// yields the same stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    /// A fresh generator positioned at the start of this seed's stream.
    pub fn rng(self) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(self.0)
    }

    /// A decorrelated child seed, for deterministic per-task substreams.
    pub fn derive(self, stream: u64) -> RngSeed {
        // splitmix64 finalizer
        let mut z = self
            .0
            .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        RngSeed(z ^ (z >> 31))
    }
}

impl From<u64> for RngSeed {
    fn from(seed: u64) -> Self {
        Self(seed)
    }
}

/// Unit-rate exponential variate by inversion.
fn exp1(rng: &mut impl Rng) -> f64 {
    // 1 - u lies in (0, 1], so the log is finite
    -(1.0 - rng.gen::<f64>()).ln()
}

/// Uniform sample from the probability simplex, as normalized unit
/// exponentials (flat Dirichlet).
pub(crate) fn dirichlet_flat(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| exp1(rng)).collect();
    let sum: f64 = v.iter().sum();
    for x in &mut v {
        *x /= sum;
    }
    v
}

/// Eigenvalues of a density matrix, as a [`Spectrum`].
///
/// Uses a backward-stable Hermitian eigensolve; eigenvalues in
/// [−1e−10, 0) are clamped to zero before renormalization, anything more
/// negative is a positivity error.
pub fn eigen_spectrum(rho: &HermitianState) -> Result<Spectrum> {
    let m = rho.to_matrix();
    // symmetrize residual noise below the validation tolerance
    let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    spectrum_from_eigenvalues(m.symmetric_eigenvalues().iter().copied())
}

/// Schmidt coefficients of a bipartite pure state: the eigenvalues of the
/// Gram matrix C·C†, equivalently the squared singular values of C.
pub fn schmidt_spectrum(psi: &BipartitePureState) -> Result<Spectrum> {
    spectrum_from_eigenvalues(psi.gram().symmetric_eigenvalues().iter().copied())
}

fn spectrum_from_eigenvalues(eigs: impl Iterator<Item = f64>) -> Result<Spectrum> {
    let mut vals: Vec<f64> = eigs.collect();
    for v in &mut vals {
        if *v < -POSITIVITY_TOL {
            return Err(Error::NotPositive(*v));
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Spectrum::new(vals)
}

/// A sample from the flat Dirichlet distribution on the (n−1)-simplex.
pub fn random_spectrum(n: usize, seed: RngSeed) -> Result<Spectrum> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { min: 1, got: 0 });
    }
    let mut rng = seed.rng();
    Spectrum::new(dirichlet_flat(n, &mut rng))
}

/// A Haar-random pure state of the N×N bipartite system: independent
/// standard complex Gaussian coefficients, normalized.
pub fn random_pure_bipartite(n: usize, seed: RngSeed) -> Result<BipartitePureState> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { min: 1, got: 0 });
    }
    let mut rng = seed.rng();
    let coeffs = gaussian_matrix(n, &mut rng);
    let norm_sq: f64 = coeffs.iter().map(|z| z.norm_sqr()).sum();
    let scale = norm_sq.sqrt().recip();
    BipartitePureState::new(n, coeffs.into_iter().map(|z| z * scale).collect())
}

/// A random mixed state of dimension n: the reduced density matrix of a
/// Haar-random bipartite pure state.
pub fn random_density(n: usize, seed: RngSeed) -> Result<HermitianState> {
    let psi = random_pure_bipartite(n, seed)?;
    let gram = psi.gram();
    let entries: Vec<Complex64> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| gram[(i, j)])
        .collect();
    HermitianState::new(n, entries)
}

fn gaussian_matrix(n: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    (0..n * n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect()
}
