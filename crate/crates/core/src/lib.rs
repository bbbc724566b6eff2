//! # wehrl
//!
//! Phase-space mixedness and entanglement monotones for finite-dimensional
//! quantum states: Husimi moments, Wehrl entropy, subentropy, Rényi
//! subentropy and rescaled (Tsallis-type) moments, computed from spectra,
//! density matrices, or bipartite pure states.
//!
//! Every closed form carried by this crate can be checked against an
//! independent numerical route that ships with it:
//!
//! - the spectral moment kernel μ_{q,N} is evaluated three ways
//!   ([`mu_eigensum`], [`mu_homogeneous`], [`mu_divided_difference`]) and
//!   against a simplex Monte-Carlo integral ([`mu_simplex_oracle`]);
//! - Wehrl and Rényi–Wehrl entropies have end-to-end phase-space
//!   Monte-Carlo estimators over explicit coherent states ([`husimi`]);
//! - monotonicity under majorization (Schur concavity) is exercised by a
//!   randomized property suite ([`majorization`]).
//!
//! ## Quantities
//!
//! For a spectrum λ (eigenvalues of a density matrix, or Schmidt
//! coefficients of a bipartite pure state) of dimension N:
//!
//! | Quantity | Definition |
//! |----------|------------|
//! | μ_{q,N}  | Σ_i λ_i^{q+N−1} / Π_{j≠i}(λ_i − λ_j) |
//! | m_q      | N!Γ(q+1)/Γ(q+N) · μ_{q,N} (monopartite), squared prefactor (bipartite) |
//! | Q        | −Σ_i λ_i^N ln λ_i / Π_{j≠i}(λ_i − λ_j)  (subentropy) |
//! | S_W      | Q + C_N (monopartite), Q + 2C_N (bipartite) |
//! | Q_q      | ln μ_{q,N} / (1−q)  (Rényi subentropy) |
//! | M_q      | (μ_{q,N} − 1) / (1−q)  (rescaled moments) |
//! | C_N      | Σ_{k=2}^{N} 1/k |
//!
//! All entropies are in nats.
//!
//! ## Example
//!
//! ```rust
//! use wehrl::{order, renyi_subentropy, subentropy, wehrl_entropy_bi, Spectrum};
//!
//! let bell = Spectrum::new(vec![0.5, 0.5]).unwrap();
//! let q = subentropy(&bell); // ln 2 - 1/2
//! assert!((q - 0.193_147_180_559_945_3).abs() < 1e-12);
//! let sw = wehrl_entropy_bi(&bell, 2).unwrap(); // Q + 2 C_2
//! assert!((sw - (q + 1.0)).abs() < 1e-12);
//! assert!(renyi_subentropy(order(2.0), &bell).unwrap() > 0.0);
//! ```

use thiserror::Error;

pub mod entropies;
pub mod husimi;
pub mod majorization;
pub mod moments;
pub mod spectra;

pub use entropies::{
    c_n, c_nq, entropy_excess, moment_closed_form, q_scan, renyi_entropy, renyi_subentropy,
    renyi_subentropy_max, renyi_wehrl, rescaled_moment, subentropy, von_neumann,
    wehrl_entropy_bi, wehrl_entropy_mono, wehrl_via_q_limit, ConjectureDiagnostics,
    EntropyReport, Partition, ScanRow,
};
pub use husimi::{
    coherent_state, husimi_bi, husimi_mono, mc_identity_resolution, mc_moment_bi, mc_moment_mono,
    mc_wehrl_bi, mc_wehrl_mono, sample_fubini_study, CoherentPoint, ResolutionEstimate,
    StateVector,
};
pub use majorization::{
    majorizes, random_majorized_pair, schur_concavity_suite, MajorizationPair, SchurReport,
};
pub use moments::{
    ln_mu, mu, mu_divided_difference, mu_eigensum, mu_homogeneous, mu_simplex_oracle, order,
    McEstimate, MomentOrder,
};
pub use spectra::{
    eigen_spectrum, random_density, random_pure_bipartite, random_spectrum, schmidt_spectrum,
    BipartitePureState, HermitianState, RngSeed, Spectrum,
};

/// Errors reported by the crate. Variants map onto the failure classes of
/// the operations that produce them: input validation, domain restrictions
/// on moment orders, numerical degeneracy, and Monte-Carlo configuration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value {0} is not finite")]
    NonFinite(f64),

    #[error("dimension must be at least {min}, got {got}")]
    DimensionTooSmall { min: usize, got: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("negative entry {value:e} at index {index} exceeds tolerance")]
    NegativeEntry { index: usize, value: f64 },

    #[error("entries sum to {0:e}; cannot normalize")]
    NotNormalizable(f64),

    #[error("matrix is not Hermitian (largest deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace deviates from one by {0:e}")]
    TraceNotOne(f64),

    #[error("state is not positive semidefinite (eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("state norm deviates from one by {0:e}")]
    NotNormalized(f64),

    #[error("spectrum has a near-degenerate pair (gap {gap:e}); use mu_divided_difference")]
    DegenerateSpectrum { gap: f64 },

    #[error("moment order must be a nonnegative integer, got {0}")]
    NonIntegerOrder(f64),

    #[error("moment order must be positive, got {0}")]
    NonPositiveOrder(f64),

    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: u64, got: u64 },

    #[error("finite-difference step {0:e} outside [1e-6, 1e-3]")]
    StepOutOfRange(f64),

    #[error("coherent coordinates sum to {0}, exceeding one")]
    CoordinatesExceedOne(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
