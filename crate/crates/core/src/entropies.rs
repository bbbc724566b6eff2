//! Entropy-like monotones of a spectrum.
//!
//! The central identity: the Wehrl entropy of a state equals the subentropy
//! of its spectrum plus a dimension constant — C_N for a monopartite state
//! under its phase-space representation, 2·C_N for a bipartite pure state
//! under the product representation. The entropy excess over the
//! pure/separable floor therefore equals the subentropy in both settings,
//! and the Rényi generalizations follow from the moment kernel μ_{q,N}.
//!
//! The spectral kernel (subentropy, μ) is expansible, so zero entries are
//! stripped before evaluation; the additive constants and moment prefactors
//! use the ambient dimension, which governs the phase-space measure.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::moments::{
    confluent_divided_difference, ln_mu, merge_nodes, mu, MomentOrder, NODE_MERGE_REL_TOL,
};
use crate::spectra::Spectrum;
use crate::{Error, Result};

/// Orders closer to one than this are served by the q → 1 limit formulas;
/// any closer and the 1/(1−q) pole costs more digits than the limit does.
pub const Q_ONE_TOL: f64 = 1e-6;
/// Allowed finite-difference steps for the Wehrl q-limit check.
pub const Q_LIMIT_STEP_RANGE: (f64, f64) = (1e-6, 1e-3);

/// Which phase-space representation an entropy refers to: a single system
/// of dimension N, or an N×N bipartite system under product coherent states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Partition {
    Mono,
    Bi,
}

impl Partition {
    fn floor_multiplier(self) -> f64 {
        match self {
            Partition::Mono => 1.0,
            Partition::Bi => 2.0,
        }
    }
}

/// The constant C_N = Σ_{k=2}^{N} 1/k = Ψ(N+1) − Ψ(2): the Wehrl entropy of
/// any pure N-dimensional state.
pub fn c_n(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { min: 1, got: 0 });
    }
    Ok((2..=n).map(|k| (k as f64).recip()).sum())
}

/// The constant C_{N,q} = ln[N!·Γ(q+1)/Γ(q+N)]/(1−q): the minimal
/// Rényi–Wehrl entropy, attained by pure states. Reduces to C_N at q → 1.
pub fn c_nq(n: usize, q: MomentOrder) -> Result<f64> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { min: 1, got: 0 });
    }
    if q.get() <= 0.0 {
        return Err(Error::NonPositiveOrder(q.get()));
    }
    if (q.get() - 1.0).abs() < Q_ONE_TOL {
        return c_n(n);
    }
    Ok(ln_moment_prefactor(n, q.get()) / (1.0 - q.get()))
}

/// ln of the monopartite moment prefactor N!·Γ(q+1)/Γ(q+N), via log-Gamma
/// differences so large N or q cannot overflow.
pub(crate) fn ln_moment_prefactor(n: usize, q: f64) -> f64 {
    ln_gamma(n as f64 + 1.0) + ln_gamma(q + 1.0) - ln_gamma(q + n as f64)
}

/// Subentropy Q(λ) = −Σ_i λ_i^N ln λ_i / Π_{j≠i}(λ_i − λ_j), evaluated as
/// the negated confluent divided difference of g(x) = x^N ln x over the
/// nonzero entries (N = support size; zero entries drop out by
/// expansibility). Zero exactly for pure spectra, positive otherwise.
pub fn subentropy(lam: &Spectrum) -> f64 {
    let support = lam.support();
    let n = support.len();
    if n == 1 {
        return 0.0;
    }
    let mut nodes: Vec<f64> = support.to_vec();
    nodes.reverse();
    let nodes = merge_nodes(&nodes, NODE_MERGE_REL_TOL * lam.max_value());
    // harmonic numbers H_0..H_n for the derivative values of x^n ln x
    let mut harmonic = vec![0.0f64; n + 1];
    for k in 1..=n {
        harmonic[k] = harmonic[k - 1] + (k as f64).recip();
    }
    let nf = n as f64;
    let dd = confluent_divided_difference(
        &nodes,
        |x| x.powi(n as i32) * x.ln(),
        |k, x| {
            // g^(k)(x)/k! = C(n,k)·x^(n−k)·(ln x + H_n − H_{n−k})
            let mut binom = 1.0;
            for m in 0..k {
                binom *= (nf - m as f64) / (m as f64 + 1.0);
            }
            binom * x.powi((n - k) as i32) * (x.ln() + harmonic[n] - harmonic[n - k])
        },
    );
    (-dd).max(0.0)
}

/// Wehrl entropy of a monopartite state with spectrum λ and ambient
/// dimension n: Q(λ) + C_N.
pub fn wehrl_entropy_mono(lam: &Spectrum, n: usize) -> Result<f64> {
    check_dim(lam, n)?;
    Ok(subentropy(lam) + c_n(n)?)
}

/// Wehrl entropy of a bipartite pure state with Schmidt spectrum λ:
/// Q(λ) + 2·C_N.
pub fn wehrl_entropy_bi(lam: &Spectrum, n: usize) -> Result<f64> {
    check_dim(lam, n)?;
    Ok(subentropy(lam) + 2.0 * c_n(n)?)
}

/// Wehrl entropy excess over its pure (mono) or separable (bi) floor.
/// Identically equal to the subentropy in both partitions.
pub fn entropy_excess(lam: &Spectrum, n: usize, partition: Partition) -> Result<f64> {
    let w = match partition {
        Partition::Mono => wehrl_entropy_mono(lam, n)?,
        Partition::Bi => wehrl_entropy_bi(lam, n)?,
    };
    Ok(w - partition.floor_multiplier() * c_n(n)?)
}

/// Rényi subentropy Q_q(λ) = ln μ_{q,N} / (1−q), with the subentropy
/// substituted inside the q → 1 window. Nonnegative; zero for pure spectra.
pub fn renyi_subentropy(q: MomentOrder, lam: &Spectrum) -> Result<f64> {
    if q.get() <= 0.0 {
        return Err(Error::NonPositiveOrder(q.get()));
    }
    if (q.get() - 1.0).abs() < Q_ONE_TOL {
        return Ok(subentropy(lam));
    }
    Ok((ln_mu(q, lam)? / (1.0 - q.get())).max(0.0))
}

/// The maximum of the Rényi subentropy over spectra of dimension n,
/// attained at the flat spectrum:
/// ln[Γ(q+N) / (Γ(q+1)·(N−1)!) · N^{−q}] / (1−q), → ln N − C_N at q → 1.
///
/// The (N−1)! inside the logarithm is pinned by direct evaluation of the
/// kernel at the flat spectrum (the confluent derivative gives
/// Γ(q+N)/(Γ(q+1)·(N−1)!)·N^{−q} exactly); the tests cross-check the two
/// routes to 1e−10.
pub fn renyi_subentropy_max(n: usize, q: MomentOrder) -> Result<f64> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { min: 1, got: 0 });
    }
    if q.get() <= 0.0 {
        return Err(Error::NonPositiveOrder(q.get()));
    }
    let nf = n as f64;
    if (q.get() - 1.0).abs() < Q_ONE_TOL {
        return Ok(nf.ln() - c_n(n)?);
    }
    let qv = q.get();
    let ln_mu_flat = ln_gamma(qv + nf) - ln_gamma(qv + 1.0) - ln_gamma(nf) - qv * nf.ln();
    Ok(ln_mu_flat / (1.0 - qv))
}

/// Rescaled (Tsallis-type) moment M_q = (μ_{q,N} − 1)/(1−q), with the
/// subentropy substituted inside the q → 1 window. Zero iff pure.
pub fn rescaled_moment(q: MomentOrder, lam: &Spectrum) -> Result<f64> {
    if q.get() <= 0.0 {
        return Err(Error::NonPositiveOrder(q.get()));
    }
    if (q.get() - 1.0).abs() < Q_ONE_TOL {
        return Ok(subentropy(lam));
    }
    Ok((mu(q, lam)? - 1.0) / (1.0 - q.get()))
}

/// Rényi–Wehrl entropy S_{W,q} = ln m_q / (1−q), where m_q carries the
/// prefactor N!Γ(q+1)/Γ(q+N) once (mono) or squared (bi) over μ_{q,N}.
/// The excess S_{W,q} − C_{N,q} (mono; 2·C_{N,q} bi) equals the Rényi
/// subentropy.
pub fn renyi_wehrl(
    q: MomentOrder,
    lam: &Spectrum,
    n: usize,
    partition: Partition,
) -> Result<f64> {
    check_dim(lam, n)?;
    if q.get() <= 0.0 {
        return Err(Error::NonPositiveOrder(q.get()));
    }
    if (q.get() - 1.0).abs() < Q_ONE_TOL {
        return match partition {
            Partition::Mono => wehrl_entropy_mono(lam, n),
            Partition::Bi => wehrl_entropy_bi(lam, n),
        };
    }
    let ln_m = partition.floor_multiplier() * ln_moment_prefactor(n, q.get()) + ln_mu(q, lam)?;
    Ok(ln_m / (1.0 - q.get()))
}

/// Closed form of the Husimi moment m_q: the μ_{q,N} kernel scaled by
/// N!Γ(q+1)/Γ(q+N) once (mono) or squared (bi). This is the reference value
/// the phase-space Monte-Carlo estimators converge to.
pub fn moment_closed_form(
    q: MomentOrder,
    lam: &Spectrum,
    n: usize,
    partition: Partition,
) -> Result<f64> {
    check_dim(lam, n)?;
    if q.get() <= 0.0 {
        return Err(Error::NonPositiveOrder(q.get()));
    }
    let ln_m = partition.floor_multiplier() * ln_moment_prefactor(n, q.get()) + ln_mu(q, lam)?;
    Ok(ln_m.exp())
}

/// Rényi entropy S_q(λ) = ln Σ λ_i^q / (1−q); Shannon entropy inside the
/// q → 1 window. Evaluated on the rescaled support so extreme orders do not
/// underflow.
pub fn renyi_entropy(q: MomentOrder, lam: &Spectrum) -> Result<f64> {
    if q.get() <= 0.0 {
        return Err(Error::NonPositiveOrder(q.get()));
    }
    if (q.get() - 1.0).abs() < Q_ONE_TOL {
        return Ok(von_neumann(lam));
    }
    let scale = lam.max_value();
    let qv = q.get();
    let power_sum: f64 = lam.support().iter().map(|&v| (v / scale).powf(qv)).sum();
    Ok((qv * scale.ln() + power_sum.ln()) / (1.0 - qv) + 0.0)
}

/// Von Neumann (Shannon) entropy −Σ λ_i ln λ_i over the nonzero entries.
pub fn von_neumann(lam: &Spectrum) -> f64 {
    // + 0.0 turns the pure-spectrum −0.0 into 0.0
    -lam.support().iter().map(|&v| v * v.ln()).sum::<f64>() + 0.0
}

/// Wehrl entropy recovered from the moments by the central finite
/// difference −[m_{1+h} − m_{1−h}]/(2h) of q ↦ m_q at q = 1. Agrees with
/// the closed form to ~h²; used as an independent route in verification.
pub fn wehrl_via_q_limit(
    lam: &Spectrum,
    n: usize,
    partition: Partition,
    h: f64,
) -> Result<f64> {
    check_dim(lam, n)?;
    if !(Q_LIMIT_STEP_RANGE.0..=Q_LIMIT_STEP_RANGE.1).contains(&h) {
        return Err(Error::StepOutOfRange(h));
    }
    let m = |qv: f64| -> Result<f64> {
        let q = MomentOrder::new(qv)?;
        let ln_m =
            partition.floor_multiplier() * ln_moment_prefactor(n, qv) + ln_mu(q, lam)?;
        Ok(ln_m.exp())
    };
    Ok(-(m(1.0 + h)? - m(1.0 - h)?) / (2.0 * h))
}

/// One row of a q-grid scan.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScanRow {
    pub q: f64,
    pub renyi: f64,
    pub renyi_sub: f64,
    pub tsallis_moment: f64,
    pub renyi_wehrl_mono: f64,
    pub renyi_wehrl_bi: f64,
}

/// Grid diagnostics for the behavior of Q_q as a function of q: whether the
/// sampled column is non-decreasing and concave. Reported, never asserted.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConjectureDiagnostics {
    pub renyi_sub_nondecreasing_in_q: bool,
    pub renyi_sub_concave_in_q: bool,
    /// Largest observed decrease Q_q(i) − Q_q(i+1) over adjacent grid
    /// points (positive values witness non-monotonicity).
    pub worst_monotonicity_slack: f64,
    /// Largest observed increase between consecutive difference quotients
    /// (positive values witness non-concavity).
    pub worst_concavity_slack: f64,
}

/// Violations smaller than this are treated as rounding noise in the
/// conjecture diagnostics.
pub const CONJECTURE_NOISE_TOL: f64 = 1e-9;

/// Scalar entropies plus a q-grid scan of the Rényi families for one
/// spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyReport {
    /// Which input produced the spectrum (provenance metadata).
    pub source: String,
    pub n: usize,
    pub spectrum: Spectrum,
    pub von_neumann: f64,
    pub subentropy: f64,
    pub wehrl_mono: f64,
    pub wehrl_bi: f64,
    pub excess: f64,
    pub scan: Vec<ScanRow>,
    pub conjecture: ConjectureDiagnostics,
}

/// Tabulates S_q, Q_q, M_q and S_{W,q} on the grid together with the scalar
/// entropies and the q-monotonicity diagnostics.
pub fn q_scan(lam: &Spectrum, q_grid: &[MomentOrder]) -> Result<EntropyReport> {
    let n = lam.ambient_dim();
    let mut scan = Vec::with_capacity(q_grid.len());
    for &q in q_grid {
        scan.push(ScanRow {
            q: q.get(),
            renyi: renyi_entropy(q, lam)?,
            renyi_sub: renyi_subentropy(q, lam)?,
            tsallis_moment: rescaled_moment(q, lam)?,
            renyi_wehrl_mono: renyi_wehrl(q, lam, n, Partition::Mono)?,
            renyi_wehrl_bi: renyi_wehrl(q, lam, n, Partition::Bi)?,
        });
    }
    Ok(EntropyReport {
        source: "spectrum".to_owned(),
        n,
        spectrum: lam.clone(),
        von_neumann: von_neumann(lam),
        subentropy: subentropy(lam),
        wehrl_mono: wehrl_entropy_mono(lam, n)?,
        wehrl_bi: wehrl_entropy_bi(lam, n)?,
        excess: entropy_excess(lam, n, Partition::Mono)?,
        conjecture: conjecture_diagnostics(&scan),
        scan,
    })
}

fn conjecture_diagnostics(scan: &[ScanRow]) -> ConjectureDiagnostics {
    let mut points: Vec<(f64, f64)> = scan.iter().map(|r| (r.q, r.renyi_sub)).collect();
    points.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("orders are finite"));
    points.dedup_by(|a, b| a.0 == b.0);
    let mut worst_mono = f64::NEG_INFINITY;
    for w in points.windows(2) {
        worst_mono = worst_mono.max(w[0].1 - w[1].1);
    }
    let slopes: Vec<f64> = points
        .windows(2)
        .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
        .collect();
    let mut worst_concave = f64::NEG_INFINITY;
    for w in slopes.windows(2) {
        worst_concave = worst_concave.max(w[1] - w[0]);
    }
    let finite_or_zero = |v: f64| if v.is_finite() { v } else { 0.0 };
    let worst_mono = finite_or_zero(worst_mono);
    let worst_concave = finite_or_zero(worst_concave);
    ConjectureDiagnostics {
        renyi_sub_nondecreasing_in_q: worst_mono <= CONJECTURE_NOISE_TOL,
        renyi_sub_concave_in_q: worst_concave <= CONJECTURE_NOISE_TOL,
        worst_monotonicity_slack: worst_mono,
        worst_concavity_slack: worst_concave,
    }
}

fn check_dim(lam: &Spectrum, n: usize) -> Result<()> {
    if lam.ambient_dim() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: lam.ambient_dim(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::order;

    const LN_2: f64 = std::f64::consts::LN_2;

    fn spectrum(vals: &[f64]) -> Spectrum {
        Spectrum::new(vals.to_vec()).unwrap()
    }

    #[test]
    fn c_n_values() {
        assert_eq!(c_n(1).unwrap(), 0.0);
        assert_eq!(c_n(2).unwrap(), 0.5);
        assert!((c_n(4).unwrap() - 13.0 / 12.0).abs() < 1e-15);
        assert!(matches!(c_n(0), Err(Error::DimensionTooSmall { .. })));
    }

    #[test]
    fn c_nq_values() {
        // 2!·Γ(3)/Γ(4) = 2/3, so C_{2,2} = −ln(2/3) = ln(3/2)
        assert!((c_nq(2, order(2.0)).unwrap() - 1.5f64.ln()).abs() < 1e-14);
        assert!((c_nq(2, order(1.0 + 1e-9)).unwrap() - 0.5).abs() < 1e-14);
        assert!(c_nq(1, order(3.7)).unwrap().abs() < 1e-14);
    }

    #[test]
    fn subentropy_frozen_values() {
        assert_eq!(subentropy(&spectrum(&[1.0, 0.0])), 0.0);
        // confluent limit g'(1/2) with g(x) = x² ln x, verified at 300 digits
        assert!((subentropy(&spectrum(&[0.5, 0.5])) - (LN_2 - 0.5)).abs() < 1e-14);
        assert!(
            (subentropy(&spectrum(&[0.75, 0.25])) - 0.150_355_536_368_267_2).abs() < 1e-14
        );
        let flat3 = Spectrum::flat(3).unwrap();
        assert!((subentropy(&flat3) - (3.0f64.ln() - 5.0 / 6.0)).abs() < 1e-14);
    }

    #[test]
    fn subentropy_expansible() {
        let a = subentropy(&spectrum(&[0.75, 0.25]));
        let b = subentropy(&spectrum(&[0.75, 0.25, 0.0]));
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn subentropy_cross_checked_by_rescaled_moment_limit() {
        // M_q → Q as q → 1, through the independent linear-domain route
        let lam = spectrum(&[0.75, 0.25]);
        let q = subentropy(&lam);
        let h = 1e-4;
        let avg = 0.5
            * (rescaled_moment(order(1.0 + h), &lam).unwrap()
                + rescaled_moment(order(1.0 - h), &lam).unwrap());
        assert!((avg - q).abs() < 1e-6, "{avg} vs {q}");
    }

    #[test]
    fn wehrl_mono_values() {
        assert!((wehrl_entropy_mono(&spectrum(&[1.0, 0.0]), 2).unwrap() - 0.5).abs() < 1e-14);
        assert!((wehrl_entropy_mono(&spectrum(&[0.5, 0.5]), 2).unwrap() - LN_2).abs() < 1e-14);
        let flat3 = Spectrum::flat(3).unwrap();
        assert!(
            (wehrl_entropy_mono(&flat3, 3).unwrap() - 3.0f64.ln()).abs() < 1e-14
        );
        assert!(matches!(
            wehrl_entropy_mono(&flat3, 4),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn wehrl_bi_values() {
        assert!((wehrl_entropy_bi(&spectrum(&[1.0, 0.0]), 2).unwrap() - 1.0).abs() < 1e-14);
        assert!(
            (wehrl_entropy_bi(&spectrum(&[0.5, 0.5]), 2).unwrap() - (LN_2 - 0.5 + 1.0)).abs()
                < 1e-14
        );
        assert!(
            (wehrl_entropy_bi(&spectrum(&[1.0, 0.0, 0.0]), 3).unwrap() - 5.0 / 3.0).abs() < 1e-14
        );
    }

    #[test]
    fn excess_equals_subentropy() {
        for vals in [&[1.0, 0.0][..], &[0.5, 0.5], &[0.75, 0.25]] {
            let lam = spectrum(vals);
            let q = subentropy(&lam);
            let n = lam.ambient_dim();
            let mono = entropy_excess(&lam, n, Partition::Mono).unwrap();
            let bi = entropy_excess(&lam, n, Partition::Bi).unwrap();
            assert!((mono - q).abs() < 1e-12);
            assert!((bi - q).abs() < 1e-12);
        }
    }

    #[test]
    fn renyi_subentropy_frozen_values() {
        let bell = spectrum(&[0.5, 0.5]);
        assert!((renyi_subentropy(order(2.0), &bell).unwrap() - (4.0f64 / 3.0).ln()).abs() < 1e-14);
        let pure = spectrum(&[1.0, 0.0]);
        for q in [0.25, 1.0, 2.0, 50.0, 1000.0] {
            assert_eq!(renyi_subentropy(order(q), &pure).unwrap(), 0.0);
        }
        let lam = spectrum(&[0.75, 0.25]);
        let q1000 = renyi_subentropy(order(1000.0), &lam).unwrap();
        assert!((q1000 - (-(0.75f64.ln()))).abs() < 1e-2);
    }

    #[test]
    fn renyi_subentropy_max_matches_flat_evaluation() {
        for n in 2..=6usize {
            let flat = Spectrum::flat(n).unwrap();
            for q in [0.5, 2.0, 5.0] {
                let direct = renyi_subentropy(order(q), &flat).unwrap();
                let closed = renyi_subentropy_max(n, order(q)).unwrap();
                assert!(
                    (direct - closed).abs() < 1e-12,
                    "n={n} q={q}: {direct} vs {closed}"
                );
            }
            let direct = subentropy(&flat);
            let closed = renyi_subentropy_max(n, order(1.0)).unwrap();
            assert!((direct - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn renyi_subentropy_max_frozen_values() {
        // verified at 300 digits against the eigenvalue sum
        assert!(
            (renyi_subentropy_max(3, order(0.5)).unwrap() - 0.158_605_030_176_638_58).abs()
                < 1e-13
        );
        assert!(
            (renyi_subentropy_max(4, order(5.0)).unwrap() - 0.726_530_028_716_076).abs() < 1e-13
        );
        assert!(
            (renyi_subentropy_max(6, order(5.0)).unwrap() - 0.857_342_064_657_212_9).abs() < 1e-13
        );
    }

    #[test]
    fn rescaled_moment_values() {
        let bell = spectrum(&[0.5, 0.5]);
        assert!((rescaled_moment(order(2.0), &bell).unwrap() - 0.25).abs() < 1e-14);
        let pure = spectrum(&[1.0, 0.0]);
        assert_eq!(rescaled_moment(order(2.0), &pure).unwrap(), 0.0);
        let lam = spectrum(&[0.75, 0.25]);
        assert!(
            (rescaled_moment(order(1.0 + 1e-9), &lam).unwrap() - 0.150_355_536_368_267_2).abs()
                < 1e-14
        );
    }

    #[test]
    fn renyi_wehrl_frozen_values() {
        let pure = spectrum(&[1.0, 0.0]);
        let v = renyi_wehrl(order(2.0), &pure, 2, Partition::Mono).unwrap();
        assert!((v - 1.5f64.ln()).abs() < 1e-14);
        let v = renyi_wehrl(order(2.0), &pure, 2, Partition::Bi).unwrap();
        assert!((v - 2.0 * 1.5f64.ln()).abs() < 1e-13);
        // −ln(0.8125·4/9), verified at 300 digits
        let lam = spectrum(&[0.75, 0.25]);
        let v = renyi_wehrl(order(2.0), &lam, 2, Partition::Bi).unwrap();
        assert!((v - 1.018_569_580_994_573_3).abs() < 1e-13);
    }

    #[test]
    fn moment_closed_form_values() {
        let pure = spectrum(&[1.0, 0.0]);
        let m = moment_closed_form(order(2.0), &pure, 2, Partition::Mono).unwrap();
        assert!((m - 2.0 / 3.0).abs() < 1e-14);
        let m = moment_closed_form(order(2.0), &pure, 2, Partition::Bi).unwrap();
        assert!((m - 4.0 / 9.0).abs() < 1e-14);
        let bell = spectrum(&[0.5, 0.5]);
        let m = moment_closed_form(order(2.0), &bell, 2, Partition::Bi).unwrap();
        assert!((m - 1.0 / 3.0).abs() < 1e-14);
        let m = moment_closed_form(order(1.0 + 1e-12), &bell, 2, Partition::Mono).unwrap();
        assert!((m - 1.0).abs() < 1e-9);
    }

    #[test]
    fn renyi_wehrl_excess_identity() {
        let lam = spectrum(&[0.6, 0.3, 0.1]);
        for q in [0.5, 2.0, 3.5, 7.0] {
            let q = order(q);
            let mono =
                renyi_wehrl(q, &lam, 3, Partition::Mono).unwrap() - c_nq(3, q).unwrap();
            let bi =
                renyi_wehrl(q, &lam, 3, Partition::Bi).unwrap() - 2.0 * c_nq(3, q).unwrap();
            let sub = renyi_subentropy(q, &lam).unwrap();
            assert!((mono - sub).abs() < 1e-10, "mono {mono} vs {sub}");
            assert!((bi - sub).abs() < 1e-10, "bi {bi} vs {sub}");
        }
    }

    #[test]
    fn renyi_entropy_values() {
        let bell = spectrum(&[0.5, 0.5]);
        for q in [0.5, 1.0, 2.0, 10.0] {
            assert!((renyi_entropy(order(q), &bell).unwrap() - LN_2).abs() < 1e-12);
        }
        let lam = spectrum(&[0.75, 0.25]);
        assert!(
            (renyi_entropy(order(2.0), &lam).unwrap() - 0.470_003_629_245_735_6).abs() < 1e-14
        );
        assert!(
            (renyi_entropy(order(1000.0), &lam).unwrap() - (-(0.75f64.ln()))).abs() < 1e-2
        );
    }

    #[test]
    fn von_neumann_values() {
        assert_eq!(von_neumann(&spectrum(&[1.0, 0.0])), 0.0);
        assert!((von_neumann(&spectrum(&[0.5, 0.5])) - LN_2).abs() < 1e-14);
        assert!(
            (von_neumann(&spectrum(&[0.75, 0.25])) - 0.562_335_144_618_808_3).abs() < 1e-14
        );
    }

    #[test]
    fn wehrl_q_limit_matches_closed_form() {
        let h = 1e-4;
        let pure = spectrum(&[1.0, 0.0]);
        let v = wehrl_via_q_limit(&pure, 2, Partition::Mono, h).unwrap();
        assert!((v - 0.5).abs() < 1e-5, "{v}");
        let bell = spectrum(&[0.5, 0.5]);
        let v = wehrl_via_q_limit(&bell, 2, Partition::Mono, h).unwrap();
        assert!((v - LN_2).abs() < 1e-5, "{v}");
        let v = wehrl_via_q_limit(&bell, 2, Partition::Bi, h).unwrap();
        assert!((v - 1.193_147_180_559_945_3).abs() < 1e-5, "{v}");
    }

    #[test]
    fn wehrl_q_limit_rejects_bad_step() {
        let bell = spectrum(&[0.5, 0.5]);
        assert!(matches!(
            wehrl_via_q_limit(&bell, 2, Partition::Mono, 1e-2),
            Err(Error::StepOutOfRange(_))
        ));
        assert!(matches!(
            wehrl_via_q_limit(&bell, 2, Partition::Mono, 1e-7),
            Err(Error::StepOutOfRange(_))
        ));
    }

    #[test]
    fn q_scan_pure_spectrum_zero_column() {
        let pure = spectrum(&[1.0, 0.0]);
        let grid: Vec<MomentOrder> = [0.5, 1.0, 2.0, 10.0].map(order).to_vec();
        let report = q_scan(&pure, &grid).unwrap();
        for row in &report.scan {
            assert_eq!(row.renyi_sub, 0.0);
        }
        assert_eq!(report.excess, 0.0);
    }

    #[test]
    fn q_scan_flat_spectrum_increasing_column() {
        let bell = spectrum(&[0.5, 0.5]);
        let grid: Vec<MomentOrder> = [0.5, 1.0, 2.0, 10.0].map(order).to_vec();
        let report = q_scan(&bell, &grid).unwrap();
        let col: Vec<f64> = report.scan.iter().map(|r| r.renyi_sub).collect();
        for w in col.windows(2) {
            assert!(w[0] < w[1], "{col:?}");
        }
        assert!(report.conjecture.renyi_sub_nondecreasing_in_q);
        assert!(report.conjecture.renyi_sub_concave_in_q);
    }

    #[test]
    fn q_scan_power_law_spectrum() {
        // p_j ∝ j³, N = 4
        let lam = spectrum(&[0.01, 0.08, 0.27, 0.64]);
        let grid: Vec<MomentOrder> = (0..50)
            .map(|i| order(0.1 + i as f64 * (20.0 - 0.1) / 49.0))
            .collect();
        let report = q_scan(&lam, &grid).unwrap();
        for w in report.scan.windows(2) {
            assert!(w[0].renyi >= w[1].renyi - 1e-12, "S_q must be non-increasing");
        }
        for row in &report.scan {
            assert!(row.renyi_sub <= row.renyi + 1e-12, "Q_q ≤ S_q at q={}", row.q);
            assert!(row.renyi.is_finite() && row.renyi_sub.is_finite());
        }
        // frozen q = 1 anchors, verified at 300 digits
        assert!((report.subentropy - 0.206_784_751_241_864).abs() < 1e-13);
        assert!((report.von_neumann - 0.887_253_735_482_345_7).abs() < 1e-13);
    }
}
