//! Evaluation of the spectral moment kernel μ_{q,N}.
//!
//! μ_{q,N}(λ) = Σ_i λ_i^{q+N−1} / Π_{j≠i}(λ_i − λ_j), with N the number of
//! nonzero entries. The kernel is expansible (zero entries drop out), equals
//! the complete homogeneous symmetric polynomial h_q(λ) at integer q, and is
//! the (N−1)-st divided difference of x ↦ x^{q+N−1} at the nodes λ. Three
//! evaluators implement those three readings and cross-validate each other;
//! a simplex Monte-Carlo estimator provides an independent oracle via
//!
//!   μ_{q,N} = Γ(q+N)/Γ(q+1) ∫_Δ dx (λ·x)^q .

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::spectra::{dirichlet_flat, RngSeed, Spectrum};
use crate::{Error, Result};

/// Below this pairwise gap the plain eigenvalue sum has lost too many digits
/// and callers are directed to the confluent evaluator.
pub const EIGENSUM_MIN_GAP: f64 = 1e-8;
/// Nodes closer than this (relative to the largest entry) are merged into a
/// single confluent node; below this gap the Newton table has no significant
/// digits left in double precision.
pub const NODE_MERGE_REL_TOL: f64 = 1e-9;
/// Minimum sample count accepted by the Monte-Carlo estimators.
pub const MIN_MC_SAMPLES: u64 = 1_000;

/// A moment order q. Finite by construction; integer orders are detected
/// exactly so the dispatcher can route them to the polynomial evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct MomentOrder(f64);

impl MomentOrder {
    pub fn new(q: f64) -> Result<Self> {
        if !q.is_finite() {
            return Err(Error::NonFinite(q));
        }
        Ok(Self(q))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// Some(q) when the order is a nonnegative integer represented exactly.
    pub fn as_integer(self) -> Option<u64> {
        if self.0 >= 0.0 && self.0.fract() == 0.0 && self.0 <= 2f64.powi(53) {
            Some(self.0 as u64)
        } else {
            None
        }
    }
}

/// Shorthand constructor for literal orders; panics on non-finite input.
pub fn order(q: f64) -> MomentOrder {
    MomentOrder::new(q).expect("moment order must be finite")
}

/// A Monte-Carlo estimate: sample mean, standard error of the mean, and the
/// sampling configuration that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: RngSeed,
}

impl McEstimate {
    /// Distance from `reference` in units of the standard error. Deviations
    /// within double-precision rounding of the values involved count as
    /// zero: isotropic integrands have exactly zero sample variance, and
    /// the comparison must not amplify last-ulp noise into infinities.
    pub fn sigma_distance(&self, reference: f64) -> f64 {
        let rounding = 1e-12 * self.mean.abs().max(reference.abs()).max(1.0);
        let dev = ((self.mean - reference).abs() - rounding).max(0.0);
        if self.std_error > 0.0 {
            dev / self.std_error
        } else if dev == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// The literal eigenvalue sum Σ_i λ_i^{q+N−1} / Π_{j≠i}(λ_i − λ_j) over the
/// nonzero entries. Requires all pairwise gaps above 1e−8; degenerate
/// spectra belong to [`mu_divided_difference`]. The order q = −1 is admitted
/// (the sum vanishes identically for N ≥ 2).
pub fn mu_eigensum(q: MomentOrder, lam: &Spectrum) -> Result<f64> {
    let support = lam.support();
    check_separated(support)?;
    Ok(eigensum_raw(q.get(), support))
}

fn check_separated(support: &[f64]) -> Result<()> {
    // sorted input: the smallest pairwise gap is adjacent
    for w in support.windows(2) {
        let gap = (w[0] - w[1]).abs();
        if gap <= EIGENSUM_MIN_GAP {
            return Err(Error::DegenerateSpectrum { gap });
        }
    }
    Ok(())
}

fn eigensum_raw(q: f64, support: &[f64]) -> f64 {
    let n = support.len();
    let p = q + n as f64 - 1.0;
    // Kahan compensation keeps the summation error below the term rounding
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for i in 0..n {
        let mut term = support[i].powf(p);
        for j in 0..n {
            if j != i {
                term /= support[i] - support[j];
            }
        }
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// The complete homogeneous symmetric polynomial h_q(λ) via the stable
/// all-positive recurrence `H[k][j] = H[k][j-1] + λ_j·H[k-1][j]`. Only
/// integer orders are meaningful here; zero and repeated entries are
/// handled exactly.
pub fn mu_homogeneous(q: MomentOrder, lam: &Spectrum) -> Result<f64> {
    let Some(k) = q.as_integer() else {
        return Err(Error::NonIntegerOrder(q.get()));
    };
    Ok(homogeneous_raw(k, lam.values()))
}

fn homogeneous_raw(k: u64, values: &[f64]) -> f64 {
    let k = k as usize;
    let mut h = vec![0.0f64; k + 1];
    h[0] = 1.0;
    for &x in values {
        for d in 1..=k {
            h[d] += x * h[d - 1];
        }
    }
    h[k]
}

/// μ_{q,N} as the confluent (Hermite) divided difference of f(x) = x^{q+N−1}
/// at the nonzero entries. Nodes closer than 1e−9·λ_max are merged and
/// served by the derivative values f⁽ᵏ⁾(x)/k! = Π_{m<k}(q+N−1−m)/k! ·
/// x^{q+N−1−k}, so degenerate spectra are handled without cancellation.
pub fn mu_divided_difference(q: MomentOrder, lam: &Spectrum) -> Result<f64> {
    let support = lam.support();
    Ok(divided_difference_raw(q.get(), support, lam.max_value()))
}

fn divided_difference_raw(q: f64, support: &[f64], scale: f64) -> f64 {
    let n = support.len();
    let p = q + n as f64 - 1.0;
    let mut nodes: Vec<f64> = support.to_vec();
    nodes.reverse(); // ascending
    let nodes = merge_nodes(&nodes, NODE_MERGE_REL_TOL * scale);
    confluent_divided_difference(
        &nodes,
        |x| x.powf(p),
        |k, x| {
            let mut coeff = 1.0;
            for m in 0..k {
                coeff *= (p - m as f64) / (m as f64 + 1.0);
            }
            coeff * x.powf(p - k as f64)
        },
    )
}

/// Replaces clusters of nodes with gaps below `tol` by their mean, repeated
/// once per member. Input ascending; output ascending with exact repeats.
pub(crate) fn merge_nodes(ascending: &[f64], tol: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(ascending.len());
    let mut start = 0;
    while start < ascending.len() {
        let mut end = start + 1;
        while end < ascending.len() && ascending[end] - ascending[end - 1] < tol {
            end += 1;
        }
        let cluster = &ascending[start..end];
        let mean = cluster.iter().sum::<f64>() / cluster.len() as f64;
        out.extend(std::iter::repeat_n(mean, cluster.len()));
        start = end;
    }
    out
}

/// Newton's divided-difference table with derivative substitution on
/// repeated nodes. `nodes` must be ascending with exact repeats; `value`
/// gives f(x) and `scaled_derivative(k, x)` gives f⁽ᵏ⁾(x)/k!.
pub(crate) fn confluent_divided_difference(
    nodes: &[f64],
    value: impl Fn(f64) -> f64,
    scaled_derivative: impl Fn(usize, f64) -> f64,
) -> f64 {
    let n = nodes.len();
    let mut col: Vec<f64> = nodes.iter().map(|&x| value(x)).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            col[i] = if nodes[i] == nodes[i - j] {
                scaled_derivative(j, nodes[i])
            } else {
                (col[i] - col[i - 1]) / (nodes[i] - nodes[i - j])
            };
        }
    }
    col[n - 1]
}

/// μ_{q,N} for q > 0, dispatching on the order and the spectrum: integer
/// orders go to the exact polynomial recurrence, well-separated spectra to
/// the eigenvalue sum, everything else to the confluent divided difference.
/// Zero entries are stripped first (expansibility).
pub fn mu(q: MomentOrder, lam: &Spectrum) -> Result<f64> {
    if q.get() <= 0.0 {
        return Err(Error::NonPositiveOrder(q.get()));
    }
    let support = lam.support();
    if support.len() == 1 {
        return Ok(1.0);
    }
    if q.as_integer().is_some() {
        return mu_homogeneous(q, lam);
    }
    if check_separated(support).is_ok() {
        Ok(eigensum_raw(q.get(), support))
    } else {
        Ok(divided_difference_raw(q.get(), support, lam.max_value()))
    }
}

/// ln μ_{q,N} for q > 0, stable for extreme orders.
///
/// Evaluates the kernel on the support rescaled by λ_max (μ is homogeneous
/// of degree q, so μ(λ) = λ_max^q · μ(λ/λ_max)) and returns
/// q·ln λ_max + ln μ(λ/λ_max). The rescaled kernel stays within the normal
/// double range even at orders ~10⁶ where μ itself underflows.
pub fn ln_mu(q: MomentOrder, lam: &Spectrum) -> Result<f64> {
    if q.get() <= 0.0 {
        return Err(Error::NonPositiveOrder(q.get()));
    }
    let support = lam.support();
    if support.len() == 1 {
        return Ok(0.0);
    }
    let scale = support[0];
    let scaled: Vec<f64> = support.iter().map(|&v| v / scale).collect();
    let value = if let Some(k) = q.as_integer() {
        homogeneous_raw(k, &scaled)
    } else if check_separated(&scaled).is_ok() {
        eigensum_raw(q.get(), &scaled)
    } else {
        divided_difference_raw(q.get(), &scaled, 1.0)
    };
    Ok(q.get() * scale.ln() + value.ln())
}

/// Monte-Carlo estimate of μ_{q,N} from its simplex-integral representation:
/// the sample mean of (λ·x)^q over uniform simplex draws, scaled by the
/// simplex volume 1/(N−1)! and the Γ(q+N)/Γ(q+1) prefactor (combined via
/// log-Gamma differences to avoid overflow).
pub fn mu_simplex_oracle(
    q: MomentOrder,
    lam: &Spectrum,
    samples: u64,
    seed: RngSeed,
) -> Result<McEstimate> {
    if q.get() <= 0.0 {
        return Err(Error::NonPositiveOrder(q.get()));
    }
    if samples < MIN_MC_SAMPLES {
        return Err(Error::TooFewSamples {
            min: MIN_MC_SAMPLES,
            got: samples,
        });
    }
    let n = lam.ambient_dim();
    let qv = q.get();
    let prefactor =
        (ln_gamma(qv + n as f64) - ln_gamma(qv + 1.0) - ln_gamma(n as f64)).exp();
    let weights = lam.values();
    let mut rng = seed.rng();
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for _ in 0..samples {
        let x = dirichlet_flat(n, &mut rng);
        let dot: f64 = weights.iter().zip(&x).map(|(a, b)| a * b).sum();
        let v = dot.powf(qv);
        sum += v;
        sum_sq += v * v;
    }
    let s = samples as f64;
    let mean = sum / s;
    let var = ((sum_sq - s * mean * mean) / (s - 1.0)).max(0.0);
    Ok(McEstimate {
        mean: prefactor * mean,
        std_error: prefactor * (var / s).sqrt(),
        samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::random_spectrum;

    fn spectrum(vals: &[f64]) -> Spectrum {
        Spectrum::new(vals.to_vec()).unwrap()
    }

    /// Brute-force h_q: enumerates every degree-q monomial by recursing on
    /// the exponent of the leading variable.
    fn homogeneous_enumerated(q: usize, vals: &[f64]) -> f64 {
        if q == 0 {
            return 1.0;
        }
        if vals.is_empty() {
            return 0.0;
        }
        let mut sum = 0.0;
        let mut power = 1.0;
        for e in 0..=q {
            sum += power * homogeneous_enumerated(q - e, &vals[1..]);
            power *= vals[0];
        }
        sum
    }

    #[test]
    fn enumeration_oracle_sanity() {
        // 3 degree-2 monomials in two variables: x², xy, y²
        let v = [0.5, 0.5];
        assert!((homogeneous_enumerated(2, &v) - 0.75).abs() < 1e-15);
        // C(5,2) = 10 monomials of degree 3 at the flat N=3 spectrum
        let f = 1.0 / 3.0;
        assert!((homogeneous_enumerated(3, &[f, f, f]) - 10.0 / 27.0).abs() < 1e-15);
    }

    #[test]
    fn eigensum_matches_hand_expansion() {
        // λ₁² + λ₁λ₂ + λ₂² at (0.75, 0.25)
        let lam = spectrum(&[0.75, 0.25]);
        let v = mu_eigensum(order(2.0), &lam).unwrap();
        assert!((v - 0.8125).abs() < 1e-14);
        assert!((v - homogeneous_enumerated(2, lam.values())).abs() < 1e-14);
    }

    #[test]
    fn eigensum_pure_state() {
        let lam = spectrum(&[1.0, 0.0]);
        assert!((mu_eigensum(order(2.0), &lam).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigensum_lemma_order_minus_one() {
        let lam = spectrum(&[0.6, 0.3, 0.1]);
        assert!(mu_eigensum(order(-1.0), &lam).unwrap().abs() < 1e-10);
    }

    #[test]
    fn eigensum_rejects_degenerate() {
        let lam = spectrum(&[0.5, 0.5]);
        assert!(matches!(
            mu_eigensum(order(2.0), &lam),
            Err(Error::DegenerateSpectrum { .. })
        ));
    }

    #[test]
    fn homogeneous_frozen_values() {
        assert!((mu_homogeneous(order(2.0), &spectrum(&[0.5, 0.5])).unwrap() - 0.75).abs() < 1e-15);
        assert!(
            (mu_homogeneous(order(0.0), &spectrum(&[0.3, 0.3, 0.4])).unwrap() - 1.0).abs() == 0.0
        );
        let flat3 = Spectrum::flat(3).unwrap();
        assert!(
            (mu_homogeneous(order(3.0), &flat3).unwrap() - 10.0 / 27.0).abs() < 1e-15
        );
    }

    #[test]
    fn homogeneous_rejects_non_integer() {
        assert!(matches!(
            mu_homogeneous(order(2.5), &spectrum(&[0.5, 0.5])),
            Err(Error::NonIntegerOrder(_))
        ));
    }

    #[test]
    fn homogeneous_matches_enumeration_on_random_spectra() {
        for seed in 0..20u64 {
            let lam = random_spectrum(4, RngSeed(seed)).unwrap();
            for q in [1usize, 2, 3, 4, 5] {
                let fast = mu_homogeneous(order(q as f64), &lam).unwrap();
                let slow = homogeneous_enumerated(q, lam.values());
                assert!(
                    (fast - slow).abs() <= 1e-13 * slow.abs().max(1.0),
                    "seed {seed} q {q}: {fast} vs {slow}"
                );
            }
        }
    }

    #[test]
    fn divided_difference_confluent_limit() {
        // double node at 1/2 with f(x) = x³: f'(1/2) = 3/4
        let lam = spectrum(&[0.5, 0.5]);
        let v = mu_divided_difference(order(2.0), &lam).unwrap();
        assert!((v - 0.75).abs() < 1e-14);
    }

    #[test]
    fn divided_difference_frozen_value() {
        // verified against a 300-digit evaluation of the eigenvalue sum
        let lam = spectrum(&[0.75, 0.25]);
        let v = mu_divided_difference(order(1.5), &lam).unwrap();
        assert!((v - 0.911_778_579_257_493_5).abs() < 1e-13);
    }

    #[test]
    fn divided_difference_pure_state() {
        let lam = spectrum(&[1.0, 0.0]);
        assert!((mu_divided_difference(order(3.0), &lam).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn divided_difference_flat_non_integer() {
        // f''(1/3)/2! with f(x) = x^4.5, verified at 300 digits
        let flat3 = Spectrum::flat(3).unwrap();
        let v = mu_divided_difference(order(2.5), &flat3).unwrap();
        assert!((v - 0.505_181_485_540_922_5).abs() < 1e-13);
    }

    #[test]
    fn dispatcher_expansibility_and_frozen_values() {
        let padded = spectrum(&[0.75, 0.25, 0.0]);
        assert!((mu(order(2.0), &padded).unwrap() - 0.8125).abs() < 1e-14);
        let lam = spectrum(&[0.2, 0.5, 0.3]);
        assert!((mu(order(1.0), &lam).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            mu(order(0.0), &lam),
            Err(Error::NonPositiveOrder(_))
        ));
        assert!(matches!(
            mu(order(-2.0), &lam),
            Err(Error::NonPositiveOrder(_))
        ));
    }

    #[test]
    fn dispatcher_routes_degenerate_to_confluent() {
        // f'(1/2) with f(x) = x^3.5 is 3.5·(1/2)^2.5
        let lam = spectrum(&[0.5, 0.5]);
        let expected = 3.5 * 0.5f64.powf(2.5);
        assert!((mu(order(2.5), &lam).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn ln_mu_matches_linear_domain() {
        let lam = spectrum(&[0.6, 0.3, 0.1]);
        for q in [0.5, 1.5, 2.0, 3.0, 7.5] {
            let a = ln_mu(order(q), &lam).unwrap();
            let b = mu(order(q), &lam).unwrap().ln();
            assert!((a - b).abs() < 1e-12, "q={q}: {a} vs {b}");
        }
    }

    #[test]
    fn ln_mu_extreme_orders_stay_finite() {
        let lam = spectrum(&[0.5, 0.3, 0.2]);
        let v = ln_mu(order(1000.0), &lam).unwrap();
        assert!(v.is_finite());
        // dominated by the largest entry
        assert!((v / 1000.0 - 0.5f64.ln()).abs() < 0.01);
        // degenerate spectrum at extreme order
        let flat = Spectrum::flat(3).unwrap();
        assert!(ln_mu(order(1000.0), &flat).unwrap().is_finite());
        assert!(ln_mu(order(1000.5), &flat).unwrap().is_finite());
    }

    #[test]
    fn simplex_oracle_trivial_values() {
        let pure = spectrum(&[1.0, 0.0]);
        let est = mu_simplex_oracle(order(2.0), &pure, 20_000, RngSeed(5)).unwrap();
        assert!(est.sigma_distance(1.0) < 4.0, "{est:?}");
        let lam = spectrum(&[0.3, 0.7]);
        let est = mu_simplex_oracle(order(1.0), &lam, 20_000, RngSeed(6)).unwrap();
        assert!(est.sigma_distance(1.0) < 4.0, "{est:?}");
    }

    #[test]
    fn simplex_oracle_closed_form_value() {
        let lam = spectrum(&[0.75, 0.25]);
        let est = mu_simplex_oracle(order(2.0), &lam, 200_000, RngSeed(7)).unwrap();
        assert!(est.sigma_distance(0.8125) < 4.0, "{est:?}");
    }

    #[test]
    fn simplex_oracle_rejects_small_budget() {
        let lam = spectrum(&[0.5, 0.5]);
        assert!(matches!(
            mu_simplex_oracle(order(2.0), &lam, 10, RngSeed(0)),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn merge_nodes_clusters() {
        let nodes = [0.1, 0.1 + 1e-12, 0.5, 0.9];
        let merged = merge_nodes(&nodes, 1e-9);
        assert_eq!(merged.len(), 4);
        assert_eq!(merged[0], merged[1]);
        assert!((merged[0] - (0.2 + 1e-12) / 2.0).abs() < 1e-15);
        assert_eq!(merged[2], 0.5);
    }
}
