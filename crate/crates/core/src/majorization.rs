//! Majorization order and Schur-concavity property testing.
//!
//! λ ≺ ξ (λ is majorized by ξ) when the partial sums of the non-increasingly
//! sorted entries of ξ dominate those of λ. Local operations move Schmidt
//! spectra up this order, so an entanglement monotone must be Schur concave:
//! non-increasing along it. The suite here generates majorization-ordered
//! pairs by construction — λ = D·ξ with D a random convex combination of
//! permutation matrices, doubly stochastic by Birkhoff's theorem — and
//! counts violations of monotone(λ) ≥ monotone(ξ).

use rand::Rng;
use serde::Serialize;

use crate::spectra::{dirichlet_flat, RngSeed, Spectrum};
use crate::{Error, Result};

/// Slack below which a partial-sum comparison counts as a violation.
pub const SCHUR_SLACK_TOL: f64 = 1e-12;
/// Rounding headroom in the majorization partial-sum comparisons.
pub const MAJORIZATION_TOL: f64 = 1e-12;
/// Permutation matrices mixed into each random doubly-stochastic matrix,
/// per dimension unit.
const PERMUTATIONS_PER_DIM: usize = 2;

/// A pair ordered by majorization: `lower` ≺ `upper`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorizationPair {
    lower: Spectrum,
    upper: Spectrum,
}

impl MajorizationPair {
    /// Validates the ordering at construction.
    pub fn new(lower: Spectrum, upper: Spectrum) -> Result<Self> {
        if !majorizes(&upper, &lower)? {
            return Err(Error::NotNormalizable(f64::NAN)); // unreachable via generators
        }
        Ok(Self { lower, upper })
    }

    /// The majorized (more mixed) spectrum λ.
    pub fn lower(&self) -> &Spectrum {
        &self.lower
    }

    /// The majorizing (less mixed) spectrum ξ.
    pub fn upper(&self) -> &Spectrum {
        &self.upper
    }
}

/// True when λ ≺ ξ: with both spectra sorted non-increasing (their stored
/// order), Σ_{i≤k} λ_i ≤ Σ_{i≤k} ξ_i for every k. Totals agree by
/// normalization.
pub fn majorizes(xi: &Spectrum, lam: &Spectrum) -> Result<bool> {
    if xi.ambient_dim() != lam.ambient_dim() {
        return Err(Error::LengthMismatch {
            expected: xi.ambient_dim(),
            got: lam.ambient_dim(),
        });
    }
    let mut sum_xi = 0.0;
    let mut sum_lam = 0.0;
    for (a, b) in xi.values().iter().zip(lam.values()) {
        sum_xi += a;
        sum_lam += b;
        if sum_lam > sum_xi + MAJORIZATION_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Draws ξ from the flat Dirichlet distribution and produces λ = D·ξ, where
/// D is a convex combination of 2n random permutation matrices with flat
/// Dirichlet weights. D is doubly stochastic, so λ ≺ ξ unconditionally.
pub fn random_majorized_pair(n: usize, seed: RngSeed) -> Result<MajorizationPair> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: n });
    }
    let mut rng = seed.rng();
    let upper = Spectrum::new(dirichlet_flat(n, &mut rng))?;

    let k = PERMUTATIONS_PER_DIM * n;
    let weights = dirichlet_flat(k, &mut rng);
    let mut lower_vals = vec![0.0f64; n];
    let mut perm: Vec<usize> = (0..n).collect();
    for &w in &weights {
        shuffle(&mut perm, &mut rng);
        for i in 0..n {
            lower_vals[i] += w * upper.values()[perm[i]];
        }
    }
    let lower = Spectrum::new(lower_vals)?;
    debug_assert!(majorizes(&upper, &lower)?);
    Ok(MajorizationPair { lower, upper })
}

/// Fisher–Yates shuffle driven by the caller's generator.
fn shuffle(perm: &mut [usize], rng: &mut impl Rng) {
    for i in (1..perm.len()).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
}

/// Outcome of a Schur-concavity run for one monotone.
#[derive(Debug, Clone, Serialize)]
pub struct SchurReport {
    pub monotone_name: String,
    pub pairs_tested: u64,
    pub violations: u64,
    /// Smallest observed slack monotone(lower) − monotone(upper); negative
    /// values beyond −1e−12 are counted as violations.
    pub worst_slack: f64,
}

impl SchurReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Evaluates `monotone` on generated majorization pairs and counts
/// violations of monotone(lower) ≥ monotone(upper) − 1e−12. Violations are
/// data, not errors: the report carries the count and the worst slack.
pub fn schur_concavity_suite<F>(
    name: &str,
    monotone: F,
    n_values: &[usize],
    pairs_per_n: usize,
    seed: RngSeed,
) -> Result<SchurReport>
where
    F: Fn(&Spectrum) -> f64,
{
    let mut pairs_tested = 0u64;
    let mut violations = 0u64;
    let mut worst_slack = f64::INFINITY;
    for &n in n_values {
        for k in 0..pairs_per_n {
            let pair_seed = seed.derive(((n as u64) << 32) | k as u64);
            let pair = random_majorized_pair(n, pair_seed)?;
            let slack = monotone(pair.lower()) - monotone(pair.upper());
            pairs_tested += 1;
            if slack < -SCHUR_SLACK_TOL {
                violations += 1;
            }
            worst_slack = worst_slack.min(slack);
        }
    }
    if !worst_slack.is_finite() && pairs_tested == 0 {
        worst_slack = 0.0;
    }
    Ok(SchurReport {
        monotone_name: name.to_owned(),
        pairs_tested,
        violations,
        worst_slack,
    })
}
