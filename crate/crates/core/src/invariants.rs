//! Headline invariants of a lattice and its dual: first minima, covering
//! radius bounds, smoothing parameter and the point-count exponent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::enumerate::{distance_to_lattice, norms_within, shortest_vector_with, Budget};
use crate::error::{LatticeError, Result};
use crate::exec;
use crate::gaussian::{smoothing_parameter_with, DEFAULT_ETA_TOL, DEFAULT_MASS_TOL};
use crate::lattice::{dual, Lattice};
use crate::numeric::fnv1a;

/// Two norms closer than this (relatively) count as the same shell.
const SHELL_TOL: f64 = 1e-9;

/// Knobs for the deep-hole search behind the covering-radius lower bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeepHoleSearch {
    pub random_starts: usize,
    pub rounds: usize,
    /// Half-sum corners are only tried up to this dimension.
    pub corner_max_dim: usize,
    pub seed: u64,
}

impl Default for DeepHoleSearch {
    fn default() -> Self {
        Self { random_starts: 64, rounds: 50, corner_max_dim: 12, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub mass_tol: f64,
    pub eta_tol: f64,
    pub budget: u64,
    pub alpha_max: f64,
    pub deep_hole: DeepHoleSearch,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            mass_tol: DEFAULT_MASS_TOL,
            eta_tol: DEFAULT_ETA_TOL,
            budget: Budget::DEFAULT.0,
            alpha_max: 2.0,
            deep_hole: DeepHoleSearch::default(),
        }
    }
}

impl ReportConfig {
    pub fn budget(&self) -> Budget {
        Budget(self.budget)
    }
}

/// Values published for a lattice, used only to confirm computed ones.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct KnownValues {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kissing: Option<u64>,
}

/// `mu_lo <= mu(L) <= mu_hi`, with the point realizing `mu_lo`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringBounds {
    pub mu_lo: f64,
    pub mu_hi: f64,
    pub deep_hole: Vec<f64>,
    /// Half the Gram–Schmidt diameter of the reduced basis.
    pub gso_bound: f64,
    /// `sqrt(n) * eta` (upper end of the eta bracket).
    pub eta_bound: f64,
}

/// Per-lattice summary of the computed invariants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub name: String,
    pub dim: usize,
    pub det: f64,
    pub lambda1: f64,
    pub lambda1_dual: f64,
    pub kissing: u64,
    pub mu_lo: f64,
    pub mu_hi: f64,
    pub mu_exact: Option<f64>,
    pub eta: f64,
    pub eta_lo: f64,
    pub eta_hi: f64,
    pub beta_hat: f64,
    pub beta_hat_dual: f64,
    pub alpha_max: f64,
    pub deep_hole: Vec<f64>,
}

impl InvariantReport {
    /// `mu_lo * lambda1(L*) / n`.
    pub fn normalized_product_lo(&self) -> f64 {
        self.mu_lo * self.lambda1_dual / self.dim as f64
    }

    /// `mu_hi * lambda1(L*) / n`.
    pub fn normalized_product_hi(&self) -> f64 {
        self.mu_hi * self.lambda1_dual / self.dim as f64
    }

    /// `mu_lo / (sqrt(n) eta)`, to set against `1/sqrt(2 pi)`.
    pub fn mu_eta_ratio(&self) -> f64 {
        self.mu_lo / ((self.dim as f64).sqrt() * self.eta)
    }
}

/// Empirical point-count exponent: the maximum over `alpha` of
/// `(1/n) log2(N_alpha / alpha^n)`, evaluated at every shell up to
/// `alpha_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaEstimate {
    pub beta_hat: f64,
    /// Where the maximum is attained.
    pub alpha_at_max: f64,
    /// `(alpha, N_alpha)` at every distinct shell radius, ascending.
    pub samples: Vec<(f64, u64)>,
    pub lambda1: f64,
}

impl BetaEstimate {
    /// `N_alpha` for any `alpha` within the sampled range.
    pub fn count_at(&self, alpha: f64) -> u64 {
        let mut n = 0;
        for &(a, c) in &self.samples {
            if a <= alpha * (1.0 + SHELL_TOL) {
                n = c;
            } else {
                break;
            }
        }
        n
    }
}

pub fn beta_estimate(lattice: &Lattice, alpha_max: f64) -> Result<BetaEstimate> {
    beta_estimate_with(lattice, alpha_max, Budget::DEFAULT)
}

pub fn beta_estimate_with(lattice: &Lattice, alpha_max: f64, budget: Budget) -> Result<BetaEstimate> {
    if !(alpha_max >= 1.0 && alpha_max.is_finite()) {
        return Err(LatticeError::InvalidParameter(format!("alpha_max must be >= 1, got {alpha_max}")));
    }
    let lambda1 = shortest_vector_with(lattice, budget)?.dist;
    let norms = norms_within(lattice, alpha_max * lambda1, budget)?;
    Ok(beta_from_norms(lattice.dim(), lambda1, &norms))
}

/// Builds the estimate from ascending nonzero norms.
pub(crate) fn beta_from_norms(dim: usize, lambda1: f64, norms: &[f64]) -> BetaEstimate {
    let n = dim as f64;
    let mut samples: Vec<(f64, u64)> = Vec::new();
    let mut shell_start = f64::NAN;
    for (i, &d) in norms.iter().enumerate() {
        let count = (i + 1) as u64;
        if !samples.is_empty() && d <= shell_start * (1.0 + SHELL_TOL) {
            samples.last_mut().expect("non-empty").1 = count;
        } else {
            shell_start = d;
            samples.push((d / lambda1, count));
        }
    }
    if let Some(first) = samples.first_mut() {
        first.0 = 1.0;
    }
    let (beta_hat, alpha_at_max) = samples
        .iter()
        .map(|&(a, c)| (((c as f64) / a.powf(n)).log2() / n, a))
        .fold((f64::NEG_INFINITY, 1.0), |best, cur| if cur.0 > best.0 { cur } else { best });
    BetaEstimate { beta_hat, alpha_at_max, samples, lambda1 }
}

/// Lower bound from a deep-hole search, upper bound from the reduced basis
/// and from `sqrt(n) * eta`.
pub fn covering_radius_bounds(lattice: &Lattice, cfg: &ReportConfig) -> Result<CoveringBounds> {
    let eta = smoothing_parameter_with(lattice, cfg.eta_tol, cfg.mass_tol, cfg.budget())?;
    covering_radius_bounds_with_eta(lattice, eta.bracket.1, cfg)
}

/// As [`covering_radius_bounds`] with a known upper bound on `eta(L)`.
pub fn covering_radius_bounds_with_eta(lattice: &Lattice, eta_hi: f64, cfg: &ReportConfig) -> Result<CoveringBounds> {
    let n = lattice.dim();
    let red = lattice.reduction()?;
    let gso_bound = 0.5 * red.gso.norms_sq.iter().sum::<f64>().sqrt();
    let eta_bound = (n as f64).sqrt() * eta_hi;
    let (mu_lo, deep_hole) = deep_hole_search(lattice, &cfg.deep_hole, cfg.budget())?;
    Ok(CoveringBounds { mu_lo, mu_hi: gso_bound.min(eta_bound), deep_hole, gso_bound, eta_bound })
}

/// Multi-start local maximization of `dist(t, L)`. Returns the best distance
/// found and where; ties go to the earliest start.
pub fn deep_hole_search(lattice: &Lattice, search: &DeepHoleSearch, budget: Budget) -> Result<(f64, Vec<f64>)> {
    let n = lattice.dim();
    let vectors = lattice.vectors();
    let mut starts: Vec<Vec<f64>> = Vec::new();
    if n <= search.corner_max_dim {
        for mask in 0u64..(1u64 << n) {
            let mut t = vec![0.0; n];
            for (i, v) in vectors.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (x, y) in t.iter_mut().zip(v) {
                        *x += 0.5 * y;
                    }
                }
            }
            starts.push(t);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    for _ in 0..search.random_starts {
        let u: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let mut t = vec![0.0; n];
        for (v, ui) in vectors.iter().zip(&u) {
            for (x, y) in t.iter_mut().zip(v) {
                *x += ui * y;
            }
        }
        starts.push(t);
    }
    let lambda1 = shortest_vector_with(lattice, budget)?.dist;
    let results = exec::try_map(&starts, |t| refine(lattice, t.clone(), 0.5 * lambda1, search.rounds, budget))?;
    let mut best = (f64::NEG_INFINITY, vec![0.0; n]);
    for r in results {
        if r.0 > best.0 {
            best = r;
        }
    }
    Ok(best)
}

/// Coordinate ascent with step halving on `dist(t, L)`.
fn refine(lattice: &Lattice, mut t: Vec<f64>, mut step: f64, rounds: usize, budget: Budget) -> Result<(f64, Vec<f64>)> {
    let n = t.len();
    let mut dist = distance_to_lattice(lattice, &t, budget)?;
    let min_step = step * 1e-13;
    for _ in 0..rounds {
        if step < min_step {
            break;
        }
        let mut best: Option<(f64, Vec<f64>)> = None;
        for i in 0..n {
            for sign in [1.0, -1.0] {
                let mut cand = t.clone();
                cand[i] += sign * step;
                let d = distance_to_lattice(lattice, &cand, budget)?;
                if d > dist && best.as_ref().is_none_or(|b| d > b.0) {
                    best = Some((d, cand));
                }
            }
        }
        match best {
            Some((d, cand)) => {
                dist = d;
                t = cand;
            }
            None => step *= 0.5,
        }
    }
    Ok((dist, t))
}

/// Aggregates every invariant for one named lattice.
pub fn full_report(
    lattice: &Lattice,
    name: &str,
    known: Option<&KnownValues>,
    cfg: &ReportConfig,
) -> Result<InvariantReport> {
    let budget = cfg.budget();
    let n = lattice.dim();
    let dual = dual(lattice)?.into_lattice();
    let lambda1 = shortest_vector_with(lattice, budget)?.dist;
    let lambda1_dual = shortest_vector_with(&dual, budget)?.dist;
    let eta = smoothing_parameter_with(lattice, cfg.eta_tol, cfg.mass_tol, budget)?;
    let mut search = cfg.deep_hole.clone();
    search.seed ^= fnv1a(name.as_bytes());
    let local_cfg = ReportConfig { deep_hole: search, ..cfg.clone() };
    let cover = covering_radius_bounds_with_eta(lattice, eta.bracket.1, &local_cfg)?;
    let beta = beta_estimate_with(lattice, cfg.alpha_max, budget)?;
    let beta_dual = beta_estimate_with(&dual, cfg.alpha_max, budget)?;
    let mu_exact = known.and_then(|k| k.mu).filter(|&mu| {
        // Confirmed when the search reached a point at that distance and the
        // certified upper bound admits it.
        (cover.mu_lo - mu).abs() <= 1e-9 * mu.max(1.0) && mu <= cover.mu_hi * (1.0 + 1e-12)
    });
    Ok(InvariantReport {
        name: name.to_string(),
        dim: n,
        det: lattice.det(),
        lambda1,
        lambda1_dual,
        kissing: beta.count_at(1.0),
        mu_lo: cover.mu_lo,
        mu_hi: cover.mu_hi,
        mu_exact,
        eta: eta.eta,
        eta_lo: eta.bracket.0,
        eta_hi: eta.bracket.1,
        beta_hat: beta.beta_hat,
        beta_hat_dual: beta_dual.beta_hat,
        alpha_max: cfg.alpha_max,
        deep_hole: cover.deep_hole,
    })
}

/// Uniform point of the fundamental parallelepiped of `lattice`.
pub fn random_shift(lattice: &Lattice, rng: &mut impl Rng) -> Vec<f64> {
    let n = lattice.dim();
    let mut t = vec![0.0; n];
    for v in lattice.vectors() {
        let u: f64 = rng.gen();
        for (x, y) in t.iter_mut().zip(v) {
            *x += u * y;
        }
    }
    t
}
