//! Certified discrete Gaussian masses and the smoothing parameter.
//!
//! The mass `rho_{s,r}(L - t)` sums `exp(-pi ||y - t||^2 / s^2)` over lattice
//! points at distance at least `r` from `t`. Sums are truncated at an outer
//! radius `R = u sqrt(n) s` and the omitted mass is bounded with
//!
//! ```text
//! rho_s((L - t) \ R B) <= f * C(u)^n * rho_s(L),  C(u) = sqrt(2 pi e) u exp(-pi u^2),
//! ```
//!
//! valid for `u >= 1/sqrt(2 pi)`, with `f = 1` for `t = 0` and `f = 2`
//! otherwise. For the centered mass the unknown `rho_s(L)` on the right is
//! bootstrapped from the partial sum: `rho_s(L) <= value / (1 - C(u)^n)`.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::enumerate::{search_ball, shortest_vector_with, Budget, EnumerationRequest};
use crate::error::{LatticeError, Result};
use crate::lattice::{dual, Lattice};
use crate::numeric::compensated_sum;

pub const DEFAULT_MASS_TOL: f64 = 1e-9;
pub const DEFAULT_ETA_TOL: f64 = 1e-6;

/// Target value of `rho_{1/eta}(L*)` defining the smoothing parameter.
pub const SMOOTHING_MASS: f64 = 1.5;

/// Increment of `u` while searching for a truncation radius.
const U_STEP: f64 = 0.25;
const U_MAX: f64 = 16.0;

/// Ratio between successive lower-bracket candidates for eta.
const BRACKET_SHRINK: f64 = 1.189_207_115_002_721; // 2^(1/4)

/// Parameters of `rho_{s,r}(L - t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    pub s: f64,
    pub t: Vec<f64>,
    pub r: f64,
}

impl GaussianParams {
    pub fn centered(dim: usize, s: f64) -> Self {
        Self { s, t: vec![0.0; dim], r: 0.0 }
    }

    pub fn shifted(t: Vec<f64>, s: f64) -> Self {
        Self { s, t, r: 0.0 }
    }

    pub fn with_cutoff(mut self, r: f64) -> Self {
        self.r = r;
        self
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if !(self.s > 0.0 && self.s.is_finite()) {
            return Err(LatticeError::InvalidParameter(format!(
                "Gaussian parameter s must be positive, got {}",
                self.s
            )));
        }
        if !(self.r >= 0.0 && self.r.is_finite()) {
            return Err(LatticeError::InvalidParameter(format!("cutoff radius must be nonnegative, got {}", self.r)));
        }
        if self.t.len() != dim {
            return Err(LatticeError::DimensionMismatch { expected: dim, got: self.t.len() });
        }
        Ok(())
    }
}

/// A truncated mass with certified error terms: the true mass lies in
/// `[lower(), upper()]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassResult {
    pub value: f64,
    /// Bound on the mass beyond `trunc_radius`.
    pub tail_bound: f64,
    pub trunc_radius: f64,
    /// Bound on floating-point error in `value`.
    pub rounding_bound: f64,
}

impl MassResult {
    pub fn lower(&self) -> f64 {
        (self.value - self.rounding_bound).max(0.0)
    }

    pub fn upper(&self) -> f64 {
        self.value + self.tail_bound + self.rounding_bound
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower() + self.upper())
    }

    /// Half-width of the certified window.
    pub fn error(&self) -> f64 {
        0.5 * (self.upper() - self.lower())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower() <= x && x <= self.upper()
    }
}

/// Result of the bisection for `eta(L)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothingResult {
    pub eta: f64,
    /// Certified bracket: `rho_{1/lo}(L*) > 3/2 > rho_{1/hi}(L*)`.
    pub bracket: (f64, f64),
    pub mass_at_eta: MassResult,
    /// Masses at the bracket endpoints.
    pub mass_at_lo: MassResult,
    pub mass_at_hi: MassResult,
}

/// `(sqrt(2 pi e) u exp(-pi u^2))^n`, or 1 where the bound is vacuous.
pub fn tail_factor(dim: usize, u: f64) -> f64 {
    if u < 1.0 / (2.0 * PI).sqrt() {
        return 1.0;
    }
    let base = (2.0 * PI * E).sqrt() * u * (-PI * u * u).exp();
    (dim as f64 * base.ln()).exp().min(1.0)
}

fn u_start() -> f64 {
    1.0 / (2.0 * PI).sqrt()
}

/// Smallest `u` on the search grid with `pred(u)`.
fn find_u(rel_tol: f64, pred: impl Fn(f64) -> bool) -> Result<f64> {
    let mut u = u_start();
    while u <= U_MAX {
        if pred(u) {
            return Ok(u);
        }
        u += U_STEP;
    }
    Err(LatticeError::ToleranceUnreachable { rel_tol, reason: format!("truncation parameter exceeded {U_MAX}") })
}

/// Radius slightly inside `radius`, so that points exactly on the sphere are
/// covered by the tail bound as well.
fn certified_radius(radius: f64) -> f64 {
    radius * (1.0 - 1e-9)
}

/// Float error bound for a sum of `exp(-pi d^2 / s^2)` terms with
/// `d <= radius`.
fn rounding_bound(value: f64, dim: usize, radius: f64, s: f64) -> f64 {
    let x_max = PI * radius * radius / (s * s);
    value * f64::EPSILON * (2.0 * (dim as f64 + 2.0) * x_max + 8.0)
}

fn weight(dist: f64, s: f64) -> f64 {
    (-PI * dist * dist / (s * s)).exp()
}

/// Sum over `dists` (ascending) of the weights of points with `dist >= r`.
fn sum_from(dists: &[f64], s: f64, r: f64) -> f64 {
    let start = dists.partition_point(|&d| d < r);
    compensated_sum(dists[start..].iter().map(|&d| weight(d, s)))
}

fn sorted_distances(lattice: &Lattice, center: &[f64], radius: f64, budget: Budget) -> Result<Vec<f64>> {
    let req = EnumerationRequest::new(center.to_vec(), radius).with_budget(budget);
    let mut d = search_ball(lattice, &req, |_, _, dist| Some(dist))?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Radius of the centered ball whose complement carries at most a `rel_tol`
/// fraction of `rho_s(L)` for an `n`-dimensional lattice.
pub fn truncation_radius(dim: usize, s: f64, rel_tol: f64) -> Result<f64> {
    let u = find_u(rel_tol, |u| {
        let c = tail_factor(dim, certified_radius(u));
        c < 1.0 && c / (1.0 - c) <= rel_tol
    })?;
    Ok(u * (dim as f64).sqrt() * s)
}

/// Norms of the lattice points in a centered ball, reusable for every
/// parameter `s` whose truncation radius fits inside the ball.
#[derive(Debug, Clone)]
pub struct CenteredCloud {
    dim: usize,
    radius: f64,
    dists: Vec<f64>,
}

impl CenteredCloud {
    /// Enumerates the ball needed to certify `rho_s(L)` for every parameter
    /// up to `s_max` at relative tolerance `rel_tol`.
    pub fn for_parameter(lattice: &Lattice, s_max: f64, rel_tol: f64, budget: Budget) -> Result<Self> {
        let n = lattice.dim();
        let radius = truncation_radius(n, s_max, rel_tol)?;
        let dists = sorted_distances(lattice, &vec![0.0; n], radius, budget)?;
        Ok(Self { dim: n, radius, dists })
    }

    pub fn len(&self) -> usize {
        self.dists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dists.is_empty()
    }

    /// `rho_s(L)`; errors if the ball is too small to certify `rel_tol`.
    pub fn mass(&self, s: f64, rel_tol: f64) -> Result<MassResult> {
        let n = self.dim;
        let u = certified_radius(self.radius) / ((n as f64).sqrt() * s);
        let c = tail_factor(n, u);
        if !(c < 1.0 && c / (1.0 - c) <= rel_tol) {
            return Err(LatticeError::ToleranceUnreachable {
                rel_tol,
                reason: format!("cached ball of radius {} too small for s = {s}", self.radius),
            });
        }
        let value = sum_from(&self.dists, s, 0.0);
        Ok(MassResult {
            value,
            tail_bound: value * c / (1.0 - c),
            trunc_radius: self.radius,
            rounding_bound: rounding_bound(value, n, self.radius, s),
        })
    }
}

/// Evaluates shifted and cut-off masses for one lattice and parameter,
/// reusing the certified centered mass.
#[derive(Debug, Clone)]
pub struct MassEvaluator<'a> {
    lattice: &'a Lattice,
    s: f64,
    rel_tol: f64,
    budget: Budget,
    centered: MassResult,
}

impl<'a> MassEvaluator<'a> {
    pub fn new(lattice: &'a Lattice, s: f64, rel_tol: f64, budget: Budget) -> Result<Self> {
        check_mass_tol(rel_tol)?;
        GaussianParams::centered(lattice.dim(), s).validate(lattice.dim())?;
        let centered = CenteredCloud::for_parameter(lattice, s, rel_tol, budget)?.mass(s, rel_tol)?;
        Ok(Self { lattice, s, rel_tol, budget, centered })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// The certified `rho_s(L)`.
    pub fn centered(&self) -> &MassResult {
        &self.centered
    }

    /// `rho_{s,r}(L - t)`.
    pub fn mass(&self, t: &[f64], r: f64) -> Result<MassResult> {
        Ok(self.profile(t, &[r])?.remove(0))
    }

    /// `rho_{s,r}(L - t)` for every `r` in `radii`, from one enumeration.
    ///
    /// The truncation radius is chosen so that the tail bound is at most
    /// `rel_tol` in absolute terms, which satisfies the relative contract
    /// `tail <= rel_tol * max(value, 1)` for every cutoff at once.
    pub fn profile(&self, t: &[f64], radii: &[f64]) -> Result<Vec<MassResult>> {
        let n = self.lattice.dim();
        for &r in radii {
            GaussianParams { s: self.s, t: t.to_vec(), r }.validate(n)?;
        }
        let shifted = t.iter().any(|&x| x != 0.0);
        if !shifted && radii.iter().all(|&r| r == 0.0) {
            return Ok(vec![self.centered; radii.len()]);
        }
        let factor = if shifted { 2.0 } else { 1.0 };
        let scale = (n as f64).sqrt() * self.s;
        let rho_upper = self.centered.upper();
        let tail_at = |radius: f64| factor * tail_factor(n, certified_radius(radius) / scale) * rho_upper;
        let u = find_u(self.rel_tol, |u| tail_at(u * scale) <= self.rel_tol)?;
        let ball = u * scale;
        let needs_points = radii.iter().any(|&r| r < ball);
        let dists = if needs_points { sorted_distances(self.lattice, t, ball, self.budget)? } else { Vec::new() };
        Ok(radii
            .iter()
            .map(|&r| {
                if r >= ball {
                    // Everything at distance >= r is covered by the tail bound.
                    MassResult { value: 0.0, tail_bound: tail_at(r), trunc_radius: r, rounding_bound: 0.0 }
                } else {
                    let value = sum_from(&dists, self.s, r);
                    MassResult {
                        value,
                        tail_bound: tail_at(ball),
                        trunc_radius: ball,
                        rounding_bound: rounding_bound(value, n, ball, self.s),
                    }
                }
            })
            .collect())
    }
}

fn check_mass_tol(rel_tol: f64) -> Result<()> {
    if rel_tol > 0.0 && rel_tol <= 0.1 {
        Ok(())
    } else {
        Err(LatticeError::InvalidParameter(format!("mass tolerance must lie in (0, 0.1], got {rel_tol}")))
    }
}

/// Certified `rho_{s,r}(L - t)`.
pub fn gaussian_mass(lattice: &Lattice, params: &GaussianParams, rel_tol: f64) -> Result<MassResult> {
    gaussian_mass_with(lattice, params, rel_tol, Budget::DEFAULT)
}

pub fn gaussian_mass_with(
    lattice: &Lattice,
    params: &GaussianParams,
    rel_tol: f64,
    budget: Budget,
) -> Result<MassResult> {
    params.validate(lattice.dim())?;
    MassEvaluator::new(lattice, params.s, rel_tol, budget)?.mass(&params.t, params.r)
}

/// `eta(L)`: the parameter with `rho_{1/eta}(L*) = 3/2`, by certified
/// bisection.
pub fn smoothing_parameter(lattice: &Lattice, rel_tol: f64) -> Result<SmoothingResult> {
    smoothing_parameter_with(lattice, rel_tol, DEFAULT_MASS_TOL, Budget::DEFAULT)
}

pub fn smoothing_parameter_with(
    lattice: &Lattice,
    rel_tol: f64,
    mass_tol: f64,
    budget: Budget,
) -> Result<SmoothingResult> {
    if !(rel_tol > 0.0 && rel_tol <= 0.01) {
        return Err(LatticeError::InvalidParameter(format!("eta tolerance must lie in (0, 0.01], got {rel_tol}")));
    }
    check_mass_tol(mass_tol)?;
    let dual = dual(lattice)?.into_lattice();
    let n = lattice.dim();
    let lambda1_dual = shortest_vector_with(&dual, budget)?.dist;
    // Weight exp(-pi eta^2 ||w||^2), i.e. Gaussian parameter 1/eta on L*.
    let fresh = |eta: f64| -> Result<MassResult> {
        CenteredCloud::for_parameter(&dual, 1.0 / eta, mass_tol, budget)?.mass(1.0 / eta, mass_tol)
    };

    let mut hi = (n as f64).sqrt() / lambda1_dual;
    let mut mass_hi = fresh(hi)?;
    let mut guard = 0;
    while mass_hi.upper() >= SMOOTHING_MASS {
        hi *= 2.0;
        mass_hi = fresh(hi)?;
        guard += 1;
        if guard > 60 {
            return Err(LatticeError::ToleranceUnreachable { rel_tol, reason: "no upper bracket for eta".into() });
        }
    }
    // Shrink geometrically; large steps make the final enumeration at
    // parameter 1/lo needlessly expensive.
    let mut lo = hi / BRACKET_SHRINK;
    let mut mass_lo = fresh(lo)?;
    guard = 0;
    while mass_lo.lower() <= SMOOTHING_MASS {
        hi = lo;
        mass_hi = mass_lo;
        lo /= BRACKET_SHRINK;
        mass_lo = fresh(lo)?;
        guard += 1;
        if guard > 400 {
            return Err(LatticeError::ToleranceUnreachable { rel_tol, reason: "no lower bracket for eta".into() });
        }
    }

    // One enumeration at the largest parameter serves every bisection step.
    let cloud = CenteredCloud::for_parameter(&dual, 1.0 / lo, mass_tol, budget)?;
    while hi - lo > rel_tol * 0.5 * (lo + hi) {
        let mid = 0.5 * (lo + hi);
        let m = cloud.mass(1.0 / mid, mass_tol)?;
        if m.lower() > SMOOTHING_MASS {
            lo = mid;
            mass_lo = m;
        } else if m.upper() < SMOOTHING_MASS {
            hi = mid;
            mass_hi = m;
        } else {
            return Err(LatticeError::ToleranceUnreachable {
                rel_tol,
                reason: format!("mass window [{}, {}] straddles 3/2 at eta = {mid}", m.lower(), m.upper()),
            });
        }
    }
    let eta = 0.5 * (lo + hi);
    Ok(SmoothingResult {
        eta,
        bracket: (lo, hi),
        mass_at_eta: cloud.mass(1.0 / eta, mass_tol)?,
        mass_at_lo: mass_lo,
        mass_at_hi: mass_hi,
    })
}

/// Relative gap in `rho_s(L) = s^n / det(L) * rho_{1/s}(L*)`.
pub fn poisson_residual(lattice: &Lattice, s: f64) -> Result<f64> {
    poisson_residual_with(lattice, s, DEFAULT_MASS_TOL, Budget::DEFAULT)
}

pub fn poisson_residual_with(lattice: &Lattice, s: f64, rel_tol: f64, budget: Budget) -> Result<f64> {
    let n = lattice.dim();
    let primal = gaussian_mass_with(lattice, &GaussianParams::centered(n, s), rel_tol, budget)?;
    let dual = dual(lattice)?.into_lattice();
    let dual_mass = gaussian_mass_with(&dual, &GaussianParams::centered(n, 1.0 / s), rel_tol, budget)?;
    let rhs = s.powi(n as i32) / lattice.det() * dual_mass.midpoint();
    Ok((primal.midpoint() - rhs).abs() / primal.midpoint())
}
