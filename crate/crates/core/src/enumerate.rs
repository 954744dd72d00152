//! Bounded-distance enumeration of lattice points.
//!
//! Depth-first Fincke–Pohst search with Schnorr–Euchner zig-zag ordering over
//! the Gram–Schmidt data of an LLL-reduced basis. The top two tree levels are
//! expanded sequentially and the resulting subtrees searched in parallel;
//! outputs are always re-sorted into a deterministic order.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{LatticeError, Result};
use crate::exec;
use crate::field::Rational;
use crate::lattice::{combine_integer, Lattice};
use crate::lll::Reduction;
use crate::numeric::{self, CompensatedSum};

/// Absolute slack added to every radius comparison.
pub const RADIUS_SLACK: f64 = 1e-9;

/// Largest dimension accepted by [`brute_force_within`].
pub const BRUTE_FORCE_MAX_DIM: usize = 6;

/// Points whose float distance lies this close to the threshold are
/// rechecked exactly when the basis is rational.
const EXACT_RECHECK_BAND: f64 = 1e-6;

/// Relative tolerance used to decide distance ties in float mode.
const FLOAT_TIE_TOL: f64 = 1e-9;

/// Cap on the number of search-tree nodes visited by one enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(100_000_000);
}

impl Default for Budget {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Query for `{ y in L : ||y - t|| <= r }`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationRequest {
    pub center: Vec<f64>,
    pub radius: f64,
    /// Drop the point `y = t` when the center is itself a lattice point.
    pub exclude_zero_offset: bool,
    pub budget: Budget,
}

impl EnumerationRequest {
    pub fn new(center: Vec<f64>, radius: f64) -> Self {
        Self { center, radius, exclude_zero_offset: false, budget: Budget::DEFAULT }
    }

    pub fn around_origin(dim: usize, radius: f64) -> Self {
        Self::new(vec![0.0; dim], radius)
    }

    pub fn excluding_center(mut self) -> Self {
        self.exclude_zero_offset = true;
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if self.center.len() != dim {
            return Err(LatticeError::DimensionMismatch { expected: dim, got: self.center.len() });
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(LatticeError::InvalidParameter(format!("radius must be positive, got {}", self.radius)));
        }
        if self.center.iter().any(|x| !x.is_finite()) {
            return Err(LatticeError::InvalidParameter("non-finite center".into()));
        }
        Ok(())
    }
}

/// A lattice point `B z` with its distance to the request center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticePoint {
    pub coeffs: Vec<i64>,
    pub point: Vec<f64>,
    pub dist: f64,
}

/// Decides membership in the closed ball, consistently for every caller.
struct BallTest<'a> {
    lattice: &'a Lattice,
    center: &'a [f64],
    exact_center: Option<Vec<Rational>>,
    threshold: f64,
    exclude_center: bool,
}

impl<'a> BallTest<'a> {
    fn new(lattice: &'a Lattice, req: &'a EnumerationRequest) -> Self {
        let exact_center =
            lattice.is_exact().then(|| req.center.iter().map(|&x| Rational::from_float(x).expect("finite")).collect());
        Self {
            lattice,
            center: &req.center,
            exact_center,
            threshold: req.radius + RADIUS_SLACK,
            exclude_center: req.exclude_zero_offset,
        }
    }

    /// Returns the accurate distance when `point` (with original-basis
    /// coefficients `coeffs`) belongs in the output.
    fn accept(&self, coeffs: &[i64], point: &[f64]) -> Option<f64> {
        let dist_sq = numeric::compensated_sum(point.iter().zip(self.center).map(|(p, c)| (p - c) * (p - c)));
        let dist = dist_sq.sqrt();
        let near_threshold = (dist - self.threshold).abs() <= EXACT_RECHECK_BAND * self.threshold.max(1.0);
        let near_zero = dist <= EXACT_RECHECK_BAND * self.center_scale();
        if let (Some(ec), true) = (&self.exact_center, near_threshold || (self.exclude_center && near_zero)) {
            let exact = self.exact_dist_sq(coeffs, ec);
            if self.exclude_center && exact.is_zero() {
                return None;
            }
            let t = Rational::from_float(self.threshold).expect("finite");
            return (exact <= &t * &t).then_some(dist);
        }
        if self.exclude_center && dist <= 1e-12 * self.center_scale() {
            return None;
        }
        (dist <= self.threshold).then_some(dist)
    }

    fn center_scale(&self) -> f64 {
        numeric::norm_sq(self.center).sqrt().max(1.0)
    }

    fn exact_dist_sq(&self, coeffs: &[i64], center: &[Rational]) -> Rational {
        let p = self.lattice.exact_point(coeffs).expect("exact basis");
        p.iter()
            .zip(center)
            .map(|(a, b)| {
                let d = a - b;
                &d * &d
            })
            .fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Shared node counter across parallel subtrees.
struct NodeCounter {
    used: AtomicU64,
    cap: u64,
}

impl NodeCounter {
    fn new(budget: Budget) -> Self {
        Self { used: AtomicU64::new(0), cap: budget.0 }
    }

    #[inline]
    fn tick(&self, n: u64) -> Result<()> {
        let used = self.used.fetch_add(n, AtomicOrdering::Relaxed) + n;
        if used > self.cap {
            Err(LatticeError::BudgetExceeded { nodes: used, cap: self.cap })
        } else {
            Ok(())
        }
    }
}

/// Search tree over the reduced basis for one center and squared bound.
struct Tree<'a> {
    red: &'a Reduction,
    /// Center coordinates in the reduced basis.
    coords: Vec<f64>,
    bound_sq: f64,
    counter: &'a NodeCounter,
}

impl<'a> Tree<'a> {
    /// Projected center at level `k` given the fixed coefficients above it.
    #[inline]
    fn level_center(&self, k: usize, z: &[i64]) -> f64 {
        let mu = &self.red.gso.mu;
        let mut acc = CompensatedSum::new();
        acc.add(self.coords[k]);
        for i in k + 1..z.len() {
            acc.add(-mu[i][k] * (z[i] as f64 - self.coords[i]));
        }
        acc.value()
    }

    /// Calls `visit(x, partial)` for every admissible integer at level `k`,
    /// nearest to the projected center first, alternating sides.
    fn for_each_candidate(
        &self,
        k: usize,
        z: &[i64],
        partial: f64,
        mut visit: impl FnMut(i64, f64) -> Result<()>,
    ) -> Result<()> {
        let ctr = self.level_center(k, z);
        let bk = self.red.gso.norms_sq[k];
        let cost = |x: i64| {
            let d = x as f64 - ctr;
            partial + bk * d * d
        };
        let first = ctr.round() as i64;
        // Frontiers moving away from the center on each side.
        let (mut up, mut down) = if (first as f64) >= ctr { (first, first - 1) } else { (first + 1, first) };
        let (mut up_open, mut down_open) = (true, true);
        while up_open || down_open {
            let take_up = match (up_open, down_open) {
                (true, true) => (up as f64 - ctr).abs() <= (ctr - down as f64).abs(),
                (u, _) => u,
            };
            let x = if take_up { up } else { down };
            let c = cost(x);
            if c > self.bound_sq {
                if take_up {
                    up_open = false;
                } else {
                    down_open = false;
                }
                continue;
            }
            self.counter.tick(1)?;
            visit(x, c)?;
            if take_up {
                up += 1;
            } else {
                down -= 1;
            }
        }
        Ok(())
    }

    fn descend(&self, k: usize, z: &mut [i64], partial: f64, leaf: &mut dyn FnMut(&[i64]) -> Result<()>) -> Result<()> {
        let mut zc = z.to_vec();
        self.for_each_candidate(k, z, partial, |x, c| {
            zc[k] = x;
            if k == 0 {
                leaf(&zc)
            } else {
                let mut next = zc.clone();
                self.descend(k - 1, &mut next, c, leaf)
            }
        })
    }

    /// All coefficient prefixes for the top `depth` levels, with partial
    /// squared distances.
    fn prefixes(&self, depth: usize) -> Result<Vec<(Vec<i64>, f64)>> {
        let n = self.coords.len();
        let mut frontier = vec![(vec![0i64; n], 0.0)];
        for level in (n - depth..n).rev() {
            let mut next = Vec::new();
            for (z, partial) in &frontier {
                self.for_each_candidate(level, z, *partial, |x, c| {
                    let mut zz = z.clone();
                    zz[level] = x;
                    next.push((zz, c));
                    Ok(())
                })?;
            }
            frontier = next;
        }
        Ok(frontier)
    }
}

/// Runs the search and maps every lattice point inside the ball through
/// `visit(original_coeffs, point, dist)`. Output order follows the tree
/// order of the top-level split and is deterministic.
pub(crate) fn search_ball<T, F>(lattice: &Lattice, req: &EnumerationRequest, visit: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&[i64], Vec<f64>, f64) -> Option<T> + Sync,
{
    let n = lattice.dim();
    req.validate(n)?;
    let red = lattice.reduction()?;
    let test = BallTest::new(lattice, req);
    let counter = NodeCounter::new(req.budget);
    let coords: Vec<f64> = red.dual.iter().map(|d| numeric::dot(d, &req.center)).collect();
    let threshold = req.radius + RADIUS_SLACK;
    let tree = Tree { red, coords, bound_sq: threshold * threshold * (1.0 + 1e-10) + 1e-300, counter: &counter };

    let depth = n.min(2);
    let prefixes = tree.prefixes(depth)?;
    let chunks = exec::try_map(&prefixes, |(prefix, partial)| {
        let mut out = Vec::new();
        let mut leaf = |z: &[i64]| -> Result<()> {
            let point = combine_integer(&red.vectors, z);
            let coeffs = red.to_original(z);
            if let Some(dist) = test.accept(&coeffs, &point) {
                if let Some(v) = visit(&coeffs, point, dist) {
                    out.push(v);
                }
            }
            Ok(())
        };
        if depth == n {
            leaf(prefix)?;
        } else {
            let mut z = prefix.clone();
            tree.descend(n - depth - 1, &mut z, *partial, &mut leaf)?;
        }
        Ok::<_, LatticeError>(out)
    })?;
    Ok(chunks.into_iter().flatten().collect())
}

fn lex_cmp(a: &LatticePoint, b: &LatticePoint) -> Ordering {
    a.coeffs.cmp(&b.coeffs)
}

/// Every lattice point within `req.radius` of `req.center`, each once,
/// sorted lexicographically by coefficients in the lattice's own basis.
pub fn enumerate_within(lattice: &Lattice, req: &EnumerationRequest) -> Result<Vec<LatticePoint>> {
    let mut pts =
        search_ball(lattice, req, |coeffs, point, dist| Some(LatticePoint { coeffs: coeffs.to_vec(), point, dist }))?;
    pts.sort_by(lex_cmp);
    Ok(pts)
}

/// Reference implementation of [`enumerate_within`] that scans the integer
/// box `|z_i - c_i| <= ||d_i|| (r + slack)`, with `c` the coordinates of the
/// center and `d_i` the dual basis vectors. Intended for testing.
pub fn brute_force_within(lattice: &Lattice, req: &EnumerationRequest) -> Result<Vec<LatticePoint>> {
    let n = lattice.dim();
    if n > BRUTE_FORCE_MAX_DIM {
        return Err(LatticeError::DimensionTooLarge { max: BRUTE_FORCE_MAX_DIM, got: n });
    }
    req.validate(n)?;
    let test = BallTest::new(lattice, req);
    let coords = lattice.coordinates(&req.center);
    let reach = req.radius + RADIUS_SLACK;
    let ranges: Vec<(i64, i64)> = lattice
        .dual_vectors()
        .iter()
        .zip(&coords)
        .map(|(d, &c)| {
            let w = numeric::norm_sq(d).sqrt() * reach * (1.0 + 1e-9);
            ((c - w).floor() as i64, (c + w).ceil() as i64)
        })
        .collect();
    let volume: f64 = ranges.iter().map(|(lo, hi)| (hi - lo + 1) as f64).product();
    if volume > req.budget.0 as f64 {
        return Err(LatticeError::BudgetExceeded { nodes: volume as u64, cap: req.budget.0 });
    }
    let mut out = Vec::new();
    let mut z: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    'scan: loop {
        let point = lattice.point(&z);
        if let Some(dist) = test.accept(&z, &point) {
            out.push(LatticePoint { coeffs: z.clone(), point, dist });
        }
        for i in (0..n).rev() {
            if z[i] < ranges[i].1 {
                z[i] += 1;
                continue 'scan;
            }
            z[i] = ranges[i].0;
        }
        break;
    }
    out.sort_by(lex_cmp);
    Ok(out)
}

/// Among `candidates`, keeps those at the minimal distance (exactly when the
/// basis is rational) and returns the lexicographically smallest.
fn select_nearest(lattice: &Lattice, center: &[f64], candidates: Vec<LatticePoint>) -> Option<LatticePoint> {
    let min = candidates.iter().map(|p| p.dist).fold(f64::INFINITY, f64::min);
    let near: Vec<LatticePoint> =
        candidates.into_iter().filter(|p| p.dist <= min * (1.0 + FLOAT_TIE_TOL) + 1e-300).collect();
    let tied = if lattice.is_exact() && near.len() > 1 {
        let ec: Vec<Rational> = center.iter().map(|&x| Rational::from_float(x).expect("finite")).collect();
        let exact: Vec<Rational> = near
            .iter()
            .map(|p| {
                lattice
                    .exact_point(&p.coeffs)
                    .expect("exact basis")
                    .iter()
                    .zip(&ec)
                    .map(|(a, b)| (a - b) * (a - b))
                    .fold(Rational::zero(), |acc, x| acc + x)
            })
            .collect();
        let best = exact.iter().min().cloned().expect("non-empty");
        near.into_iter().zip(exact).filter(|(_, d)| *d == best).map(|(p, _)| p).collect()
    } else {
        near
    };
    tied.into_iter().min_by(lex_cmp)
}

fn budgeted_search(lattice: &Lattice, req: EnumerationRequest) -> Result<Vec<LatticePoint>> {
    enumerate_within(lattice, &req)
}

/// A shortest nonzero vector. Ties go to the lexicographically smallest
/// coefficient vector whose first nonzero entry is positive.
pub fn shortest_vector(lattice: &Lattice) -> Result<LatticePoint> {
    shortest_vector_with(lattice, Budget::DEFAULT)
}

pub fn shortest_vector_with(lattice: &Lattice, budget: Budget) -> Result<LatticePoint> {
    let red = lattice.reduction()?;
    let radius = red.vectors.iter().map(|v| numeric::norm_sq(v).sqrt()).fold(f64::INFINITY, f64::min);
    let n = lattice.dim();
    let pts =
        budgeted_search(lattice, EnumerationRequest::around_origin(n, radius).excluding_center().with_budget(budget))?;
    let positive: Vec<LatticePoint> =
        pts.into_iter().filter(|p| p.coeffs.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)).collect();
    select_nearest(lattice, &vec![0.0; n], positive)
        .ok_or_else(|| LatticeError::ReductionUnstable("no nonzero vector within the first basis norm".into()))
}

/// A lattice point closest to `target`; ties go to the lexicographically
/// smallest coefficient vector.
pub fn closest_vector(lattice: &Lattice, target: &[f64]) -> Result<LatticePoint> {
    closest_vector_with(lattice, target, Budget::DEFAULT)
}

pub fn closest_vector_with(lattice: &Lattice, target: &[f64], budget: Budget) -> Result<LatticePoint> {
    let n = lattice.dim();
    if target.len() != n {
        return Err(LatticeError::DimensionMismatch { expected: n, got: target.len() });
    }
    let babai = babai_point(lattice, target)?;
    let d = numeric::compensated_sum(babai.iter().zip(target).map(|(a, b)| (a - b) * (a - b))).sqrt();
    // A zero radius is not a valid ball; the slack keeps the Babai point.
    let radius = d.max(RADIUS_SLACK);
    let pts = budgeted_search(lattice, EnumerationRequest::new(target.to_vec(), radius).with_budget(budget))?;
    select_nearest(lattice, target, pts)
        .ok_or_else(|| LatticeError::ReductionUnstable("Babai point missing from its own ball".into()))
}

/// `dist(t, L)` by depth-first search with a shrinking bound, in float
/// arithmetic and without tie-breaking. Faster than [`closest_vector`] when
/// only the distance matters.
pub fn distance_to_lattice(lattice: &Lattice, target: &[f64], budget: Budget) -> Result<f64> {
    let n = lattice.dim();
    if target.len() != n {
        return Err(LatticeError::DimensionMismatch { expected: n, got: target.len() });
    }
    let red = lattice.reduction()?;
    let coords: Vec<f64> = red.dual.iter().map(|d| numeric::dot(d, target)).collect();
    let counter = NodeCounter::new(budget);
    let tree = Tree { red, coords, bound_sq: f64::INFINITY, counter: &counter };
    let babai = babai_point(lattice, target)?;
    let mut best_sq = numeric::compensated_sum(babai.iter().zip(target).map(|(a, b)| (a - b) * (a - b)));
    let mut best_z: Option<Vec<i64>> = None;
    let mut z = vec![0i64; n];
    nearest_descend(&tree, n - 1, &mut z, 0.0, &mut best_sq, &mut best_z)?;
    Ok(match best_z {
        Some(z) => {
            let p = combine_integer(&red.vectors, &z);
            numeric::compensated_sum(p.iter().zip(target).map(|(a, b)| (a - b) * (a - b))).sqrt()
        }
        None => best_sq.sqrt(),
    })
}

fn nearest_descend(
    tree: &Tree<'_>,
    k: usize,
    z: &mut [i64],
    partial: f64,
    best_sq: &mut f64,
    best_z: &mut Option<Vec<i64>>,
) -> Result<()> {
    let ctr = tree.level_center(k, z);
    let bk = tree.red.gso.norms_sq[k];
    let first = ctr.round() as i64;
    // Zig-zag around the center; stop each side once it exceeds the bound.
    let (mut up, mut down) = if (first as f64) >= ctr { (first, first - 1) } else { (first + 1, first) };
    let (mut up_open, mut down_open) = (true, true);
    while up_open || down_open {
        let take_up = match (up_open, down_open) {
            (true, true) => (up as f64 - ctr).abs() <= (ctr - down as f64).abs(),
            (u, _) => u,
        };
        let x = if take_up { up } else { down };
        let d = x as f64 - ctr;
        let cost = partial + bk * d * d;
        if cost >= *best_sq {
            if take_up {
                up_open = false;
            } else {
                down_open = false;
            }
            continue;
        }
        tree.counter.tick(1)?;
        z[k] = x;
        if k == 0 {
            *best_sq = cost;
            *best_z = Some(z.to_vec());
        } else {
            nearest_descend(tree, k - 1, z, cost, best_sq, best_z)?;
            for zi in z[..k].iter_mut() {
                *zi = 0;
            }
        }
        if take_up {
            up += 1;
        } else {
            down -= 1;
        }
    }
    Ok(())
}

/// Nearest-plane rounding on the reduced basis.
fn babai_point(lattice: &Lattice, target: &[f64]) -> Result<Vec<f64>> {
    let red = lattice.reduction()?;
    let n = lattice.dim();
    let coords: Vec<f64> = red.dual.iter().map(|d| numeric::dot(d, target)).collect();
    let counter = NodeCounter::new(Budget(u64::MAX));
    let tree = Tree { red, coords, bound_sq: f64::INFINITY, counter: &counter };
    let mut z = vec![0i64; n];
    for k in (0..n).rev() {
        z[k] = tree.level_center(k, &z).round() as i64;
    }
    Ok(combine_integer(&red.vectors, &z))
}

/// `N_alpha(L)`: nonzero lattice points of norm at most `alpha * lambda_1`.
pub fn count_points(lattice: &Lattice, alpha: f64) -> Result<u64> {
    count_points_with(lattice, alpha, Budget::DEFAULT)
}

pub fn count_points_with(lattice: &Lattice, alpha: f64, budget: Budget) -> Result<u64> {
    if !(alpha >= 1.0 && alpha.is_finite()) {
        return Err(LatticeError::InvalidParameter(format!("alpha must be >= 1, got {alpha}")));
    }
    let lambda1 = shortest_vector_with(lattice, budget)?.dist;
    let req = EnumerationRequest::around_origin(lattice.dim(), alpha * lambda1).excluding_center().with_budget(budget);
    Ok(search_ball(lattice, &req, |_, _, _| Some(()))?.len() as u64)
}

/// Norms of all nonzero points within `radius` of the origin,
/// ascending.
pub(crate) fn norms_within(lattice: &Lattice, radius: f64, budget: Budget) -> Result<Vec<f64>> {
    let req = EnumerationRequest::around_origin(lattice.dim(), radius).excluding_center().with_budget(budget);
    let mut d = search_ball(lattice, &req, |_, _, dist| Some(dist))?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{make_lattice, Basis};
    use crate::named;

    fn coeff_set(pts: &[LatticePoint]) -> Vec<Vec<i64>> {
        pts.iter().map(|p| p.coeffs.clone()).collect()
    }

    #[test]
    fn unit_ball_in_z2() {
        let pts = enumerate_within(&named::integer_lattice(2), &EnumerationRequest::around_origin(2, 1.0)).unwrap();
        assert_eq!(coeff_set(&pts), vec![vec![-1, 0], vec![0, -1], vec![0, 0], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn radius_one_and_a_half_in_z2() {
        let pts = enumerate_within(&named::integer_lattice(2), &EnumerationRequest::around_origin(2, 1.5)).unwrap();
        assert_eq!(pts.len(), 9);
    }

    #[test]
    fn deep_hole_corners() {
        let req = EnumerationRequest::new(vec![0.5, 0.5], 0.8);
        let pts = enumerate_within(&named::integer_lattice(2), &req).unwrap();
        assert_eq!(coeff_set(&pts), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        for p in &pts {
            assert!((p.dist - 0.5f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn integers_in_one_dimension() {
        let z1 = named::integer_lattice(1);
        let req = EnumerationRequest::around_origin(1, 3.5);
        assert_eq!(brute_force_within(&z1, &req).unwrap().len(), 7);
        assert_eq!(enumerate_within(&z1, &req).unwrap().len(), 7);
    }

    #[test]
    fn excluding_center_drops_origin_only() {
        let req = EnumerationRequest::around_origin(2, 1.0).excluding_center();
        let pts = enumerate_within(&named::integer_lattice(2), &req).unwrap();
        assert_eq!(pts.len(), 4);
        // Center off the lattice: nothing to exclude.
        let req = EnumerationRequest::new(vec![0.5, 0.5], 0.8).excluding_center();
        assert_eq!(enumerate_within(&named::integer_lattice(2), &req).unwrap().len(), 4);
    }

    #[test]
    fn matches_brute_force_on_z3() {
        let z3 = named::integer_lattice(3);
        let req = EnumerationRequest::around_origin(3, 2.0);
        assert_eq!(enumerate_within(&z3, &req).unwrap(), brute_force_within(&z3, &req).unwrap());
    }

    #[test]
    fn coefficients_refer_to_the_given_basis() {
        // Skewed basis of Z^2: enumeration reduces internally but reports
        // coefficients in the caller's basis.
        let l = make_lattice(Basis::from_integers(&[vec![1, 0], vec![10, 1]]).unwrap()).unwrap();
        let req = EnumerationRequest::around_origin(2, 1.0);
        let pts = enumerate_within(&l, &req).unwrap();
        assert_eq!(pts.len(), 5);
        for p in &pts {
            assert_eq!(l.point(&p.coeffs), p.point);
        }
        assert_eq!(pts, brute_force_within(&l, &req).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let req = EnumerationRequest::around_origin(4, 5.0).with_budget(Budget(100));
        let err = enumerate_within(&named::integer_lattice(4), &req).unwrap_err();
        assert!(matches!(err, LatticeError::BudgetExceeded { .. }));
    }

    #[test]
    fn brute_force_dimension_guard() {
        let req = EnumerationRequest::around_origin(7, 1.0);
        assert!(matches!(
            brute_force_within(&named::integer_lattice(7), &req).unwrap_err(),
            LatticeError::DimensionTooLarge { .. }
        ));
    }

    #[test]
    fn request_validation() {
        let z2 = named::integer_lattice(2);
        assert!(enumerate_within(&z2, &EnumerationRequest::around_origin(3, 1.0)).is_err());
        assert!(enumerate_within(&z2, &EnumerationRequest::around_origin(2, 0.0)).is_err());
    }

    #[test]
    fn shortest_vectors_of_named_lattices() {
        let z4 = shortest_vector(&named::integer_lattice(4)).unwrap();
        assert_eq!(z4.dist, 1.0);
        assert_eq!(z4.coeffs, vec![0, 0, 0, 1]);
        let d4 = shortest_vector(&named::d_lattice(4)).unwrap();
        assert!((d4.dist - 2f64.sqrt()).abs() < 1e-15);
        let e8 = shortest_vector(&named::e8()).unwrap();
        assert!((e8.dist - 2f64.sqrt()).abs() < 1e-15);
        let a2 = shortest_vector(&named::hexagonal()).unwrap();
        assert!((a2.dist - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closest_vector_examples() {
        let z2 = named::integer_lattice(2);
        let p = closest_vector(&z2, &[0.4, 0.7]).unwrap();
        assert_eq!(p.coeffs, vec![0, 1]);
        assert!((p.dist - 0.5).abs() < 1e-15);
        let p = closest_vector(&z2, &[0.5, 0.5]).unwrap();
        assert_eq!(p.coeffs, vec![0, 0]);
        assert!((p.dist - 0.5f64.sqrt()).abs() < 1e-15);
        let p = closest_vector(&named::d_lattice(4), &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(p.dist, 1.0);
    }

    #[test]
    fn closest_vector_on_lattice_point() {
        let d4 = named::d_lattice(4);
        let y = d4.point(&[1, -2, 0, 3]);
        let p = closest_vector(&d4, &y).unwrap();
        assert_eq!(p.coeffs, vec![1, -2, 0, 3]);
        assert_eq!(p.dist, 0.0);
    }

    #[test]
    fn fast_distance_agrees_with_closest_vector() {
        let l = named::e8();
        for i in 0..20 {
            let t: Vec<f64> = (0..8).map(|j| ((i * 7 + j * 3) % 11) as f64 / 5.0 - 1.0).collect();
            let a = distance_to_lattice(&l, &t, Budget::DEFAULT).unwrap();
            let b = closest_vector(&l, &t).unwrap().dist;
            assert!((a - b).abs() < 1e-12, "{a} {b}");
        }
    }

    #[test]
    fn point_counts() {
        let z2 = named::integer_lattice(2);
        assert_eq!(count_points(&z2, 1.0).unwrap(), 4);
        assert_eq!(count_points(&z2, 2f64.sqrt()).unwrap(), 8);
        assert_eq!(count_points(&named::d_lattice(4), 1.0).unwrap(), 24);
        assert_eq!(count_points(&named::hexagonal(), 1.0).unwrap(), 6);
        assert!(count_points(&z2, 0.5).is_err());
    }
}
