//! LLL basis reduction, exact over the rationals or in double precision.

use num_traits::{Signed, Zero};

use crate::error::{LatticeError, Result};
use crate::field::{self, Field, GramSchmidt, Rational};
use crate::lattice::{Basis, Lattice};

pub const DEFAULT_DELTA: f64 = 0.99;

/// A reduced basis with the change-of-basis matrix from the original one.
#[derive(Debug, Clone)]
pub(crate) struct Reduction {
    pub vectors: Vec<Vec<f64>>,
    /// `transform[j]` holds the coefficients of reduced vector `j` in the
    /// original basis.
    pub transform: Vec<Vec<i64>>,
    pub gso: GramSchmidt<f64>,
    /// Dual basis of the reduced basis; `<dual[i], x>` is the `i`-th
    /// coordinate of `x`.
    pub dual: Vec<Vec<f64>>,
}

impl Reduction {
    pub fn compute(lattice: &Lattice, delta: f64) -> Result<Self> {
        let (vectors, exact, transform) = reduce_vectors(lattice, delta)?;
        let gso = match &exact {
            Some(ex) => {
                let g = GramSchmidt::from_vectors(ex);
                GramSchmidt {
                    mu: g.mu.iter().map(|r| r.iter().map(Field::to_f64).collect()).collect(),
                    norms_sq: g.norms_sq.iter().map(Field::to_f64).collect(),
                }
            }
            None => GramSchmidt::from_vectors(&vectors),
        };
        let reduced = Lattice::build(
            match &exact {
                Some(ex) => Basis::from_rationals(ex.clone())?,
                None => Basis::new(vectors.clone())?,
            },
            true,
        )?;
        let dual = reduced.dual_vectors().to_vec();
        Ok(Self { vectors, transform, gso, dual })
    }

    /// Original-basis coefficients of `sum_j z[j] * reduced_j`.
    pub fn to_original(&self, z: &[i64]) -> Vec<i64> {
        let n = z.len();
        let mut out = vec![0i64; n];
        for (j, &zj) in z.iter().enumerate() {
            if zj == 0 {
                continue;
            }
            for (o, &t) in out.iter_mut().zip(&self.transform[j]) {
                *o += zj * t;
            }
        }
        out
    }
}

type Reduced = (Vec<Vec<f64>>, Option<Vec<Vec<Rational>>>, Vec<Vec<i64>>);

fn reduce_vectors(lattice: &Lattice, delta: f64) -> Result<Reduced> {
    check_delta(delta)?;
    let n = lattice.dim();
    let max_iter = 100_000 * n * n;
    if let Some(exact) = lattice.basis().exact() {
        let (b, u) = lll_generic(exact.to_vec(), exact_delta(delta), max_iter)?;
        let f = b.iter().map(|v| v.iter().map(Field::to_f64).collect()).collect();
        return Ok((f, Some(b), u));
    }
    let float_attempt = lll_generic(lattice.vectors().to_vec(), delta, max_iter).and_then(|(b, u)| {
        if satisfies_lovasz_float(&b, delta - 1e-9) {
            Ok((b, u))
        } else {
            Err(LatticeError::ReductionUnstable("Lovász check failed after float LLL".into()))
        }
    });
    match float_attempt {
        Ok((b, u)) => Ok((b, None, u)),
        Err(_) => {
            // Every double is a rational; redo the work exactly.
            let exact: Vec<Vec<Rational>> = lattice
                .vectors()
                .iter()
                .map(|v| v.iter().map(|&x| Rational::from_float(x).expect("finite entries")).collect())
                .collect();
            let (_, u) = lll_generic(exact, exact_delta(delta), max_iter)?;
            let u_basis: Vec<Vec<f64>> = lattice.vectors().to_vec();
            let f = u
                .iter()
                .map(|col| {
                    (0..n)
                        .map(|row| {
                            crate::numeric::compensated_sum(
                                col.iter().enumerate().map(|(i, &c)| c as f64 * u_basis[i][row]),
                            )
                        })
                        .collect()
                })
                .collect();
            Ok((f, None, u))
        }
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.25 && delta < 1.0 {
        Ok(())
    } else {
        Err(LatticeError::InvalidParameter(format!("LLL delta must lie in (1/4, 1), got {delta}")))
    }
}

fn exact_delta(delta: f64) -> Rational {
    Rational::from_float(delta).expect("finite delta")
}

/// Reduced vectors with the integer transform that produced them.
type VectorsAndTransform<T> = (Vec<Vec<T>>, Vec<Vec<i64>>);

/// Textbook LLL on `b` (vectors as entries); returns the reduced vectors and
/// the transform, `reduced_j = sum_i u[j][i] b_i`.
fn lll_generic<T: Field>(mut b: Vec<Vec<T>>, delta: T, max_iter: usize) -> Result<VectorsAndTransform<T>> {
    let n = b.len();
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    if n == 1 {
        return Ok((b, u));
    }
    let mut gs = GramSchmidt::from_vectors(&b);
    let mut k = 1;
    let mut iterations = 0usize;
    while k < n {
        iterations += 1;
        if iterations > max_iter {
            return Err(LatticeError::ReductionUnstable(format!("no convergence after {max_iter} steps")));
        }
        size_reduce(&mut b, &mut u, &mut gs, k, k - 1)?;
        let mu = gs.mu[k][k - 1].clone();
        let rhs = (delta.clone() - mu.clone() * mu) * gs.norms_sq[k - 1].clone();
        if gs.norms_sq[k] >= rhs {
            for l in (0..k - 1).rev() {
                size_reduce(&mut b, &mut u, &mut gs, k, l)?;
            }
            k += 1;
        } else {
            b.swap(k, k - 1);
            u.swap(k, k - 1);
            gs = GramSchmidt::from_vectors(&b);
            k = (k - 1).max(1);
        }
    }
    Ok((b, u))
}

fn size_reduce<T: Field>(
    b: &mut [Vec<T>],
    u: &mut [Vec<i64>],
    gs: &mut GramSchmidt<T>,
    k: usize,
    l: usize,
) -> Result<()> {
    if gs.mu[k][l].abs_value() <= T::size_threshold() {
        return Ok(());
    }
    let q = gs.mu[k][l]
        .nearest_integer()
        .ok_or_else(|| LatticeError::ReductionUnstable("size-reduction coefficient overflow".into()))?;
    let qt = T::from_i64(q);
    let (lo, hi) = b.split_at_mut(k);
    for (x, y) in hi[0].iter_mut().zip(&lo[l]) {
        *x = x.clone() - qt.clone() * y.clone();
    }
    let (ulo, uhi) = u.split_at_mut(k);
    for (x, y) in uhi[0].iter_mut().zip(&ulo[l]) {
        *x = y
            .checked_mul(q)
            .and_then(|d| x.checked_sub(d))
            .ok_or_else(|| LatticeError::ReductionUnstable("transform entry overflow".into()))?;
    }
    for j in 0..l {
        let d = qt.clone() * gs.mu[l][j].clone();
        gs.mu[k][j] = gs.mu[k][j].clone() - d;
    }
    gs.mu[k][l] = gs.mu[k][l].clone() - qt;
    Ok(())
}

fn satisfies_lovasz_float(b: &[Vec<f64>], delta: f64) -> bool {
    let gs = GramSchmidt::from_vectors(b);
    lovasz_holds(&gs, delta, 1e-6)
}

fn lovasz_holds<T: Field>(gs: &GramSchmidt<T>, delta: T, size_slack: T) -> bool {
    let n = gs.norms_sq.len();
    for k in 1..n {
        for l in 0..k {
            if gs.mu[k][l].abs_value() > T::size_threshold() + size_slack.clone() {
                return false;
            }
        }
        let mu = gs.mu[k][k - 1].clone();
        if gs.norms_sq[k] < (delta.clone() - mu.clone() * mu) * gs.norms_sq[k - 1].clone() {
            return false;
        }
    }
    true
}

/// LLL-reduces the basis of `lattice` with parameter `delta`.
pub fn lll_reduce(lattice: &Lattice, delta: f64) -> Result<Lattice> {
    lll_reduce_with_transform(lattice, delta).map(|(l, _)| l)
}

/// As [`lll_reduce`], also returning the integer change of basis:
/// row `j` of the transform gives reduced vector `j` in original coordinates.
pub fn lll_reduce_with_transform(lattice: &Lattice, delta: f64) -> Result<(Lattice, Vec<Vec<i64>>)> {
    let (vectors, exact, transform) = reduce_vectors(lattice, delta)?;
    let unimodular = transform_determinant(&transform).abs();
    if unimodular != Rational::from_i64(1) {
        return Err(LatticeError::ReductionUnstable(format!("change of basis has determinant {unimodular}")));
    }
    let basis = match exact {
        Some(ex) => Basis::from_rationals(ex)?,
        None => Basis::new(vectors)?,
    };
    Ok((Lattice::build(basis, true)?, transform))
}

/// Exact determinant of an integer matrix.
pub fn transform_determinant(t: &[Vec<i64>]) -> Rational {
    let m: Vec<Vec<Rational>> = t.iter().map(|r| r.iter().map(|&x| Rational::from_i64(x)).collect()).collect();
    field::determinant(&m)
}

/// Whether the basis of `lattice` is size-reduced and meets the Lovász
/// condition for `delta`. Exact for rational bases.
pub fn satisfies_lovasz(lattice: &Lattice, delta: f64) -> bool {
    match lattice.basis().exact() {
        Some(ex) => lovasz_holds(&GramSchmidt::from_vectors(ex), exact_delta(delta), Rational::zero()),
        None => satisfies_lovasz_float(lattice.vectors(), delta - 1e-9),
    }
}
