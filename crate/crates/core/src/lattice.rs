//! Full-rank lattices given by a basis, with cached Gram data and duals.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{LatticeError, Result};
use crate::field::{self, rational_from_f64, Field, Rational};
use crate::lll::Reduction;
use crate::numeric;

/// Largest denominator for which entries are treated as exact rationals.
pub const MAX_EXACT_DENOMINATOR: u64 = 1 << 32;

/// Relative threshold on `|det| / prod ||b_i||` below which a float basis is
/// declared singular.
const FLOAT_SINGULAR_RATIO: f64 = 1e-12;

/// Ordered basis vectors `b_1, ..., b_n` of a full-rank lattice in `R^n`.
///
/// Vectors are stored one per entry (the columns of the usual basis matrix).
/// When every coordinate is a rational with denominator at most
/// [`MAX_EXACT_DENOMINATOR`] an exact copy is kept alongside the floats.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    vectors: Vec<Vec<f64>>,
    exact: Option<Vec<Vec<Rational>>>,
}

impl Basis {
    pub fn new(vectors: Vec<Vec<f64>>) -> Result<Self> {
        check_shape(&vectors)?;
        if vectors.iter().flatten().any(|x| !x.is_finite()) {
            return Err(LatticeError::InvalidParameter("non-finite basis entry".into()));
        }
        let cap = BigInt::from(MAX_EXACT_DENOMINATOR);
        let exact = vectors
            .iter()
            .map(|v| v.iter().map(|&x| rational_from_f64(x, &cap)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>();
        Ok(Self { vectors, exact })
    }

    /// Exact basis; the float copy is the nearest-double image.
    pub fn from_rationals(exact: Vec<Vec<Rational>>) -> Result<Self> {
        check_shape(&exact)?;
        let vectors = exact.iter().map(|v| v.iter().map(Field::to_f64).collect()).collect();
        Ok(Self { vectors, exact: Some(exact) })
    }

    pub fn from_integers(vectors: &[Vec<i64>]) -> Result<Self> {
        Self::from_rationals(vectors.iter().map(|v| v.iter().map(|&x| Rational::from_i64(x)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn exact(&self) -> Option<&[Vec<Rational>]> {
        self.exact.as_deref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }
}

fn check_shape<T>(vectors: &[Vec<T>]) -> Result<()> {
    let n = vectors.len();
    if n == 0 {
        return Err(LatticeError::EmptyBasis);
    }
    for v in vectors {
        if v.len() != n {
            return Err(LatticeError::DimensionMismatch { expected: n, got: v.len() });
        }
    }
    Ok(())
}

/// An immutable lattice with its Gram matrix and determinant.
#[derive(Debug, Clone)]
pub struct Lattice {
    basis: Basis,
    gram: Vec<Vec<f64>>,
    det: f64,
    exact_det: Option<Rational>,
    reduced: bool,
    reduction: OnceLock<std::result::Result<Reduction, LatticeError>>,
    dual_vectors: OnceLock<Vec<Vec<f64>>>,
}

/// Builds a lattice, caching its Gram matrix and determinant.
pub fn make_lattice(basis: Basis) -> Result<Lattice> {
    Lattice::build(basis, false)
}

impl Lattice {
    pub(crate) fn build(basis: Basis, reduced: bool) -> Result<Self> {
        let (gram, det, exact_det) = match basis.exact() {
            Some(exact) => {
                let det_b = field::determinant(&transpose(exact));
                if det_b.is_zero() {
                    return Err(LatticeError::SingularBasis(0.0));
                }
                let g = field::gram(exact);
                let gram = g.iter().map(|row| row.iter().map(Field::to_f64).collect()).collect();
                let det_abs = det_b.abs();
                (gram, det_abs.to_f64(), Some(det_abs))
            }
            None => {
                let vectors = basis.vectors();
                let det_b = field::determinant(&transpose(vectors)).abs();
                let scale: f64 = vectors.iter().map(|v| numeric::norm_sq(v).sqrt()).product();
                if det_b.is_nan() || det_b <= FLOAT_SINGULAR_RATIO * scale {
                    return Err(LatticeError::SingularBasis(det_b * det_b));
                }
                (field::gram(vectors), det_b, None)
            }
        };
        Ok(Self { basis, gram, det, exact_det, reduced, reduction: OnceLock::new(), dual_vectors: OnceLock::new() })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        self.basis.vectors()
    }

    pub fn gram(&self) -> &[Vec<f64>] {
        &self.gram
    }

    /// Covolume `|det B|`.
    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn exact_det(&self) -> Option<&Rational> {
        self.exact_det.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.basis.is_exact()
    }

    /// Whether this basis came out of [`crate::lll::lll_reduce`].
    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// `B z` in ambient coordinates (compensated float arithmetic).
    pub fn point(&self, coeffs: &[i64]) -> Vec<f64> {
        debug_assert_eq!(coeffs.len(), self.dim());
        combine_integer(self.vectors(), coeffs)
    }

    /// Exact `B z` when the basis is rational.
    pub fn exact_point(&self, coeffs: &[i64]) -> Option<Vec<Rational>> {
        let exact = self.basis.exact()?;
        let n = self.dim();
        Some(
            (0..n)
                .map(|row| {
                    let mut acc = Rational::zero();
                    for (j, &z) in coeffs.iter().enumerate() {
                        if z != 0 {
                            acc += &exact[j][row] * Rational::from_i64(z);
                        }
                    }
                    acc
                })
                .collect(),
        )
    }

    /// Dual basis vectors as floats, cached.
    pub(crate) fn dual_vectors(&self) -> &[Vec<f64>] {
        self.dual_vectors.get_or_init(|| match self.basis.exact() {
            Some(exact) => dual_exact(exact)
                .expect("nonsingular by construction")
                .iter()
                .map(|v| v.iter().map(Field::to_f64).collect())
                .collect(),
            None => dual_float(self.vectors(), &self.gram).expect("nonsingular by construction"),
        })
    }

    /// Real coordinates of `v` with respect to this basis.
    pub fn coordinates(&self, v: &[f64]) -> Vec<f64> {
        self.dual_vectors().iter().map(|d| numeric::dot(d, v)).collect()
    }

    /// Whether `v` lies in the lattice, up to a coordinate residual of `1e-8`.
    pub fn contains(&self, v: &[f64]) -> bool {
        self.coordinates(v).iter().all(|c| (c - c.round()).abs() < 1e-8)
    }

    pub(crate) fn reduction(&self) -> Result<&Reduction> {
        self.reduction
            .get_or_init(|| Reduction::compute(self, crate::lll::DEFAULT_DELTA))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// The lattice `c L`.
    pub fn scaled(&self, c: f64) -> Result<Lattice> {
        if !(c.is_finite() && c != 0.0) {
            return Err(LatticeError::InvalidParameter(format!("scale factor {c}")));
        }
        let cap = BigInt::from(MAX_EXACT_DENOMINATOR);
        let basis = match (self.basis.exact(), rational_from_f64(c, &cap)) {
            (Some(exact), Some(cq)) => {
                Basis::from_rationals(exact.iter().map(|v| v.iter().map(|x| x * &cq).collect()).collect())?
            }
            _ => Basis::new(self.vectors().iter().map(|v| v.iter().map(|x| x * c).collect()).collect())?,
        };
        make_lattice(basis)
    }

    /// Orthogonal direct sum `L (+) M` in `R^(n+m)`.
    pub fn direct_sum(&self, other: &Lattice) -> Result<Lattice> {
        let (n, m) = (self.dim(), other.dim());
        let basis = match (self.basis.exact(), other.basis.exact()) {
            (Some(a), Some(b)) => {
                let mut vs = Vec::with_capacity(n + m);
                for v in a {
                    let mut w = v.clone();
                    w.resize(n + m, Rational::zero());
                    vs.push(w);
                }
                for v in b {
                    let mut w = vec![Rational::zero(); n];
                    w.extend(v.iter().cloned());
                    vs.push(w);
                }
                Basis::from_rationals(vs)?
            }
            _ => {
                let mut vs = Vec::with_capacity(n + m);
                for v in self.vectors() {
                    let mut w = v.clone();
                    w.resize(n + m, 0.0);
                    vs.push(w);
                }
                for v in other.vectors() {
                    let mut w = vec![0.0; n];
                    w.extend_from_slice(v);
                    vs.push(w);
                }
                Basis::new(vs)?
            }
        };
        make_lattice(basis)
    }
}

/// The dual lattice `L* = { w : <w, y> in Z for all y in L }`.
#[derive(Debug, Clone)]
pub struct DualLattice {
    lattice: Lattice,
}

impl DualLattice {
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn into_lattice(self) -> Lattice {
        self.lattice
    }
}

impl std::ops::Deref for DualLattice {
    type Target = Lattice;

    fn deref(&self) -> &Lattice {
        &self.lattice
    }
}

/// Dual basis `B G^{-1}`, exact whenever the primal basis is.
pub fn dual(lattice: &Lattice) -> Result<DualLattice> {
    let basis = match lattice.basis.exact() {
        Some(exact) => Basis::from_rationals(dual_exact(exact).ok_or(LatticeError::SingularBasis(0.0))?)?,
        None => Basis::new(lattice.dual_vectors().to_vec())?,
    };
    Ok(DualLattice { lattice: make_lattice(basis)? })
}

fn dual_exact(vectors: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let g_inv = field::inverse(&field::gram(vectors))?;
    Some(combine(vectors, &g_inv))
}

fn dual_float(vectors: &[Vec<f64>], gram: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let g_inv = field::inverse(gram)?;
    let n = vectors.len();
    Some(
        (0..n)
            .map(|j| {
                (0..n).map(|row| numeric::compensated_sum((0..n).map(|k| vectors[k][row] * g_inv[k][j]))).collect()
            })
            .collect(),
    )
}

/// `sum_j z[j] * vectors[j]` with compensated sums.
pub(crate) fn combine_integer(vectors: &[Vec<f64>], z: &[i64]) -> Vec<f64> {
    let n = vectors.first().map_or(0, Vec::len);
    (0..n)
        .map(|row| {
            numeric::compensated_sum(z.iter().zip(vectors).filter(|(c, _)| **c != 0).map(|(&c, v)| c as f64 * v[row]))
        })
        .collect()
}

/// `d_j = sum_k b_k m[k][j]`.
fn combine<T: Field>(vectors: &[Vec<T>], m: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = vectors.len();
    (0..n)
        .map(|j| {
            (0..n).map(|row| (0..n).fold(T::zero(), |acc, k| acc + vectors[k][row].clone() * m[k][j].clone())).collect()
        })
        .collect()
}

/// Basis matrix with the vectors as columns, indexed `[row][col]`.
pub(crate) fn transpose<T: Clone>(vectors: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = vectors.len();
    (0..n).map(|row| (0..n).map(|col| vectors[col][row].clone()).collect()).collect()
}
