//! Scalar abstraction shared by the exact (rational) and floating-point
//! linear algebra paths.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

use crate::numeric;

pub type Rational = BigRational;

pub(crate) trait Field: Clone + Debug + PartialOrd + Num + Neg<Output = Self> + Send + Sync {
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// Closest integer, ties away from zero; `None` if it overflows i64.
    fn nearest_integer(&self) -> Option<i64>;
    fn abs_value(&self) -> Self;
    /// Size-reduction threshold on `|mu|`.
    fn size_threshold() -> Self;

    fn dot(a: &[Self], b: &[Self]) -> Self {
        a.iter().zip(b).fold(Self::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
    }

    /// Pivot preference during elimination: larger is better.
    fn pivot_score(&self) -> f64 {
        self.abs_value().to_f64()
    }
}

impl Field for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn nearest_integer(&self) -> Option<i64> {
        let r = self.round();
        if r.is_finite() && r.abs() < 9.0e18 {
            Some(r as i64)
        } else {
            None
        }
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }

    fn size_threshold() -> Self {
        0.5 + 1e-9
    }

    fn dot(a: &[Self], b: &[Self]) -> Self {
        numeric::dot(a, b)
    }
}

impl Field for Rational {
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn nearest_integer(&self) -> Option<i64> {
        self.round().to_integer().to_i64()
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }

    fn size_threshold() -> Self {
        Rational::new(BigInt::from(1), BigInt::from(2))
    }

    fn pivot_score(&self) -> f64 {
        // Any nonzero pivot is exact; prefer the first one.
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
}

/// Correctly rounded conversion is not needed here; `ToPrimitive` on
/// `Ratio<BigInt>` divides in floating point after scaling, which is
/// accurate to a few ulps for the magnitudes we handle.
pub fn ratio_to_f64(q: &Rational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(q) {
        if v.is_finite() {
            return v;
        }
    }
    let n = q.numer().to_f64().unwrap_or(f64::NAN);
    let d = q.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Exact rational value of a finite float, if its reduced denominator is at
/// most `max_denominator`.
pub fn rational_from_f64(x: f64, max_denominator: &BigInt) -> Option<Rational> {
    let q = Rational::from_float(x)?;
    if q.denom() <= max_denominator {
        Some(q)
    } else {
        None
    }
}

/// Parses `"p/q"`, `"p"` or a decimal string like `"0.25"` exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        let negative = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
        let mut n: BigInt = digits.parse().ok()?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac_part.len());
        return Some(Rational::new(n, d));
    }
    let n: BigInt = text.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Determinant by Gaussian elimination. `m` is indexed `m[row][col]`.
pub(crate) fn determinant<T: Field>(m: &[Vec<T>]) -> T {
    let n = m.len();
    let mut a: Vec<Vec<T>> = m.to_vec();
    let mut det = T::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                a[i][col]
                    .pivot_score()
                    .partial_cmp(&a[j][col].pivot_score())
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(j.cmp(&i))
            })
            .expect("non-empty range");
        if a[pivot][col].is_zero() {
            return T::zero();
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = det * p.clone();
        for row in col + 1..n {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = a[row][col].clone() / p.clone();
            let (top, bottom) = a.split_at_mut(row);
            for (x, pivot) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x = x.clone() - factor.clone() * pivot.clone();
            }
        }
    }
    det
}

/// Inverse by Gauss–Jordan elimination; `None` when singular.
pub(crate) fn inverse<T: Field>(m: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = m.len();
    let mut a: Vec<Vec<T>> = m.to_vec();
    let mut inv: Vec<Vec<T>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .pivot_score()
                .partial_cmp(&a[j][col].pivot_score())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(j.cmp(&i))
        })?;
        if a[pivot][col].is_zero() {
            return None;
        }
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let p = a[col][col].clone();
        for k in 0..n {
            a[col][k] = a[col][k].clone() / p.clone();
            inv[col][k] = inv[col][k].clone() / p.clone();
        }
        for row in 0..n {
            if row == col || a[row][col].is_zero() {
                continue;
            }
            let factor = a[row][col].clone();
            for k in 0..n {
                let da = factor.clone() * a[col][k].clone();
                a[row][k] = a[row][k].clone() - da;
                let di = factor.clone() * inv[col][k].clone();
                inv[row][k] = inv[row][k].clone() - di;
            }
        }
    }
    Some(inv)
}

/// Gram matrix of a list of vectors.
pub(crate) fn gram<T: Field>(vectors: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = vectors.len();
    let mut g = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = T::dot(&vectors[i], &vectors[j]);
            g[j][i] = v.clone();
            g[i][j] = v;
        }
    }
    g
}

/// Gram–Schmidt data of an ordered list of vectors.
#[derive(Debug, Clone)]
pub(crate) struct GramSchmidt<T> {
    /// `mu[i][j] = <b_i, b*_j> / <b*_j, b*_j>` for `j < i`.
    pub mu: Vec<Vec<T>>,
    /// Squared norms `<b*_i, b*_i>`.
    pub norms_sq: Vec<T>,
}

impl<T: Field> GramSchmidt<T> {
    /// Computed from the Gram matrix alone.
    pub fn from_gram(g: &[Vec<T>]) -> Self {
        let n = g.len();
        let mut mu = vec![vec![T::zero(); n]; n];
        let mut norms_sq = vec![T::zero(); n];
        // r[i][j] = <b_i, b*_j>
        let mut r = vec![vec![T::zero(); n]; n];
        for i in 0..n {
            for j in 0..=i {
                let mut v = g[i][j].clone();
                for k in 0..j {
                    v = v - mu[j][k].clone() * r[i][k].clone();
                }
                r[i][j] = v.clone();
                if j < i {
                    mu[i][j] = v / norms_sq[j].clone();
                } else {
                    norms_sq[i] = v;
                }
            }
            mu[i][i] = T::one();
        }
        Self { mu, norms_sq }
    }

    pub fn from_vectors(vectors: &[Vec<T>]) -> Self {
        Self::from_gram(&gram(vectors))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/2"), Some(q(1, 2)));
        assert_eq!(parse_rational("-3"), Some(q(-3, 1)));
        assert_eq!(parse_rational("0.25"), Some(q(1, 4)));
        assert_eq!(parse_rational("-1.5"), Some(q(-3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn exact_determinant_and_inverse() {
        let m = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]];
        assert_eq!(determinant(&m), q(1, 1));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![q(1, 1), q(-1, 1)], vec![q(-1, 1), q(2, 1)]]);
        let singular = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]];
        assert!(determinant(&singular).is_zero());
        assert!(inverse(&singular).is_none());
    }

    #[test]
    fn float_determinant_pivots() {
        let m = vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 3.0], vec![4.0, -3.0, 8.0]];
        assert!((determinant(&m) - (-2.0)).abs() < 1e-12);
    }

    #[test]
    fn rational_detection_respects_denominator_cap() {
        let cap = BigInt::from(1u64 << 32);
        assert_eq!(rational_from_f64(0.5, &cap), Some(q(1, 2)));
        assert!(rational_from_f64(0.1, &cap).is_none());
        assert!(rational_from_f64(3f64.sqrt(), &cap).is_none());
    }
}
