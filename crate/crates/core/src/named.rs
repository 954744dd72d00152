//! Standard lattices used throughout the corpus and the tests.

use num_bigint::BigInt;

use crate::field::Rational;
use crate::lattice::{make_lattice, Basis, Lattice};

/// `Z^n` with the identity basis.
pub fn integer_lattice(n: usize) -> Lattice {
    let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    from_integer_rows(&rows)
}

/// Checkerboard lattice `D_n` (`n >= 2`): integer vectors with even
/// coordinate sum.
pub fn d_lattice(n: usize) -> Lattice {
    assert!(n >= 2, "D_n needs n >= 2");
    let mut rows = Vec::with_capacity(n);
    for i in 0..n - 1 {
        let mut v = vec![0i64; n];
        v[i] = 1;
        v[i + 1] = -1;
        rows.push(v);
    }
    let mut last = vec![0i64; n];
    last[n - 2] = 1;
    last[n - 1] = 1;
    rows.push(last);
    from_integer_rows(&rows)
}

/// Hexagonal lattice `A_2` with minimal norm 1.
pub fn hexagonal() -> Lattice {
    make_lattice(Basis::new(vec![vec![1.0, 0.0], vec![0.5, 3f64.sqrt() / 2.0]]).expect("valid")).expect("nonsingular")
}

/// `E_8` in the even coordinate system.
pub fn e8() -> Lattice {
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(8);
    let int = |x: i64| Rational::from_integer(BigInt::from(x));
    let mut first = vec![int(0); 8];
    first[0] = int(2);
    rows.push(first);
    for i in 1..7 {
        let mut v = vec![int(0); 8];
        v[i - 1] = int(-1);
        v[i] = int(1);
        rows.push(v);
    }
    rows.push(vec![Rational::new(BigInt::from(1), BigInt::from(2)); 8]);
    make_lattice(Basis::from_rationals(rows).expect("valid")).expect("nonsingular")
}

pub fn from_integer_rows(rows: &[Vec<i64>]) -> Lattice {
    make_lattice(Basis::from_integers(rows).expect("valid")).expect("nonsingular")
}
