//! Seeded random lattices.
//!
//! These are explicit stand-ins for random lattices, not Haar samples.

use std::fmt;
use std::str::FromStr;

use latkit_core::{lll_reduce, make_lattice, Basis, Lattice, LatticeError, DEFAULT_DELTA};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest multiplier of an elementary column operation.
const MAX_MULTIPLIER: i64 = 5;
/// Entries of `IntegerEntries` bases lie in `[-ENTRY_RANGE, ENTRY_RANGE]`.
const ENTRY_RANGE: i64 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    /// `Z^n` under `3n` random elementary integer column operations.
    UnimodularOfZn,
    /// Uniform integer entries, singular draws rejected.
    IntegerEntries,
}

impl Style {
    pub fn as_str(self) -> &'static str {
        match self {
            Style::UnimodularOfZn => "unimodular_of_Zn",
            Style::IntegerEntries => "integer_entries",
        }
    }
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Style {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unimodular_of_Zn" | "unimodular" => Ok(Style::UnimodularOfZn),
            "integer_entries" | "integer" => Ok(Style::IntegerEntries),
            other => Err(format!("unknown style {other:?} (expected unimodular_of_Zn or integer_entries)")),
        }
    }
}

/// Integer basis vectors for `style`, before reduction.
pub fn random_basis(dim: usize, seed: u64, style: Style) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match style {
        Style::UnimodularOfZn => {
            let mut b: Vec<Vec<i64>> = (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect();
            if dim < 2 {
                return b;
            }
            for _ in 0..3 * dim {
                let i = rng.gen_range(0..dim);
                let j = (i + rng.gen_range(1..dim)) % dim;
                let mut k = rng.gen_range(1..=MAX_MULTIPLIER);
                if rng.gen::<bool>() {
                    k = -k;
                }
                let src = b[j].clone();
                for (x, y) in b[i].iter_mut().zip(src) {
                    *x += k * y;
                }
            }
            b
        }
        Style::IntegerEntries => {
            (0..dim).map(|_| (0..dim).map(|_| rng.gen_range(-ENTRY_RANGE..=ENTRY_RANGE)).collect()).collect()
        }
    }
}

/// A seeded random lattice, LLL-reduced.
pub fn generate_random_lattice(dim: usize, seed: u64, style: Style) -> Result<Lattice, LatticeError> {
    if dim == 0 {
        return Err(LatticeError::EmptyBasis);
    }
    let mut attempt = 0u64;
    loop {
        let rows = random_basis(dim, seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15)), style);
        match make_lattice(Basis::from_integers(&rows)?) {
            Ok(l) => return lll_reduce(&l, DEFAULT_DELTA),
            Err(LatticeError::SingularBasis(_)) if attempt < 1000 => attempt += 1,
            Err(e) => return Err(e),
        }
    }
}

/// Conventional corpus name for a generated lattice.
pub fn generated_name(dim: usize, seed: u64, style: Style) -> String {
    let tag = match style {
        Style::UnimodularOfZn => "unimod",
        Style::IntegerEntries => "intent",
    };
    format!("rand-{tag}-n{dim}-s{seed}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use latkit_core::{brute_force_within, shortest_vector, EnumerationRequest};

    #[test]
    fn deterministic_per_seed() {
        for style in [Style::UnimodularOfZn, Style::IntegerEntries] {
            let a = generate_random_lattice(4, 11, style).unwrap();
            let b = generate_random_lattice(4, 11, style).unwrap();
            assert_eq!(a.vectors(), b.vectors());
        }
    }

    #[test]
    fn unimodular_has_unit_determinant() {
        for seed in 0..10 {
            let l = generate_random_lattice(5, seed, Style::UnimodularOfZn).unwrap();
            assert_eq!(l.exact_det().map(|d| d.to_string()), Some("1".to_string()));
        }
    }

    #[test]
    fn column_operations_move_the_basis() {
        let rows = random_basis(4, 3, Style::UnimodularOfZn);
        assert!(rows.iter().flatten().any(|&x| x.abs() > 1));
    }

    #[test]
    fn integer_entries_match_brute_force_minimum() {
        let l = generate_random_lattice(3, 42, Style::IntegerEntries).unwrap();
        let sv = shortest_vector(&l).unwrap();
        let pts = brute_force_within(&l, &EnumerationRequest::around_origin(3, sv.dist * 1.5)).unwrap();
        let min = pts.iter().filter(|p| p.dist > 0.0).map(|p| p.dist).fold(f64::INFINITY, f64::min);
        assert!((min - sv.dist).abs() < 1e-12);
        assert!(rows_in_range(&random_basis(3, 42, Style::IntegerEntries)));
    }

    fn rows_in_range(rows: &[Vec<i64>]) -> bool {
        rows.iter().flatten().all(|x| x.abs() <= ENTRY_RANGE)
    }
}
