#![allow(dead_code)]

use std::path::PathBuf;

use latkit_core::{make_lattice, Basis, KnownValues, Lattice, LatticeFile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Repository corpus, as `(name, lattice, known)`.
pub fn corpus() -> Vec<(String, Lattice, Option<KnownValues>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut paths: Vec<_> = std::fs::read_dir(&dir)
        .expect("corpus directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let f = LatticeFile::load(p).expect("corpus file");
            let l = f.to_lattice().expect("valid corpus lattice");
            (f.name, l, f.known)
        })
        .collect()
}

/// Nonsingular integer lattice with entries in `[-r, r]`.
pub fn random_integer_lattice(n: usize, r: i64, seed: u64) -> Lattice {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-r..=r)).collect()).collect();
        if let Ok(l) = make_lattice(Basis::from_integers(&rows).unwrap()) {
            return l;
        }
    }
}

/// Every lattice point `B z` with `|z_i| <= bound`, as `(z, point)`.
pub fn box_points(lattice: &Lattice, bound: i64) -> Vec<(Vec<i64>, Vec<f64>)> {
    let n = lattice.dim();
    let mut out = Vec::new();
    let mut z = vec![-bound; n];
    loop {
        out.push((z.clone(), lattice.point(&z)));
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if z[i] < bound {
                z[i] += 1;
                break;
            }
            z[i] = -bound;
            i += 1;
        }
    }
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Coefficient bound covering the ball of `radius` around `center`:
/// `|z_i| <= |<d_i, c>| + ||d_i|| radius` for dual basis vectors `d_i`.
pub fn coefficient_bound(lattice: &Lattice, center: &[f64], radius: f64) -> i64 {
    let d = latkit_core::dual(lattice).unwrap();
    d.vectors()
        .iter()
        .map(|v| {
            let c: f64 = v.iter().zip(center).map(|(a, b)| a * b).sum();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            (c.abs() + norm * radius).ceil() as i64 + 1
        })
        .max()
        .unwrap()
}
