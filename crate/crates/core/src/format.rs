//! JSON lattice files.
//!
//! ```json
//! { "name": "D4", "dim": 4,
//!   "basis": [[1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 1, -1], [0, 0, 1, 1]],
//!   "known": { "lambda1": 1.4142135623730951, "kissing": 24 } }
//! ```
//!
//! Each inner array of `basis` is one basis vector. Entries are JSON numbers
//! or strings holding an exact rational (`"1/2"`, `"-3"`, `"0.25"`). A basis
//! whose entries are all integers or rational strings with denominators up
//! to 2^32 is handled exactly; any other JSON number switches to floats.

use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{LatticeError, Result};
use crate::field::{parse_rational, ratio_to_f64, Rational};
use crate::invariants::KnownValues;
use crate::lattice::{make_lattice, Basis, Lattice, MAX_EXACT_DENOMINATOR};

/// One basis coordinate as written in a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Integer(i64),
    Float(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeFile {
    pub name: String,
    pub dim: usize,
    pub basis: Vec<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known: Option<KnownValues>,
}

impl LatticeFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: LatticeFile = serde_json::from_str(text).map_err(|e| LatticeError::Format(e.to_string()))?;
        if file.basis.len() != file.dim {
            return Err(LatticeError::Format(format!(
                "dim is {} but basis has {} vectors",
                file.dim,
                file.basis.len()
            )));
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| LatticeError::Format(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            LatticeError::Format(msg) => LatticeError::Format(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Describes `lattice` by its input basis, exactly when possible.
    pub fn from_lattice(name: &str, lattice: &Lattice, known: Option<KnownValues>) -> Self {
        let basis = match lattice.basis().exact() {
            Some(exact) => exact.iter().map(|v| v.iter().map(rational_entry).collect()).collect(),
            None => lattice.vectors().iter().map(|v| v.iter().map(|&x| Entry::Float(x)).collect()).collect(),
        };
        Self { name: name.to_string(), dim: lattice.dim(), basis, known }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("lattice file serializes")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json() + "\n").map_err(|e| LatticeError::Format(format!("{}: {e}", path.display())))
    }

    pub fn to_basis(&self) -> Result<Basis> {
        let cap = BigInt::from(MAX_EXACT_DENOMINATOR);
        let mut exact: Option<Vec<Vec<Rational>>> = Some(Vec::with_capacity(self.dim));
        let mut floats = Vec::with_capacity(self.dim);
        for v in &self.basis {
            let mut exact_row = Vec::with_capacity(v.len());
            let mut float_row = Vec::with_capacity(v.len());
            for e in v {
                let (q, x) = match e {
                    Entry::Integer(k) => (Some(Rational::from_integer(BigInt::from(*k))), *k as f64),
                    Entry::Float(x) => (None, *x),
                    Entry::Text(s) => {
                        let q =
                            parse_rational(s).ok_or_else(|| LatticeError::Format(format!("bad basis entry {s:?}")))?;
                        let x = ratio_to_f64(&q);
                        (Some(q).filter(|q| q.denom().abs() <= cap), x)
                    }
                };
                match q {
                    Some(q) => exact_row.push(q),
                    None => exact = None,
                }
                float_row.push(x);
            }
            if let Some(rows) = exact.as_mut() {
                rows.push(exact_row);
            }
            floats.push(float_row);
        }
        match exact {
            Some(rows) => Basis::from_rationals(rows),
            None => Basis::new(floats),
        }
    }

    pub fn to_lattice(&self) -> Result<Lattice> {
        make_lattice(self.to_basis()?)
    }
}

fn rational_entry(q: &Rational) -> Entry {
    if q.is_integer() {
        if let Ok(k) = i64::try_from(q.numer()) {
            return Entry::Integer(k);
        }
    }
    Entry::Text(format!("{}/{}", q.numer(), q.denom()))
}
