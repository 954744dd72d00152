//! Named lattices loaded from a directory of JSON files.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use latkit_core::{KnownValues, Lattice, LatticeFile};

/// Bad input or configuration; maps to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub lattice: Lattice,
    pub known: Option<KnownValues>,
    pub source: Option<PathBuf>,
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
    pub seed: u64,
}

impl Corpus {
    pub fn new(seed: u64) -> Self {
        Self { entries: Vec::new(), seed }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn push(&mut self, entry: CorpusEntry) -> Result<(), InputError> {
        if self.entries.iter().any(|e| e.name == entry.name) {
            return Err(InputError(format!("duplicate lattice name {:?}", entry.name)));
        }
        self.entries.push(entry);
        Ok(())
    }

    /// Loads every `*.json` file in `dir`, in file-name order.
    pub fn load(dir: &Path, seed: u64) -> Result<Self, InputError> {
        let listing = fs::read_dir(dir).map_err(|e| InputError(format!("{}: {e}", dir.display())))?;
        let mut paths = BTreeSet::new();
        for item in listing {
            let path = item.map_err(|e| InputError(format!("{}: {e}", dir.display())))?.path();
            if path.extension().is_some_and(|x| x == "json") {
                paths.insert(path);
            }
        }
        let mut corpus = Corpus::new(seed);
        for path in paths {
            corpus.push(load_entry(&path)?)?;
        }
        if corpus.is_empty() {
            return Err(InputError("empty corpus".into()));
        }
        Ok(corpus)
    }
}

/// Reads and validates one lattice file.
pub fn load_entry(path: &Path) -> Result<CorpusEntry, InputError> {
    let file = LatticeFile::load(path).map_err(|e| InputError(e.to_string()))?;
    let lattice = file.to_lattice().map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok(CorpusEntry { name: file.name, lattice, known: file.known, source: Some(path.to_path_buf()) })
}
