//! Corpus handling, random lattice generation and report emission for the
//! `latkit` command-line tool.

pub mod commands;
pub mod corpus;
pub mod generate;
pub mod output;
pub mod run;

pub use corpus::{Corpus, CorpusEntry, InputError};
pub use generate::{generate_random_lattice, Style};
pub use run::{run_verify, RunConfig, VerifyOutcome};
