//! Lattice invariants by enumeration and certified Gaussian-mass summation.
//!
//! The crate computes the first minimum, covering-radius bounds, the
//! smoothing parameter and point counts of full-rank lattices, and checks
//! the inequalities connecting them to the dual lattice.

pub mod enumerate;
pub mod error;
pub mod exec;
pub mod field;
pub mod format;
pub mod gaussian;
pub mod invariants;
pub mod lattice;
pub mod lll;
pub mod named;
pub mod numeric;
pub mod transference;

pub use enumerate::{
    brute_force_within, closest_vector, count_points, enumerate_within, shortest_vector, Budget, EnumerationRequest,
    LatticePoint,
};
pub use error::{LatticeError, Result};
pub use format::LatticeFile;
pub use gaussian::{gaussian_mass, poisson_residual, smoothing_parameter, GaussianParams, MassResult, SmoothingResult};
pub use invariants::{
    beta_estimate, covering_radius_bounds, full_report, BetaEstimate, InvariantReport, KnownValues, ReportConfig,
};
pub use lattice::{dual, make_lattice, Basis, DualLattice, Lattice};
pub use lll::{lll_reduce, DEFAULT_DELTA};
pub use transference::{verify_lattice, CheckId, LatticeVerification, Status, VerificationRecord, VerifyConfig};
