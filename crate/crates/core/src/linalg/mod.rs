//! Dense complex linear algebra at small dimension.

mod eigen;
mod matrix;
mod projector;

pub use eigen::{eigh, jacobi_eigen, HermitianOperator, SpectralDecomposition, MAX_SWEEPS};
pub use matrix::{inner, norm, ComplexMatrix};
pub use projector::{commutes, projector_join, projector_meet, projector_meet_with_tol, Projector};

/// Maximum allowed `|M - M^dagger|` entry for a Hermitian operator.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Maximum allowed `|P^2 - P|` entry for a projector.
pub const PROJECTOR_TOL: f64 = 1e-9;
/// Eigenvalues closer than this are merged into one spectral projector.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Eigenvalue cutoff for the null space of `(I - E) + (I - F)`.
pub const MEET_TOL: f64 = 1e-8;
/// Commutator max-norm below which two projectors commute.
pub const COMMUTE_TOL: f64 = 1e-9;
