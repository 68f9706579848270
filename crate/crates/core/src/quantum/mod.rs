//! The quantum system over `C^n`: rays, Borel sets, spectral projectors,
//! the probability function and the Borel functional calculus.

mod borel;
mod function;
mod spectral;
mod state;

pub use borel::{BorelSet, Interval};
pub use function::{Piece, PiecewiseFn};
pub use spectral::{
    cdf, expectation, functional_calculus, functional_calculus_chain, prob, prob_snapped, spectral_projector,
    spectral_projector_snapped, spectral_weights,
};
pub use state::{PureState, RAY_TOL};

/// Eigenvalues within this distance of a finite Borel endpoint are treated
/// as lying on it.
pub const SNAP_TOL: f64 = 1e-9;
