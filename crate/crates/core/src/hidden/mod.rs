//! The classical system whose reduction is the quantum system.
//!
//! Every ray `[h]` carries the fiber `(0,1)` with Lebesgue measure. An
//! operator `T` is represented classically by the left-continuous quantile
//! of its spectral distribution at `h`; propositions are operator-backed
//! Borel events whose fiber slices have measure `<E>_h`. The quotient maps
//! [`tau`] and [`epsilon`] send observables to operators and propositions
//! to projectors.

mod confusion;
mod observable;
mod proposition;
mod quantile;
mod sampling;

pub use confusion::{distinguishing_projector, observables_confusion_equivalent, states_confusion_equivalent};
pub use observable::{compose, integrate_fiber, tau, ClassicalObservable};
pub use proposition::{epsilon, fiber_subset, proposition_from, Proposition};
pub use quantile::{quantile_function, quantile_function_with_floor, QuantileStep};
pub use sampling::{sample, sample_with, HiddenSampleReport, PARTITION_SIZE};

/// Eigenvalues whose weight `<P_k>_h` is at most this are left out of the
/// quantile step.
pub const WEIGHT_FLOOR: f64 = 1e-12;
/// Max-norm tolerance for two observables to reduce to the same operator.
pub const OBSERVABLE_TOL: f64 = 1e-8;
