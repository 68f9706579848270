//! Finite-dimensional quantum systems realized as reductions of a classical,
//! deterministic system.
//!
//! Every pure state `[h]` carries a fiber `(0,1)` with Lebesgue measure. A
//! self-adjoint operator `T` becomes the classical observable
//! `f([h], t) = min { v : F_[h](v) >= t }`, the quantile of the spectral
//! distribution of `T` at `h`. Pushing Lebesgue measure forward through `f`
//! reproduces the quantum probabilities exactly, and the quotient maps
//! `tau` (observables to operators) and `epsilon` (propositions to
//! projectors) recover the quantum system.
//!
//! Modules:
//!
//! * [`linalg`]: dense complex matrices, Jacobi eigendecomposition, the
//!   projector lattice.
//! * [`quantum`]: states, Borel sets, spectral measures, probabilities and
//!   the functional calculus.
//! * [`hidden`]: quantile observables, propositions, `tau`, `epsilon`,
//!   fiber integrals and seeded Monte Carlo sampling.
//! * [`bell`]: meet-based CHSH operators, proposition quadruples and the
//!   boolean-homomorphism criterion for commutation.

// `!(a < b)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bell;
pub mod error;
pub mod exec;
pub mod hidden;
pub mod linalg;
pub mod quantum;
pub mod random;

pub use error::{Error, Result};
pub use exec::Execution;
pub use num_complex::Complex64;
