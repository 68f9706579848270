use num_complex::Complex64;

use super::eigen::{jacobi_eigen, HermitianOperator};
use super::matrix::ComplexMatrix;
use super::{MEET_TOL, PROJECTOR_TOL};
use crate::error::{Error, Result};

/// Orthogonal projector: Hermitian and idempotent.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    matrix: ComplexMatrix,
    rank: usize,
}

impl Projector {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, PROJECTOR_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let herm = matrix.hermitian_residual();
        if !(herm <= tol) {
            return Err(Error::NotProjector {
                reason: format!("not Hermitian (residual {herm:e})"),
            });
        }
        let matrix = (&matrix + &matrix.adjoint()).scale(0.5);
        let idem = (&matrix * &matrix).max_abs_diff(&matrix);
        if !(idem <= tol) {
            return Err(Error::NotProjector {
                reason: format!("not idempotent (residual {idem:e})"),
            });
        }
        let trace = matrix.trace().re;
        let rank = trace.round();
        if (trace - rank).abs() > 1e-6 {
            return Err(Error::NotProjector {
                reason: format!("trace {trace} is not an integer"),
            });
        }
        Ok(Self {
            matrix,
            rank: rank as usize,
        })
    }

    /// Projector onto the span of the given orthonormal vectors.
    pub(crate) fn from_orthonormal(dim: usize, vectors: &[Vec<Complex64>]) -> Self {
        let mut matrix = ComplexMatrix::zeros(dim);
        for v in vectors {
            matrix = &matrix + &ComplexMatrix::outer(v, v);
        }
        Self {
            matrix,
            rank: vectors.len(),
        }
    }

    /// Sum of mutually orthogonal projectors; the caller guarantees
    /// orthogonality.
    pub(crate) fn sum_orthogonal<'a>(dim: usize, parts: impl IntoIterator<Item = &'a Projector>) -> Self {
        let mut matrix = ComplexMatrix::zeros(dim);
        let mut rank = 0;
        for p in parts {
            matrix = &matrix + &p.matrix;
            rank += p.rank;
        }
        Self { matrix, rank }
    }

    /// Projector onto the line spanned by `v` (need not be normalized).
    pub fn onto_line(v: &[Complex64]) -> Result<Self> {
        let n = super::norm(v);
        if n == 0.0 {
            return Err(Error::ZeroState);
        }
        let unit: Vec<Complex64> = v.iter().map(|z| z / n).collect();
        Ok(Self::from_orthonormal(v.len(), &[unit]))
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(dim),
            rank: 0,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
            rank: dim,
        }
    }

    /// `I - P`.
    pub fn complement(&self) -> Self {
        let dim = self.dim();
        Self {
            matrix: &ComplexMatrix::identity(dim) - &self.matrix,
            rank: dim - self.rank,
        }
    }

    pub fn tensor(&self, other: &Projector) -> Self {
        Self {
            matrix: self.matrix.kron(&other.matrix),
            rank: self.rank * other.rank,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `<h, P h>` for a unit vector `h`.
    pub fn expectation(&self, h: &[Complex64]) -> f64 {
        self.matrix.quadratic_form(h).re
    }
}

fn check_dims(e: &Projector, f: &Projector) -> Result<()> {
    if e.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: e.dim(),
            found: f.dim(),
        });
    }
    Ok(())
}

/// Projector onto `range(E) ∩ range(F)`, with the default null-space cutoff.
pub fn projector_meet(e: &Projector, f: &Projector) -> Result<Projector> {
    projector_meet_with_tol(e, f, MEET_TOL)
}

/// `range(E) ∩ range(F)` is the null space of the positive semidefinite
/// `(I - E) + (I - F)`; eigenvectors with eigenvalue below `tol` span it.
pub fn projector_meet_with_tol(e: &Projector, f: &Projector, tol: f64) -> Result<Projector> {
    check_dims(e, f)?;
    let dim = e.dim();
    if e.rank == dim {
        return Ok(f.clone());
    }
    if f.rank == dim {
        return Ok(e.clone());
    }
    if e.rank == 0 || f.rank == 0 {
        return Ok(Projector::zero(dim));
    }
    let id2 = ComplexMatrix::identity(dim).scale(2.0);
    let n = &(&id2 - e.matrix()) - f.matrix();
    let op = HermitianOperator::with_tolerance(n, 1e-8)?;
    let (values, vectors) = jacobi_eigen(&op)?;
    let kernel: Vec<Vec<Complex64>> = values
        .iter()
        .enumerate()
        .take_while(|(_, &v)| v < tol)
        .map(|(i, _)| vectors.column(i))
        .collect();
    Ok(Projector::from_orthonormal(dim, &kernel))
}

/// `E ∨ F = I - ((I - E) ∧ (I - F))`.
pub fn projector_join(e: &Projector, f: &Projector) -> Result<Projector> {
    check_dims(e, f)?;
    Ok(projector_meet(&e.complement(), &f.complement())?.complement())
}

/// `true` iff `max |EF - FE| <= tol`.
pub fn commutes(e: &Projector, f: &Projector, tol: f64) -> Result<bool> {
    Ok(commutator_norm(e, f)? <= tol)
}

pub(crate) fn commutator_norm(e: &Projector, f: &Projector) -> Result<f64> {
    check_dims(e, f)?;
    Ok(e.matrix().commutator(f.matrix()).max_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::COMMUTE_TOL;

    fn diag(d: &[f64]) -> Projector {
        Projector::new(ComplexMatrix::from_diag(d)).unwrap()
    }

    fn diagonal_line() -> Projector {
        Projector::onto_line(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(Projector::new(ComplexMatrix::from_diag(&[0.5, 1.0])).is_err());
        let p = diag(&[1.0, 0.0, 1.0]);
        assert_eq!(p.rank(), 2);
        assert_eq!(p.complement().rank(), 1);
    }

    #[test]
    fn meet_with_identity_absorbs() {
        let f = diagonal_line();
        let m = projector_meet(&Projector::identity(2), &f).unwrap();
        assert!(m.matrix().max_abs_diff(f.matrix()) < 1e-15);
    }

    #[test]
    fn distinct_lines_meet_in_zero_and_join_to_identity() {
        let e = diag(&[1.0, 0.0]);
        let f = diagonal_line();
        let m = projector_meet(&e, &f).unwrap();
        assert_eq!(m.rank(), 0);
        assert!(m.matrix().max_norm() < 1e-15);
        let j = projector_join(&e, &f).unwrap();
        assert_eq!(j.rank(), 2);
        assert!(j.matrix().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn join_with_zero() {
        let f = diagonal_line();
        let j = projector_join(&Projector::zero(2), &f).unwrap();
        assert!(j.matrix().max_abs_diff(f.matrix()) < 1e-12);
    }

    #[test]
    fn commutator_of_z_and_diagonal_line_is_half() {
        let e = diag(&[1.0, 0.0]);
        let f = diagonal_line();
        // EF - FE = [[0, 1/2], [-1/2, 0]]
        let norm = commutator_norm(&e, &f).unwrap();
        assert!((norm - 0.5).abs() < 1e-15);
        assert!(!commutes(&e, &f, COMMUTE_TOL).unwrap());
        assert!(commutes(&f, &f, COMMUTE_TOL).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            projector_meet(&diag(&[1.0, 0.0]), &diag(&[1.0, 0.0, 0.0])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(commutes(&diag(&[1.0]), &diag(&[1.0, 0.0]), 1e-9).is_err());
    }
}
