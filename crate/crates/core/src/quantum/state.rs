use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{inner, norm};

/// Tolerance on `|<h,k>| = 1` for ray equality.
pub const RAY_TOL: f64 = 1e-9;

/// A pure state `[h]`, stored as a unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    vector: Vec<Complex64>,
}

impl PureState {
    /// Normalizes `h`; fails on the zero vector.
    pub fn new(h: Vec<Complex64>) -> Result<Self> {
        let n = norm(&h);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            vector: h.into_iter().map(|z| z / n).collect(),
        })
    }

    pub fn from_real(h: &[f64]) -> Result<Self> {
        Self::new(h.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Standard basis vector `e_i` in dimension `dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[i] = Complex64::new(1.0, 0.0);
        Self { vector: v }
    }

    pub fn vector(&self) -> &[Complex64] {
        &self.vector
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    /// `|<h, k>|` for the two unit representatives.
    pub fn overlap(&self, other: &PureState) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(inner(&self.vector, &other.vector).norm())
    }

    /// Ray equality: `h ~ k` iff `|<h,k>| = 1` within [`RAY_TOL`].
    pub fn same_ray(&self, other: &PureState) -> Result<bool> {
        Ok((1.0 - self.overlap(other)?).abs() <= RAY_TOL)
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_and_rejects_zero() {
        let h = PureState::from_real(&[3.0, 4.0]).unwrap();
        assert!((norm(h.vector()) - 1.0).abs() < 1e-12);
        assert_eq!(PureState::from_real(&[0.0, 0.0]), Err(Error::ZeroState));
    }

    #[test]
    fn phase_does_not_change_the_ray() {
        let h = PureState::from_real(&[1.0, 2.0]).unwrap();
        let phase = Complex64::from_polar(1.0, 0.7);
        let k = PureState::new(h.vector().iter().map(|z| z * phase).collect()).unwrap();
        assert!(h.same_ray(&k).unwrap());
        assert!(!PureState::basis(2, 0).same_ray(&PureState::basis(2, 1)).unwrap());
    }
}
