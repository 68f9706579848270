use std::sync::Arc;

use super::quantile::quantile_cells;
use super::WEIGHT_FLOOR;
use crate::error::{Error, Result};
use crate::linalg::{Projector, SpectralDecomposition};
use crate::quantum::{spectral_projector, BorelSet, Interval, PureState, SNAP_TOL};

/// An operator-backed proposition `f_T^{-1}(B)`.
///
/// Its slice over the fiber of `[h]` is the union of the quantile cells of
/// the eigenvalues in `B`, so its Lebesgue measure is `<E_B^T>_h`.
#[derive(Debug, Clone)]
pub struct Proposition {
    backing: Arc<SpectralDecomposition>,
    borel: BorelSet,
}

impl PartialEq for Proposition {
    fn eq(&self, other: &Self) -> bool {
        self.shares_backing(other) && self.borel == other.borel
    }
}

impl Proposition {
    pub fn new(backing: Arc<SpectralDecomposition>, borel: BorelSet) -> Self {
        Self { backing, borel }
    }

    pub fn backing(&self) -> &Arc<SpectralDecomposition> {
        &self.backing
    }

    pub fn borel(&self) -> &BorelSet {
        &self.borel
    }

    pub fn shares_backing(&self, other: &Proposition) -> bool {
        Arc::ptr_eq(&self.backing, &other.backing) || *self.backing == *other.backing
    }

    /// `S \ L`.
    pub fn complement(&self) -> Proposition {
        Self::new(self.backing.clone(), self.borel.complement())
    }

    /// `L ∩ M`; both must share a backing.
    pub fn intersect(&self, other: &Proposition) -> Result<Proposition> {
        self.combine(other, BorelSet::intersect)
    }

    /// `L ∪ M`; both must share a backing.
    pub fn union(&self, other: &Proposition) -> Result<Proposition> {
        self.combine(other, BorelSet::union)
    }

    fn combine(&self, other: &Proposition, op: impl Fn(&BorelSet, &BorelSet) -> BorelSet) -> Result<Proposition> {
        if !self.shares_backing(other) {
            return Err(Error::BackingMismatch);
        }
        Ok(Self::new(self.backing.clone(), op(&self.borel, &other.borel)))
    }
}

pub fn proposition_from(dec: Arc<SpectralDecomposition>, b: BorelSet) -> Proposition {
    Proposition::new(dec, b)
}

/// The projector of a proposition: `E_B^T`.
pub fn epsilon(l: &Proposition) -> Projector {
    spectral_projector(&l.backing, &l.borel)
}

/// `L ∩ S_[h]` as a finite union of intervals inside `(0,1)`.
pub fn fiber_subset(l: &Proposition, h: &PureState) -> Result<BorelSet> {
    let (step, atoms) = quantile_cells(&l.backing, h, WEIGHT_FLOOR)?;
    let eigenvalues = l.backing.eigenvalues();
    let cells = atoms
        .iter()
        .enumerate()
        .filter(|(_, &k)| l.borel.contains_snapped(eigenvalues[k], SNAP_TOL))
        .map(|(j, _)| Interval::new(step.cuts()[j], false, step.cuts()[j + 1], true));
    Ok(BorelSet::from_intervals(cells).intersect(&unit_fiber()))
}

pub(crate) fn unit_fiber() -> BorelSet {
    BorelSet::interval(Interval::open(0.0, 1.0))
}
