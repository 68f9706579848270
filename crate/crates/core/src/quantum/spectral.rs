use super::borel::BorelSet;
use super::function::PiecewiseFn;
use super::state::PureState;
use super::SNAP_TOL;
use crate::error::Result;
use crate::linalg::{HermitianOperator, Projector, SpectralDecomposition};

/// `<P_k>_h` for every eigenprojector, clamped into `[0, 1]`.
pub fn spectral_weights(dec: &SpectralDecomposition, h: &PureState) -> Result<Vec<f64>> {
    h.check_dim(dec.dim())?;
    Ok(dec
        .projectors()
        .iter()
        .map(|p| p.expectation(h.vector()).clamp(0.0, 1.0))
        .collect())
}

/// `E_B^T`: the sum of the eigenprojectors whose eigenvalue lies in `B`.
pub fn spectral_projector(dec: &SpectralDecomposition, b: &BorelSet) -> Projector {
    spectral_projector_snapped(dec, b, SNAP_TOL)
}

pub fn spectral_projector_snapped(dec: &SpectralDecomposition, b: &BorelSet, snap: f64) -> Projector {
    let members = dec
        .eigenvalues()
        .iter()
        .zip(dec.projectors())
        .filter(|(&lambda, _)| b.contains_snapped(lambda, snap))
        .map(|(_, p)| p);
    Projector::sum_orthogonal(dec.dim(), members)
}

/// `pi(T, [h], B) = <E_B^T>_h`.
pub fn prob(dec: &SpectralDecomposition, h: &PureState, b: &BorelSet) -> Result<f64> {
    prob_snapped(dec, h, b, SNAP_TOL)
}

pub fn prob_snapped(dec: &SpectralDecomposition, h: &PureState, b: &BorelSet, snap: f64) -> Result<f64> {
    let weights = spectral_weights(dec, h)?;
    let inside: Vec<bool> = dec
        .eigenvalues()
        .iter()
        .map(|&lambda| b.contains_snapped(lambda, snap))
        .collect();
    // E_B = I or E_B = 0 exactly; skip the rounded weight sum.
    if inside.iter().all(|&x| x) {
        return Ok(1.0);
    }
    if !inside.iter().any(|&x| x) {
        return Ok(0.0);
    }
    let p: f64 = weights.iter().zip(&inside).filter(|(_, &i)| i).map(|(w, _)| w).sum();
    Ok(p.clamp(0.0, 1.0))
}

/// `<T>_h = sum_k lambda_k <P_k>_h`.
pub fn expectation(dec: &SpectralDecomposition, h: &PureState) -> Result<f64> {
    let weights = spectral_weights(dec, h)?;
    Ok(dec.eigenvalues().iter().zip(weights).map(|(l, w)| l * w).sum())
}

/// Distribution function `F_[h](u) = <E_(-inf,u]>_h`, right-continuous.
pub fn cdf(dec: &SpectralDecomposition, h: &PureState, u: f64) -> Result<f64> {
    prob(dec, h, &BorelSet::at_most(u))
}

/// `g(T) = sum_k g(lambda_k) P_k`.
pub fn functional_calculus(dec: &SpectralDecomposition, g: &PiecewiseFn) -> HermitianOperator {
    functional_calculus_chain(dec, std::slice::from_ref(g))
}

/// `(g_m ∘ ... ∘ g_1)(T)` for the chain `[g_1, ..., g_m]`.
pub fn functional_calculus_chain(dec: &SpectralDecomposition, chain: &[PiecewiseFn]) -> HermitianOperator {
    let m = dec.map_eigenvalues(|x| chain.iter().fold(x, |acc, g| g.eval(acc)));
    HermitianOperator::new(m).expect("real combination of projectors is Hermitian")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigh, ComplexMatrix, CLUSTER_TOL};
    use crate::quantum::Interval;

    fn pauli_z() -> SpectralDecomposition {
        eigh(&HermitianOperator::from_diag(&[1.0, -1.0]), CLUSTER_TOL).unwrap()
    }

    fn plus() -> PureState {
        PureState::from_real(&[1.0, 1.0]).unwrap()
    }

    #[test]
    fn spectral_projector_extremes() {
        let z = pauli_z();
        assert_eq!(
            spectral_projector(&z, &BorelSet::real_line()).matrix(),
            &ComplexMatrix::identity(2)
        );
        assert_eq!(spectral_projector(&z, &BorelSet::empty()).rank(), 0);
        assert_eq!(
            spectral_projector(&z, &BorelSet::at_most(0.0)).matrix(),
            &ComplexMatrix::from_diag(&[0.0, 1.0])
        );
    }

    #[test]
    fn probabilities_on_pauli_z() {
        let z = pauli_z();
        let h = plus();
        assert_eq!(prob(&z, &h, &BorelSet::real_line()).unwrap(), 1.0);
        let p = prob(&z, &h, &BorelSet::interval(Interval::point(1.0))).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        let e0 = PureState::basis(2, 0);
        assert_eq!(prob(&z, &e0, &BorelSet::points(&[1.0])).unwrap(), 1.0);
        assert!(prob(&z, &PureState::basis(3, 0), &BorelSet::real_line()).is_err());
    }

    #[test]
    fn expectation_and_cdf() {
        let z = pauli_z();
        assert!(expectation(&z, &plus()).unwrap().abs() < 1e-15);
        assert_eq!(expectation(&z, &PureState::basis(2, 0)).unwrap(), 1.0);
        assert_eq!(cdf(&z, &plus(), -1.5).unwrap(), 0.0);
        assert!((cdf(&z, &plus(), 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(cdf(&z, &plus(), 1.0).unwrap(), 1.0);
    }

    #[test]
    fn functional_calculus_examples() {
        let z = pauli_z();
        let zop = HermitianOperator::from_diag(&[1.0, -1.0]);
        let id = functional_calculus(&z, &PiecewiseFn::identity());
        assert!(id.matrix().max_abs_diff(zop.matrix()) < 1e-10);
        let sq = functional_calculus(&z, &PiecewiseFn::square());
        assert!(sq.matrix().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        let clamp = functional_calculus(&z, &PiecewiseFn::step(0.0, 0.0, 1.0));
        assert_eq!(clamp.matrix(), &ComplexMatrix::from_diag(&[1.0, 0.0]));
    }
}
