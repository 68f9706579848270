use super::observable::{tau, ClassicalObservable};
use super::OBSERVABLE_TOL;
use crate::error::{Error, Result};
use crate::linalg::Projector;
use crate::quantum::PureState;

/// Two hidden states are confused iff every proposition has the same fiber
/// measure over them, which happens iff their rays coincide.
pub fn states_confusion_equivalent(h: &PureState, k: &PureState) -> Result<bool> {
    h.same_ray(k)
}

/// A projector whose expectation differs between `h` and `k`, if their rays
/// differ: the projector onto `h` itself, with `<P_h>_h = 1 > |<h,k>|^2`.
pub fn distinguishing_projector(h: &PureState, k: &PureState) -> Result<Option<Projector>> {
    if h.same_ray(k)? {
        return Ok(None);
    }
    Ok(Some(Projector::onto_line(h.vector())?))
}

/// Observables are confused iff they reduce to the same operator.
pub fn observables_confusion_equivalent(a: &ClassicalObservable, b: &ClassicalObservable) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(tau(a).matrix().max_abs_diff(tau(b).matrix()) <= OBSERVABLE_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hidden::compose;
    use crate::linalg::{ComplexMatrix, HermitianOperator};
    use crate::quantum::PiecewiseFn;
    use num_complex::Complex64;

    #[test]
    fn ray_equivalence() {
        let h = PureState::from_real(&[1.0, 0.0]).unwrap();
        let phased = PureState::new(vec![Complex64::from_polar(1.0, 2.1), Complex64::new(0.0, 0.0)]).unwrap();
        assert!(states_confusion_equivalent(&h, &phased).unwrap());
        assert!(!states_confusion_equivalent(&h, &PureState::basis(2, 1)).unwrap());

        let near = PureState::from_real(&[1.0, 1e-3]).unwrap();
        assert!(!states_confusion_equivalent(&h, &near).unwrap());
        // the projector onto (0,1) separates them by about 1e-6
        let e1 = Projector::onto_line(PureState::basis(2, 1).vector()).unwrap();
        let gap = e1.expectation(near.vector()) - e1.expectation(h.vector());
        assert!((gap - 1e-6 / (1.0 + 1e-6)).abs() < 1e-15);
        let p = distinguishing_projector(&h, &near).unwrap().unwrap();
        assert!(p.expectation(h.vector()) - p.expectation(near.vector()) > 0.0);
        assert!(distinguishing_projector(&h, &phased).unwrap().is_none());
    }

    #[test]
    fn observable_equivalence() {
        let z = ClassicalObservable::from_operator(&HermitianOperator::from_diag(&[1.0, -1.0])).unwrap();
        let x = ClassicalObservable::from_operator(
            &HermitianOperator::new(ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()).unwrap(),
        )
        .unwrap();
        let id = ClassicalObservable::from_operator(&HermitianOperator::from_diag(&[1.0, 1.0])).unwrap();
        assert!(observables_confusion_equivalent(&z, &z).unwrap());
        assert!(!observables_confusion_equivalent(&z, &x).unwrap());
        let z2 = compose(&PiecewiseFn::square(), &z);
        assert!(observables_confusion_equivalent(&z2, &id).unwrap());
        let three = ClassicalObservable::from_operator(&HermitianOperator::from_diag(&[1.0, 1.0, 1.0])).unwrap();
        assert!(observables_confusion_equivalent(&z, &three).is_err());
    }
}
