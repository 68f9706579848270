use std::sync::Arc;

use super::proposition::{epsilon, Proposition};
use super::quantile::{quantile_cells, QuantileStep};
use super::WEIGHT_FLOOR;
use crate::error::Result;
use crate::linalg::{eigh, ComplexMatrix, HermitianOperator, SpectralDecomposition, CLUSTER_TOL};
use crate::quantum::{BorelSet, PiecewiseFn, PureState};

/// A classical observable `g_m ∘ ... ∘ g_1 ∘ f_T` on the fibered state
/// space, where `f_T` is the quantile observable of `T`.
#[derive(Debug, Clone)]
pub struct ClassicalObservable {
    backing: Arc<SpectralDecomposition>,
    post: Vec<PiecewiseFn>,
}

impl ClassicalObservable {
    pub fn new(backing: Arc<SpectralDecomposition>) -> Self {
        Self {
            backing,
            post: Vec::new(),
        }
    }

    pub fn from_operator(op: &HermitianOperator) -> Result<Self> {
        Ok(Self::new(Arc::new(eigh(op, CLUSTER_TOL)?)))
    }

    pub fn backing(&self) -> &Arc<SpectralDecomposition> {
        &self.backing
    }

    /// Post-composed functions in application order.
    pub fn post(&self) -> &[PiecewiseFn] {
        &self.post
    }

    pub fn dim(&self) -> usize {
        self.backing.dim()
    }

    fn apply_post(&self, x: f64) -> f64 {
        self.post.iter().fold(x, |acc, g| g.eval(acc))
    }

    /// `(g ∘ f)([h], t)`.
    pub fn eval(&self, h: &PureState, t: f64) -> Result<f64> {
        let (step, _) = quantile_cells(&self.backing, h, WEIGHT_FLOOR)?;
        Ok(self.apply_post(step.eval(t)?))
    }

    /// The distribution of the observable over the fiber of `[h]`, as a
    /// quantile step: images `g(v_k)` sorted, equal images merged.
    pub fn step(&self, h: &PureState) -> Result<QuantileStep> {
        let (base, _) = quantile_cells(&self.backing, h, WEIGHT_FLOOR)?;
        if self.post.is_empty() {
            return Ok(base);
        }
        let atoms = base
            .values()
            .iter()
            .enumerate()
            .map(|(k, &v)| (self.apply_post(v), base.weight(k)))
            .collect();
        Ok(QuantileStep::from_atoms(atoms))
    }

    /// Distinct values the observable can take on any fiber, increasing.
    pub fn outcome_values(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = self.backing.eigenvalues().iter().map(|&x| self.apply_post(x)).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        vals
    }

    /// The Borel set of eigenvalues `x` with `g(x) ∈ b`.
    pub fn pull_back(&self, b: &BorelSet) -> BorelSet {
        self.post.iter().rev().fold(b.clone(), |acc, g| g.preimage(&acc))
    }

    /// `(g ∘ f)^{-1}(b)` as a proposition over the backing operator.
    ///
    /// With a post chain, membership is decided by evaluating the chain at
    /// each eigenvalue. Preimages are ill-conditioned near the vertex of a
    /// quadratic piece, where a rounding error `e` in the image moves the
    /// boundary by `sqrt(e)`.
    pub fn event(&self, b: &BorelSet) -> Proposition {
        if self.post.is_empty() {
            return Proposition::new(self.backing.clone(), b.clone());
        }
        let members: Vec<f64> = self
            .backing
            .eigenvalues()
            .iter()
            .copied()
            .filter(|&x| b.contains(self.apply_post(x)))
            .collect();
        Proposition::new(self.backing.clone(), BorelSet::points(&members))
    }
}

/// `g ∘ obs`. Non-injective `g` merges atoms when the distribution is read
/// back through [`ClassicalObservable::step`].
pub fn compose(g: &PiecewiseFn, obs: &ClassicalObservable) -> ClassicalObservable {
    let mut out = obs.clone();
    if !g.is_identity() {
        out.post.push(g.clone());
    }
    out
}

/// The operator whose spectral family is `t -> epsilon(obs^{-1}(-inf, t])`.
///
/// Jumps can only occur at outcome values, so the family is sampled there
/// and `T = sum_j w_j (E_{w_j} - E_{w_{j-1}})`.
pub fn tau(obs: &ClassicalObservable) -> HermitianOperator {
    let dim = obs.dim();
    let mut out = ComplexMatrix::zeros(dim);
    let mut below = ComplexMatrix::zeros(dim);
    for w in obs.outcome_values() {
        let family = epsilon(&obs.event(&BorelSet::at_most(w)));
        let jump = family.matrix() - &below;
        out = &out + &jump.scale(w);
        below = family.matrix().clone();
    }
    HermitianOperator::with_tolerance(out, 1e-8).expect("combination of spectral projectors is Hermitian")
}

/// `∫_0^1 g(f([h], t)) dt`, integrated exactly over the quantile cells.
pub fn integrate_fiber(g: &PiecewiseFn, obs: &ClassicalObservable, h: &PureState) -> Result<f64> {
    Ok(obs.step(h)?.integrate(|v| g.eval(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::functional_calculus;

    fn obs(diag: &[f64]) -> ClassicalObservable {
        ClassicalObservable::from_operator(&HermitianOperator::from_diag(diag)).unwrap()
    }

    fn plus() -> PureState {
        PureState::from_real(&[1.0, 1.0]).unwrap()
    }

    #[test]
    fn eigenvalue_rounded_next_to_a_vertex() {
        // g peaks at x = 2; the eigenvalue sits one ulp below it.
        let lambda = 2.0 - f64::EPSILON;
        let base = obs(&[-1.0, 0.5, lambda]);
        let g = PiecewiseFn::single(crate::quantum::Piece::quadratic(-0.5, 2.0, 0.0));
        let composed = compose(&g, &base);
        let lhs = tau(&composed);
        let rhs = functional_calculus(base.backing(), &g);
        assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-12);
        let h = PureState::from_real(&[1.0, 1.0, 1.0]).unwrap();
        let report = crate::hidden::sample(&composed, &h, 1000, 5).unwrap();
        assert!(report.predicted.iter().all(|&p| (p - 1.0 / 3.0).abs() < 1e-12));
    }

    #[test]
    fn eval_on_pauli_z() {
        let z = obs(&[1.0, -1.0]);
        assert_eq!(z.eval(&plus(), 0.25).unwrap(), -1.0);
        assert_eq!(z.eval(&plus(), 0.75).unwrap(), 1.0);
        for t in [0.01, 0.5, 0.99] {
            assert_eq!(z.eval(&PureState::basis(2, 1), t).unwrap(), -1.0);
        }
        assert!(z.eval(&plus(), 1.0).is_err());
    }

    #[test]
    fn compose_identity_is_noop() {
        let z = obs(&[1.0, -1.0]);
        let c = compose(&PiecewiseFn::identity(), &z);
        assert!(c.post().is_empty());
        assert_eq!(c.step(&plus()).unwrap(), z.step(&plus()).unwrap());
    }

    #[test]
    fn compose_square_collapses_atoms() {
        let c = compose(&PiecewiseFn::square(), &obs(&[1.0, -1.0]));
        let step = c.step(&plus()).unwrap();
        assert_eq!(step.values(), &[1.0]);
        assert_eq!(step.cuts(), &[0.0, 1.0]);
        assert_eq!(c.eval(&plus(), 0.2).unwrap(), 1.0);
    }

    #[test]
    fn compose_negation_reverses_order() {
        let o = obs(&[1.0, 2.0]);
        let h = PureState::from_real(&[1.0, 3f64.sqrt()]).unwrap(); // weights 1/4, 3/4
        let c = compose(&PiecewiseFn::affine(-1.0, 0.0), &o);
        let step = c.step(&h).unwrap();
        assert_eq!(step.values(), &[-2.0, -1.0]);
        assert!((step.weight(0) - 0.75).abs() < 1e-15);
        assert!((step.weight(1) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn tau_round_trips() {
        let z = obs(&[1.0, -1.0]);
        assert!(tau(&z).matrix().max_abs_diff(&ComplexMatrix::from_diag(&[1.0, -1.0])) < 1e-10);
        let sq = compose(&PiecewiseFn::square(), &z);
        assert!(tau(&sq).matrix().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        let aff = compose(&PiecewiseFn::affine(2.0, 1.0), &obs(&[1.0, 2.0, 3.0]));
        assert_eq!(tau(&aff).matrix(), &ComplexMatrix::from_diag(&[3.0, 5.0, 7.0]));
        let expected = functional_calculus(aff.backing(), &PiecewiseFn::affine(2.0, 1.0));
        assert_eq!(tau(&aff), expected);
    }

    #[test]
    fn fiber_integrals() {
        let z = obs(&[1.0, -1.0]);
        assert!(integrate_fiber(&PiecewiseFn::identity(), &z, &plus()).unwrap().abs() < 1e-15);
        let h = PureState::from_real(&[0.3, -0.8]).unwrap();
        assert!((integrate_fiber(&PiecewiseFn::square(), &z, &h).unwrap() - 1.0).abs() < 1e-15);
        let d = obs(&[1.0, 2.0, 3.0]);
        let eq = PureState::from_real(&[1.0, 1.0, 1.0]).unwrap();
        assert!((integrate_fiber(&PiecewiseFn::identity(), &d, &eq).unwrap() - 2.0).abs() < 1e-15);
    }
}
