//! CHSH-type bounds for propositions with intersections.
//!
//! For projector couples `E_1, E_2` and `F_1, F_2` the operators
//!
//! ```text
//! T_ij = E_i ∧ F_j + E_i' ∧ F_j' - E_i' ∧ F_j - E_i ∧ F_j'
//! ```
//!
//! (`'` the orthocomplement) satisfy `|<T_11> - <T_12>| + |<T_21> + <T_22>| <= 2`
//! whenever the couples are represented by propositions whose sixteen
//! intersections are propositions mapping to the corresponding meets. Here
//! that is realized by a single shared backing operator built from a
//! commuting family. Non-commuting couples (for instance the singlet
//! configuration) admit no such representation and may exceed 2.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hidden::{epsilon, fiber_subset, proposition_from, Proposition};
use crate::linalg::{
    commutes, eigh, projector_join, projector_meet, ComplexMatrix, HermitianOperator, Projector, SpectralDecomposition,
    CLUSTER_TOL, COMMUTE_TOL,
};
use crate::quantum::{BorelSet, PureState};

/// Joint eigenvalues of `sum_k 2^k E_k` farther than this from an integer
/// label are rejected.
pub const LABEL_SNAP_TOL: f64 = 1e-6;
/// Max-norm tolerance for the boolean-homomorphism checks.
pub const HOMOMORPHISM_TOL: f64 = 1e-8;
/// Slack allowed above the classical bound 2.
pub const CHSH_SLACK: f64 = 1e-9;

/// Two projector couples and a state.
#[derive(Debug, Clone)]
pub struct ChshConfig {
    pub e: [Projector; 2],
    pub f: [Projector; 2],
    pub state: PureState,
}

impl ChshConfig {
    pub fn new(e1: Projector, e2: Projector, f1: Projector, f2: Projector, state: PureState) -> Result<Self> {
        let dim = state.dim();
        for p in [&e1, &e2, &f1, &f2] {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        Ok(Self {
            e: [e1, e2],
            f: [f1, f2],
            state,
        })
    }

    /// `<T_ij>_h` for `i, j ∈ {1, 2}`, zero-indexed.
    pub fn correlations(&self) -> Result<[[f64; 2]; 2]> {
        let mut out = [[0.0; 2]; 2];
        for (i, e) in self.e.iter().enumerate() {
            for (j, f) in self.f.iter().enumerate() {
                out[i][j] = t_ij(e, f)?.quadratic_form(self.state.vector());
            }
        }
        Ok(out)
    }

    /// Whether all four projectors commute pairwise.
    pub fn is_commuting(&self, tol: f64) -> Result<bool> {
        let all = [&self.e[0], &self.e[1], &self.f[0], &self.f[1]];
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                if !commutes(a, b, tol)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `T(E, F) = E∧F + E'∧F' - E'∧F - E∧F'`, built from meets.
pub fn t_ij(e: &Projector, f: &Projector) -> Result<HermitianOperator> {
    let (ec, fc) = (e.complement(), f.complement());
    let both = projector_meet(e, f)?;
    let neither = projector_meet(&ec, &fc)?;
    let only_f = projector_meet(&ec, f)?;
    let only_e = projector_meet(e, &fc)?;
    let m = &(&(both.matrix() + neither.matrix()) - only_f.matrix()) - only_e.matrix();
    HermitianOperator::with_tolerance(m, 1e-8)
}

/// `|<T_11> - <T_12>| + |<T_21> + <T_22>|`.
pub fn chsh_value(cfg: &ChshConfig) -> Result<f64> {
    Ok(chsh_combination(&cfg.correlations()?))
}

pub fn chsh_combination(t: &[[f64; 2]; 2]) -> f64 {
    (t[0][0] - t[0][1]).abs() + (t[1][0] + t[1][1]).abs()
}

/// Propositions for a commuting family over one shared backing.
///
/// The backing is `M = sum_k 2^k E_k`; its eigenvalues are the integer
/// labels of the joint sectors, and proposition `k` is the set of labels
/// whose bit `k` is set.
pub fn joint_family(projectors: &[Projector]) -> Result<Vec<Proposition>> {
    let Some(first) = projectors.first() else {
        return Ok(Vec::new());
    };
    let dim = first.dim();
    for (i, a) in projectors.iter().enumerate() {
        if a.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: a.dim(),
            });
        }
        for (j, b) in projectors.iter().enumerate().skip(i + 1) {
            let norm = a.matrix().commutator(b.matrix()).max_norm();
            if norm > COMMUTE_TOL {
                return Err(Error::NotCommuting {
                    first: i,
                    second: j,
                    norm,
                });
            }
        }
    }

    let mut m = ComplexMatrix::zeros(dim);
    for (k, p) in projectors.iter().enumerate() {
        m = &m + &p.matrix().scale((1u64 << k) as f64);
    }
    let raw = eigh(&HermitianOperator::with_tolerance(m, 1e-8)?, CLUSTER_TOL)?;

    let top = ((1u64 << projectors.len()) - 1) as f64;
    let mut labels: Vec<f64> = Vec::new();
    let mut sectors: Vec<Vec<&Projector>> = Vec::new();
    for (&lambda, p) in raw.eigenvalues().iter().zip(raw.projectors()) {
        let label = lambda.round();
        if (lambda - label).abs() > LABEL_SNAP_TOL || label < 0.0 || label > top {
            return Err(Error::DegenerateLabeling { eigenvalue: lambda });
        }
        if labels.last() == Some(&label) {
            sectors.last_mut().unwrap().push(p);
        } else {
            labels.push(label);
            sectors.push(vec![p]);
        }
    }
    let merged = sectors
        .into_iter()
        .map(|ps| Projector::sum_orthogonal(dim, ps))
        .collect();
    let backing = Arc::new(SpectralDecomposition::from_parts(labels, merged)?);

    let props: Vec<Proposition> = (0..projectors.len())
        .map(|k| {
            let bits: Vec<f64> = (0..=top as u64)
                .filter(|label| label >> k & 1 == 1)
                .map(|label| label as f64)
                .collect();
            proposition_from(backing.clone(), BorelSet::points(&bits))
        })
        .collect();
    for (prop, target) in props.iter().zip(projectors) {
        if epsilon(prop).matrix().max_abs_diff(target.matrix()) > LABEL_SNAP_TOL {
            return Err(Error::DegenerateLabeling { eigenvalue: f64::NAN });
        }
    }
    Ok(props)
}

/// Propositions `A`, `B` over one backing with `epsilon(A) = E`,
/// `epsilon(B) = F`, for commuting `E`, `F`.
pub fn joint_propositions(e: &Projector, f: &Projector) -> Result<(Proposition, Proposition)> {
    let mut props = joint_family(&[e.clone(), f.clone()])?.into_iter();
    let a = props.next().expect("two propositions");
    let b = props.next().expect("two propositions");
    Ok((a, b))
}

/// Four propositions `A_1, A_2, B_1, B_2` over a single backing, so that all
/// sixteen intersections are propositions as well.
#[derive(Debug, Clone)]
pub struct PropositionQuadruple {
    pub a: [Proposition; 2],
    pub b: [Proposition; 2],
}

impl PropositionQuadruple {
    pub fn new(a1: Proposition, a2: Proposition, b1: Proposition, b2: Proposition) -> Result<Self> {
        for other in [&a2, &b1, &b2] {
            if !a1.shares_backing(other) {
                return Err(Error::BackingMismatch);
            }
        }
        Ok(Self {
            a: [a1, a2],
            b: [b1, b2],
        })
    }

    /// Builds the quadruple from a commuting configuration; fails with
    /// [`Error::NotCommuting`] otherwise.
    pub fn from_projectors(e: &[Projector; 2], f: &[Projector; 2]) -> Result<Self> {
        let family = joint_family(&[e[0].clone(), e[1].clone(), f[0].clone(), f[1].clone()])?;
        let [a1, a2, b1, b2]: [Proposition; 4] = family.try_into().expect("four propositions");
        Self::new(a1, a2, b1, b2)
    }

    pub fn backing(&self) -> &Arc<SpectralDecomposition> {
        self.a[0].backing()
    }

    /// The configuration of the epsilon-images at state `h`.
    pub fn epsilon_config(&self, h: &PureState) -> Result<ChshConfig> {
        ChshConfig::new(
            epsilon(&self.a[0]),
            epsilon(&self.a[1]),
            epsilon(&self.b[0]),
            epsilon(&self.b[1]),
            h.clone(),
        )
    }

    /// Checks that each of the sixteen intersections maps to the matching
    /// meet; returns the largest max-norm residual.
    pub fn intersection_residual(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for a in &self.a {
            for b in &self.b {
                for x in [a.clone(), a.complement()] {
                    for y in [b.clone(), b.complement()] {
                        let lhs = epsilon(&x.intersect(&y)?);
                        let rhs = projector_meet(&epsilon(&x), &epsilon(&y))?;
                        worst = worst.max(lhs.matrix().max_abs_diff(rhs.matrix()));
                    }
                }
            }
        }
        Ok(worst)
    }
}

/// A step function on the fiber `(0,1)`: value `cell_values[k]` on the open
/// cell `(breaks[k], breaks[k+1])`, `point_values[k]` at interior break
/// `breaks[k+1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberStep {
    pub breaks: Vec<f64>,
    pub cell_values: Vec<f64>,
    pub point_values: Vec<f64>,
}

impl FiberStep {
    fn sample(breaks: &[f64], f: impl Fn(f64) -> f64) -> Self {
        let cell_values = breaks.windows(2).map(|w| f(0.5 * (w[0] + w[1]))).collect();
        let point_values = breaks[1..breaks.len() - 1].iter().map(|&t| f(t)).collect();
        Self {
            breaks: breaks.to_vec(),
            cell_values,
            point_values,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let idx = self.breaks.partition_point(|&b| b < t);
        if idx > 0 && idx < self.breaks.len() - 1 && self.breaks[idx] == t {
            self.point_values[idx - 1]
        } else {
            self.cell_values[idx.saturating_sub(1).min(self.cell_values.len() - 1)]
        }
    }

    pub fn integral(&self) -> f64 {
        self.breaks
            .windows(2)
            .zip(&self.cell_values)
            .map(|(w, v)| (w[1] - w[0]) * v)
            .sum()
    }
}

/// The classical functions
/// `f_ij = χ(A_i∩B_j) + χ(A_i'∩B_j') - χ(A_i'∩B_j) - χ(A_i∩B_j')` on one fiber.
#[derive(Debug, Clone)]
pub struct ChshFunctions {
    pub f: [[FiberStep; 2]; 2],
}

impl ChshFunctions {
    /// `|f_11 - f_12| + |f_21 + f_22|` on every cell and at every break.
    pub fn identity_values(&self) -> Vec<f64> {
        let f = &self.f;
        let combine = |v: [[f64; 2]; 2]| (v[0][0] - v[0][1]).abs() + (v[1][0] + v[1][1]).abs();
        let cells = (0..f[0][0].cell_values.len()).map(|k| {
            combine([
                [f[0][0].cell_values[k], f[0][1].cell_values[k]],
                [f[1][0].cell_values[k], f[1][1].cell_values[k]],
            ])
        });
        let points = (0..f[0][0].point_values.len()).map(|k| {
            combine([
                [f[0][0].point_values[k], f[0][1].point_values[k]],
                [f[1][0].point_values[k], f[1][1].point_values[k]],
            ])
        });
        cells.chain(points).collect()
    }

    /// The identity holds exactly (no tolerance) everywhere on the fiber.
    pub fn identity_holds(&self) -> bool {
        self.identity_values().iter().all(|&v| v == 2.0)
    }

    pub fn integrals(&self) -> [[f64; 2]; 2] {
        self.f.each_ref().map(|row| row.each_ref().map(FiberStep::integral))
    }

    /// The CHSH combination of the fiber integrals.
    pub fn chsh_value(&self) -> f64 {
        chsh_combination(&self.integrals())
    }
}

/// Builds the four `f_ij` from fiber slices of the quadruple at `h`, using
/// only interval algebra inside `(0,1)`.
pub fn classical_chsh_functions(q: &PropositionQuadruple, h: &PureState) -> Result<ChshFunctions> {
    let fiber = BorelSet::interval(crate::quantum::Interval::open(0.0, 1.0));
    let slice = |p: &Proposition| -> Result<(BorelSet, BorelSet)> {
        let s = fiber_subset(p, h)?;
        let c = fiber.difference(&s);
        Ok((s, c))
    };
    let a = [slice(&q.a[0])?, slice(&q.a[1])?];
    let b = [slice(&q.b[0])?, slice(&q.b[1])?];

    let mut breaks: Vec<f64> = a
        .iter()
        .chain(&b)
        .flat_map(|(s, _)| s.endpoints())
        .chain([0.0, 1.0])
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let indicator = |set: &BorelSet, t: f64| if set.contains(t) { 1.0 } else { 0.0 };
    let build = |i: usize, j: usize| -> FiberStep {
        let (ai, aci) = (&a[i].0, &a[i].1);
        let (bj, bcj) = (&b[j].0, &b[j].1);
        let both = ai.intersect(bj);
        let neither = aci.intersect(bcj);
        let only_b = aci.intersect(bj);
        let only_a = ai.intersect(bcj);
        FiberStep::sample(&breaks, |t| {
            indicator(&both, t) + indicator(&neither, t) - indicator(&only_b, t) - indicator(&only_a, t)
        })
    };
    Ok(ChshFunctions {
        f: [[build(0, 0), build(0, 1)], [build(1, 0), build(1, 1)]],
    })
}

/// Detailed outcome of the boolean-homomorphism check.
#[derive(Debug, Clone, PartialEq)]
pub struct HomomorphismReport {
    /// Largest residual over meets, joins and complements.
    pub max_residual: f64,
    pub preserves_operations: bool,
    /// `commutes(epsilon(A), epsilon(B))`.
    pub commutes: bool,
}

/// Checks that epsilon maps the boolean algebra generated by `A`, `B` into
/// the projector lattice: intersections to meets, unions to joins and
/// complements to orthocomplements, including the decompositions
/// `A ∪ B = A ∪ (A' ∩ B) = B ∪ (B' ∩ A)`.
pub fn boolean_homomorphism_report(a: &Proposition, b: &Proposition) -> Result<HomomorphismReport> {
    if !a.shares_backing(b) {
        return Err(Error::BackingMismatch);
    }
    let generators = [a.clone(), a.complement(), b.clone(), b.complement()];
    let images: Vec<Projector> = generators.iter().map(epsilon).collect();
    let mut worst: f64 = 0.0;
    let mut track = |lhs: &Projector, rhs: &Projector| {
        worst = worst.max(lhs.matrix().max_abs_diff(rhs.matrix()));
    };

    for (x, ex) in generators.iter().zip(&images) {
        track(&epsilon(&x.complement()), &ex.complement());
        for (y, ey) in generators.iter().zip(&images) {
            track(&epsilon(&x.intersect(y)?), &projector_meet(ex, ey)?);
            track(&epsilon(&x.union(y)?), &projector_join(ex, ey)?);
        }
    }
    let (e, f) = (&images[0], &images[2]);
    let (ec, fc) = (&images[1], &images[3]);
    let join = projector_join(e, f)?;
    let via_a = projector_join(e, &projector_meet(ec, f)?)?;
    let via_b = projector_join(f, &projector_meet(fc, e)?)?;
    track(&join, &via_a);
    track(&join, &via_b);
    track(&epsilon(&a.union(b)?), &via_a);

    Ok(HomomorphismReport {
        max_residual: worst,
        preserves_operations: worst <= HOMOMORPHISM_TOL,
        commutes: commutes(e, f, COMMUTE_TOL)?,
    })
}

/// `true` iff epsilon is a boolean homomorphism on the algebra generated by
/// `A` and `B`. When it is, `epsilon(A)` and `epsilon(B)` must commute.
pub fn check_boolean_homomorphism(a: &Proposition, b: &Proposition) -> Result<bool> {
    let report = boolean_homomorphism_report(a, b)?;
    debug_assert!(!report.preserves_operations || report.commutes);
    Ok(report.preserves_operations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::commutes;
    use num_complex::Complex64;

    fn diag(d: &[f64]) -> Projector {
        Projector::new(ComplexMatrix::from_diag(d)).unwrap()
    }

    #[test]
    fn t_of_identities_is_identity() {
        let id = Projector::identity(3);
        let t = t_ij(&id, &id).unwrap();
        assert!(t.matrix().max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn t_of_commuting_is_product_of_reflections() {
        let e = diag(&[1.0, 1.0, 0.0, 0.0]);
        let f = diag(&[1.0, 0.0, 1.0, 0.0]);
        let t = t_ij(&e, &f).unwrap();
        let id = ComplexMatrix::identity(4);
        let re = &e.matrix().scale(2.0) - &id;
        let rf = &f.matrix().scale(2.0) - &id;
        assert!(t.matrix().max_abs_diff(&(&re * &rf)) < 1e-8);
    }

    #[test]
    fn t_of_distinct_lines_vanishes() {
        let e = diag(&[1.0, 0.0]);
        let f = Projector::onto_line(&[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]).unwrap();
        assert!(t_ij(&e, &f).unwrap().matrix().max_norm() < 1e-12);
    }

    #[test]
    fn chsh_of_identities_is_two() {
        let id = Projector::identity(2);
        let cfg = ChshConfig::new(id.clone(), id.clone(), id.clone(), id, PureState::basis(2, 0)).unwrap();
        assert!((chsh_value(&cfg).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn config_checks_dimensions() {
        let p = Projector::identity(2);
        assert!(ChshConfig::new(p.clone(), p.clone(), p, Projector::identity(3), PureState::basis(2, 0)).is_err());
    }

    #[test]
    fn joint_propositions_on_diagonal_pair() {
        let e = diag(&[1.0, 1.0, 0.0, 0.0]);
        let f = diag(&[1.0, 0.0, 1.0, 0.0]);
        let (a, b) = joint_propositions(&e, &f).unwrap();
        assert_eq!(a.backing().eigenvalues(), &[0.0, 1.0, 2.0, 3.0]);
        assert!(epsilon(&a).matrix().max_abs_diff(e.matrix()) < 1e-12);
        assert!(epsilon(&b).matrix().max_abs_diff(f.matrix()) < 1e-12);
        let meet = epsilon(&a.intersect(&b).unwrap());
        assert!(
            meet.matrix()
                .max_abs_diff(&ComplexMatrix::from_diag(&[1.0, 0.0, 0.0, 0.0]))
                < 1e-12
        );
        assert!(check_boolean_homomorphism(&a, &b).unwrap());
    }

    #[test]
    fn joint_propositions_of_equal_projectors() {
        let e = Projector::onto_line(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]).unwrap();
        let (a, b) = joint_propositions(&e, &e).unwrap();
        let ab = epsilon(&a.intersect(&b).unwrap());
        assert!(ab.matrix().max_abs_diff(e.matrix()) < 1e-12);
        assert!(epsilon(&a).matrix().max_abs_diff(epsilon(&b).matrix()) < 1e-12);
        assert!(check_boolean_homomorphism(&a, &a).unwrap());
    }

    #[test]
    fn non_commuting_pair_is_rejected() {
        let e = diag(&[1.0, 0.0]);
        let f = Projector::onto_line(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        assert!(matches!(joint_propositions(&e, &f), Err(Error::NotCommuting { .. })));
    }

    #[test]
    fn disjoint_sets_over_shared_backing() {
        let e = diag(&[1.0, 1.0, 0.0]);
        let f = diag(&[0.0, 0.0, 1.0]);
        let (a, b) = joint_propositions(&e, &f).unwrap();
        assert!(epsilon(&a.intersect(&b).unwrap()).rank() == 0);
        let report = boolean_homomorphism_report(&a, &b).unwrap();
        assert!(report.preserves_operations && report.commutes);
    }

    #[test]
    fn backing_mismatch() {
        let (a, _) = joint_propositions(&diag(&[1.0, 0.0]), &diag(&[1.0, 0.0])).unwrap();
        let (c, _) = joint_propositions(&diag(&[0.0, 1.0]), &diag(&[1.0, 1.0])).unwrap();
        assert_eq!(check_boolean_homomorphism(&a, &c), Err(Error::BackingMismatch));
    }

    #[test]
    fn full_fiber_functions_are_constant_one() {
        let id = Projector::identity(2);
        let q = PropositionQuadruple::from_projectors(&[id.clone(), id.clone()], &[id.clone(), id]).unwrap();
        let h = PureState::from_real(&[0.6, 0.8]).unwrap();
        let fns = classical_chsh_functions(&q, &h).unwrap();
        for row in &fns.f {
            for f in row {
                assert!(f.cell_values.iter().all(|&v| v == 1.0));
                assert!((f.integral() - 1.0).abs() < 1e-15);
            }
        }
        assert!(fns.identity_holds());
        let cfg = q.epsilon_config(&h).unwrap();
        assert!((chsh_value(&cfg).unwrap() - 2.0).abs() < 1e-12);
        assert!(commutes(&cfg.e[0], &cfg.f[1], COMMUTE_TOL).unwrap());
    }
}
