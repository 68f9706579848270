use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

use hv_core::bell::{
    boolean_homomorphism_report, chsh_value, classical_chsh_functions, joint_propositions, t_ij, ChshConfig,
    PropositionQuadruple,
};
use hv_core::hidden::{epsilon, proposition_from};
use hv_core::linalg::{commutes, eigh, ComplexMatrix, Projector, CLUSTER_TOL, COMMUTE_TOL};
use hv_core::quantum::PureState;
use hv_core::{random, Error};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Spin observable `cos(a) Z + sin(a) X`.
fn spin(a: f64) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[a.cos(), a.sin()], &[a.sin(), -a.cos()]]).unwrap()
}

/// Projector onto the +1 eigenspace of `spin(a)`: `(I + spin(a)) / 2`.
fn spin_up(a: f64) -> Projector {
    Projector::new((&ComplexMatrix::identity(2) + &spin(a)).scale(0.5)).unwrap()
}

fn singlet() -> PureState {
    PureState::from_real(&[0.0, 1.0, -1.0, 0.0]).unwrap()
}

fn singlet_config() -> ChshConfig {
    let id = Projector::identity(2);
    ChshConfig::new(
        spin_up(0.0).tensor(&id),
        spin_up(FRAC_PI_2).tensor(&id),
        id.tensor(&spin_up(FRAC_PI_4)),
        id.tensor(&spin_up(3.0 * FRAC_PI_4)),
        singlet(),
    )
    .unwrap()
}

#[test]
fn singlet_reaches_two_root_two() {
    let cfg = singlet_config();
    // Independent route: correlation operators spin(a) ⊗ spin(b).
    let angles_a = [0.0, FRAC_PI_2];
    let angles_b = [FRAC_PI_4, 3.0 * FRAC_PI_4];
    let mut direct = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let corr = spin(angles_a[i]).kron(&spin(angles_b[j]));
            let t = t_ij(&cfg.e[i], &cfg.f[j]).unwrap();
            assert!(t.matrix().max_abs_diff(&corr) < 1e-8);
            direct[i][j] = corr.quadratic_form(cfg.state.vector()).re;
            // singlet correlation -cos(a - b)
            assert!((direct[i][j] + (angles_a[i] - angles_b[j]).cos()).abs() < 1e-12);
        }
    }
    let value = chsh_value(&cfg).unwrap();
    assert!((value - 2.0 * SQRT_2).abs() < 1e-6, "value = {value}");
    let from_direct = (direct[0][0] - direct[0][1]).abs() + (direct[1][0] + direct[1][1]).abs();
    assert!((value - from_direct).abs() < 1e-10);
}

#[test]
fn singlet_admits_no_shared_backing() {
    let cfg = singlet_config();
    for e in &cfg.e {
        for f in &cfg.f {
            assert!(commutes(e, f, COMMUTE_TOL).unwrap());
        }
    }
    assert!(!commutes(&cfg.e[0], &cfg.e[1], COMMUTE_TOL).unwrap());
    assert!(matches!(
        PropositionQuadruple::from_projectors(&cfg.e, &cfg.f),
        Err(Error::NotCommuting {
            first: 0,
            second: 1,
            ..
        })
    ));
}

fn check_quadruple(q: &PropositionQuadruple, h: &PureState) -> Result<(), TestCaseError> {
    let fns = classical_chsh_functions(q, h).unwrap();
    prop_assert!(fns.identity_holds(), "identity values {:?}", fns.identity_values());
    let cfg = q.epsilon_config(h).unwrap();
    let quantum = cfg.correlations().unwrap();
    let classical = fns.integrals();
    for i in 0..2 {
        for j in 0..2 {
            prop_assert!((quantum[i][j] - classical[i][j]).abs() <= 1e-9);
        }
    }
    prop_assert!(chsh_value(&cfg).unwrap() <= 2.0 + 1e-9);
    prop_assert!(fns.chsh_value() <= 2.0 + 1e-9);
    prop_assert!(q.intersection_residual().unwrap() <= 1e-8);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn commuting_quadruples_obey_classical_bound(seed in any::<u64>(), n in 2usize..=6) {
        let mut r = rng(seed);
        let fam = random::commuting_family(&mut r, n, 4);
        let q = PropositionQuadruple::from_projectors(
            &[fam[0].clone(), fam[1].clone()],
            &[fam[2].clone(), fam[3].clone()],
        ).unwrap();
        check_quadruple(&q, &random::state(&mut r, n))?;
    }

    #[test]
    fn label_set_quadruples_obey_classical_bound(seed in any::<u64>(), n in 2usize..=8) {
        let mut r = rng(seed);
        let dec = Arc::new(eigh(&random::degenerate_hermitian(&mut r, n, 3), CLUSTER_TOL).unwrap());
        let mut prop = || proposition_from(dec.clone(), random::label_set(&mut r, 3));
        let q = PropositionQuadruple::new(prop(), prop(), prop(), prop()).unwrap();
        check_quadruple(&q, &random::state(&mut r, n))?;
    }

    #[test]
    fn boolean_homomorphism_implies_commutation(seed in any::<u64>(), n in 2usize..=6) {
        let mut r = rng(seed);
        let fam = random::commuting_family(&mut r, n, 2);
        let (a, b) = joint_propositions(&fam[0], &fam[1]).unwrap();
        prop_assert!(epsilon(&a).matrix().max_abs_diff(fam[0].matrix()) <= 1e-8);
        prop_assert!(epsilon(&b).matrix().max_abs_diff(fam[1].matrix()) <= 1e-8);
        let report = boolean_homomorphism_report(&a, &b).unwrap();
        prop_assert!(report.preserves_operations, "residual {:e}", report.max_residual);
        prop_assert!(report.commutes);
    }

    #[test]
    fn non_commuting_pairs_have_no_joint_propositions(seed in any::<u64>(), n in 2usize..=6) {
        let (e, f) = random::generic_pair(&mut rng(seed), n);
        prop_assume!(!commutes(&e, &f, COMMUTE_TOL).unwrap());
        let rejected = matches!(joint_propositions(&e, &f), Err(Error::NotCommuting { .. }));
        prop_assert!(rejected);
    }
}

#[test]
fn commuting_t_is_product_of_reflections() {
    let mut r = rng(12);
    for n in 2..=6 {
        let fam = random::commuting_family(&mut r, n, 2);
        let id = ComplexMatrix::identity(n);
        let re = &fam[0].matrix().scale(2.0) - &id;
        let rf = &fam[1].matrix().scale(2.0) - &id;
        let t = t_ij(&fam[0], &fam[1]).unwrap();
        assert!(t.matrix().max_abs_diff(&(&re * &rf)) < 1e-8);
    }
}

#[test]
fn phases_on_singlet_do_not_change_value() {
    let cfg = singlet_config();
    let phase = Complex64::from_polar(1.0, 1.234);
    let state = PureState::new(cfg.state.vector().iter().map(|z| z * phase).collect()).unwrap();
    let shifted = ChshConfig { state, ..cfg.clone() };
    assert!((chsh_value(&shifted).unwrap() - chsh_value(&cfg).unwrap()).abs() < 1e-12);
}
