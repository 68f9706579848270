use hv_core::linalg::{eigh, CLUSTER_TOL};
use hv_core::quantum::{cdf, expectation, functional_calculus, prob, spectral_projector, BorelSet, Interval, SNAP_TOL};
use hv_core::random;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn probability_is_additive(seed in any::<u64>(), n in 2usize..=8) {
        let mut r = rng(seed);
        let dec = eigh(&random::hermitian(&mut r, n), CLUSTER_TOL).unwrap();
        let h = random::state(&mut r, n);
        let b1 = random::borel_set(&mut r, 4.0);
        let b2 = random::borel_set(&mut r, 4.0).difference(&b1);
        let union = b1.union(&b2);
        let lhs = prob(&dec, &h, &union).unwrap();
        let rhs = prob(&dec, &h, &b1).unwrap() + prob(&dec, &h, &b2).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10);
        let total = prob(&dec, &h, &b1).unwrap() + prob(&dec, &h, &b1.complement()).unwrap();
        prop_assert!((total - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn cdf_is_monotone_and_normalized(seed in any::<u64>(), n in 2usize..=8) {
        let mut r = rng(seed);
        let dec = eigh(&random::hermitian(&mut r, n), CLUSTER_TOL).unwrap();
        let h = random::state(&mut r, n);
        let lo = dec.eigenvalues()[0];
        let hi = *dec.eigenvalues().last().unwrap();
        prop_assert_eq!(cdf(&dec, &h, lo - 1e-6).unwrap(), 0.0);
        prop_assert_eq!(cdf(&dec, &h, hi).unwrap(), 1.0);
        prop_assert_eq!(cdf(&dec, &h, hi + 10.0).unwrap(), 1.0);
        let mut prev = 0.0;
        for k in 0..=200 {
            let u = lo - 0.5 + (hi - lo + 1.0) * k as f64 / 200.0;
            let f = cdf(&dec, &h, u).unwrap();
            prop_assert!(prev <= f + 1e-12);
            prev = f;
        }
    }

    #[test]
    fn expectation_matches_quadratic_form(seed in any::<u64>(), n in 2usize..=8) {
        let mut r = rng(seed);
        let op = random::hermitian(&mut r, n);
        let dec = eigh(&op, CLUSTER_TOL).unwrap();
        let h = random::state(&mut r, n);
        let direct = op.quadratic_form(h.vector());
        prop_assert!((expectation(&dec, &h).unwrap() - direct).abs() <= 1e-10);
    }

    // E_B^{g(T)} = E_{g^{-1}(B)}^T, with B's endpoints kept away from g(spectrum).
    #[test]
    fn functional_calculus_pulls_back_spectral_measure(seed in any::<u64>(), n in 2usize..=6) {
        let mut r = rng(seed);
        let op = if r.random_bool(0.5) {
            random::hermitian(&mut r, n)
        } else {
            random::degenerate_hermitian(&mut r, n, 2)
        };
        let dec = eigh(&op, CLUSTER_TOL).unwrap();
        let g = random::piecewise_fn(&mut r, 3.0, dec.eigenvalues());
        let images: Vec<f64> = dec.eigenvalues().iter().map(|&x| g.eval(x)).collect();
        let b = loop {
            let b = random::borel_set(&mut r, 4.0);
            let clear = b.endpoints().iter().all(|e| images.iter().all(|y| (e - y).abs() > 10.0 * SNAP_TOL));
            if clear { break b; }
        };
        let gt = functional_calculus(&dec, &g);
        let lhs = spectral_projector(&eigh(&gt, CLUSTER_TOL).unwrap(), &b);
        let rhs = spectral_projector(&dec, &g.preimage(&b));
        prop_assert!(lhs.matrix().max_abs_diff(rhs.matrix()) <= 1e-8);
    }
}

#[test]
fn eigenstate_is_certain() {
    let mut r = rng(5);
    for n in 2..=8 {
        let dec = eigh(&random::hermitian(&mut r, n), CLUSTER_TOL).unwrap();
        let k = r.random_range(0..dec.len());
        let lambda = dec.eigenvalues()[k];
        // a unit vector in the range of P_k
        let p = &dec.projectors()[k];
        let col = (0..n)
            .map(|i| p.matrix()[(i, 0)] + p.matrix()[(i, 1)])
            .collect::<Vec<_>>();
        let h = hv_core::quantum::PureState::new(p.matrix().apply(&col)).unwrap();
        let b = BorelSet::interval(Interval::closed(lambda - 0.1 * f64::EPSILON, lambda));
        assert!((prob(&dec, &h, &b).unwrap() - 1.0).abs() < 1e-10);
    }
}
