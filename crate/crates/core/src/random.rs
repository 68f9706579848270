//! Seeded generators for random operators, states, projectors, Borel sets
//! and piecewise functions. Used by the property tests, the acceptance
//! suite and the benches.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{inner, norm, ComplexMatrix, HermitianOperator, Projector};
use crate::quantum::{BorelSet, Interval, Piece, PiecewiseFn, PureState};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| gaussian(rng)).collect()
}

/// GUE-style Hermitian matrix `(A + A^dagger) / 2` with Gaussian `A`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianOperator {
    let a = ComplexMatrix::from_row_major(n, gaussian_vector(rng, n * n)).expect("square");
    HermitianOperator::new((&a + &a.adjoint()).scale(0.5)).expect("Hermitian by construction")
}

/// Orthonormal basis (columns of a Haar-like unitary) by Gram-Schmidt.
pub fn orthonormal_basis<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while basis.len() < n {
        let mut v = gaussian_vector(rng, n);
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &v);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
        }
        let nv = norm(&v);
        if nv > 1e-6 {
            basis.push(v.into_iter().map(|z| z / nv).collect());
        }
    }
    basis
}

/// `U diag(spectrum) U^dagger` for a random unitary `U`; repeated entries
/// give degenerate eigenspaces in random orientation.
pub fn hermitian_with_spectrum<R: Rng + ?Sized>(rng: &mut R, spectrum: &[f64]) -> HermitianOperator {
    let n = spectrum.len();
    let basis = orthonormal_basis(rng, n);
    let mut m = ComplexMatrix::zeros(n);
    for (v, &lambda) in basis.iter().zip(spectrum) {
        m = &m + &ComplexMatrix::outer(v, v).scale(lambda);
    }
    HermitianOperator::with_tolerance(m, 1e-8).expect("Hermitian by construction")
}

/// Random operator with small integer eigenvalues, so that degeneracies are
/// common.
pub fn degenerate_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, levels: i32) -> HermitianOperator {
    let spectrum: Vec<f64> = (0..n).map(|_| rng.random_range(-levels..=levels) as f64).collect();
    hermitian_with_spectrum(rng, &spectrum)
}

pub fn state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> PureState {
    loop {
        if let Ok(s) = PureState::new(gaussian_vector(rng, n)) {
            return s;
        }
    }
}

/// Random projector of the given rank.
pub fn projector<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> Projector {
    let basis = orthonormal_basis(rng, n);
    span(n, &basis[..rank])
}

fn span(n: usize, vectors: &[Vec<Complex64>]) -> Projector {
    let mut m = ComplexMatrix::zeros(n);
    for v in vectors {
        m = &m + &ComplexMatrix::outer(v, v);
    }
    Projector::with_tolerance(m, 1e-8).expect("projector by construction")
}

/// `k` mutually commuting projectors: random subsets of one random
/// orthonormal basis.
pub fn commuting_family<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<Projector> {
    let basis = orthonormal_basis(rng, n);
    (0..k)
        .map(|_| {
            let chosen: Vec<Vec<Complex64>> = basis.iter().filter(|_| rng.random::<bool>()).cloned().collect();
            span(n, &chosen)
        })
        .collect()
}

/// Two independent random projectors of nontrivial rank. They fail to
/// commute with probability one; callers needing a guarantee should check.
pub fn generic_pair<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (Projector, Projector) {
    let r1 = rng.random_range(1..n);
    let r2 = rng.random_range(1..n);
    (projector(rng, n, r1), projector(rng, n, r2))
}

/// Union of up to three random intervals with endpoints in `[-span, span]`.
pub fn borel_set<R: Rng + ?Sized>(rng: &mut R, span: f64) -> BorelSet {
    let count = rng.random_range(0..=3);
    BorelSet::from_intervals((0..count).map(|_| {
        let a = rng.random_range(-span..span);
        let b = rng.random_range(-span..span);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let lo = if rng.random_bool(0.15) { f64::NEG_INFINITY } else { lo };
        let hi = if rng.random_bool(0.15) { f64::INFINITY } else { hi };
        Interval::new(lo, rng.random(), hi, rng.random())
    }))
}

/// Random Borel set over integer labels `{-levels, ..., levels}`: a union of
/// half-integer-bounded intervals and single points.
pub fn label_set<R: Rng + ?Sized>(rng: &mut R, levels: i32) -> BorelSet {
    let count = rng.random_range(0..=3);
    BorelSet::from_intervals((0..count).map(|_| {
        if rng.random_bool(0.5) {
            Interval::point(rng.random_range(-levels..=levels) as f64)
        } else {
            let a = rng.random_range(-levels..=levels) as f64 - 0.5;
            let w = rng.random_range(0..=levels) as f64 + 1.0;
            Interval::new(a, rng.random(), a + w, rng.random())
        }
    }))
}

/// Random piecewise function with up to three breakpoints, each kept more
/// than `1e-6` away from every point in `avoid`. Pieces are constant,
/// affine or quadratic with small integer coefficients, so non-injective
/// functions are frequent.
pub fn piecewise_fn<R: Rng + ?Sized>(rng: &mut R, span: f64, avoid: &[f64]) -> PiecewiseFn {
    let count = rng.random_range(0..=3);
    let mut breakpoints: Vec<f64> = Vec::with_capacity(count);
    while breakpoints.len() < count {
        let x: f64 = rng.random_range(-span..span);
        let clear = avoid.iter().chain(&breakpoints).all(|a| (a - x).abs() > 1e-6);
        if clear {
            breakpoints.push(x);
        }
    }
    breakpoints.sort_by(f64::total_cmp);
    let pieces = (0..=count)
        .map(|_| {
            let c = rng.random_range(-2..=2) as f64;
            match rng.random_range(0..3) {
                0 => Piece::constant(c),
                1 => Piece::affine(rng.random_range(-2..=2) as f64, c),
                _ => Piece::quadratic(
                    rng.random_range(-1..=1) as f64 * 0.5,
                    rng.random_range(-2..=2) as f64,
                    c,
                ),
            }
        })
        .collect();
    let points = (0..count).map(|_| rng.random_range(-2..=2) as f64).collect();
    PiecewiseFn::new(breakpoints, pieces, points).expect("valid by construction")
}
