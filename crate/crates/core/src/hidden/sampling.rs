use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::observable::ClassicalObservable;
use super::quantile::quantile_cells;
use super::WEIGHT_FLOOR;
use crate::error::Result;
use crate::exec::Execution;
use crate::quantum::{prob, BorelSet, PureState};

/// Samples per partition. Partition `i` draws from the ChaCha8 stream `i`
/// of the caller's seed, so counts do not depend on how partitions are
/// scheduled.
pub const PARTITION_SIZE: usize = 1 << 14;

/// Outcome of drawing hidden states uniformly from one fiber.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenSampleReport {
    pub state: PureState,
    /// Label for the observable; left empty by the sampler for callers to fill.
    pub observable: String,
    pub sample_count: usize,
    pub seed: u64,
    /// Distinct outcome values, increasing.
    pub outcomes: Vec<f64>,
    pub counts: Vec<u64>,
    pub empirical: Vec<f64>,
    /// `pi(T, [h], {v})` for each outcome, from the spectral measure.
    pub predicted: Vec<f64>,
    pub max_abs_deviation: f64,
    pub chi_square: f64,
}

impl HiddenSampleReport {
    /// Per-atom allowance `4 sqrt(p (1 - p) / n)`.
    pub fn deviation_budgets(&self) -> Vec<f64> {
        let n = self.sample_count as f64;
        self.predicted
            .iter()
            .map(|&p| 4.0 * (p * (1.0 - p) / n).max(0.0).sqrt())
            .collect()
    }

    pub fn within_budget(&self) -> bool {
        self.empirical
            .iter()
            .zip(&self.predicted)
            .zip(self.deviation_budgets())
            .all(|((e, p), b)| (e - p).abs() <= b)
    }

    /// Degrees of freedom of the chi-square statistic.
    pub fn degrees_of_freedom(&self) -> usize {
        self.outcomes.len().saturating_sub(1)
    }
}

pub fn sample(obs: &ClassicalObservable, h: &PureState, n: usize, seed: u64) -> Result<HiddenSampleReport> {
    sample_with(obs, h, n, seed, Execution::default())
}

/// Draws `n` fiber points `t ~ U(0,1)`, evaluates the observable and
/// tabulates the outcomes against the quantum prediction.
pub fn sample_with(
    obs: &ClassicalObservable,
    h: &PureState,
    n: usize,
    seed: u64,
    exec: Execution,
) -> Result<HiddenSampleReport> {
    let (cells, _) = quantile_cells(obs.backing(), h, WEIGHT_FLOOR)?;
    let step = obs.step(h)?;
    let outcomes = step.values().to_vec();

    let partitions = n.div_ceil(PARTITION_SIZE);
    let partial = exec.map_indices(partitions, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let draws = PARTITION_SIZE.min(n - i * PARTITION_SIZE);
        let mut counts = vec![0u64; cells.len()];
        for _ in 0..draws {
            let t = loop {
                let t: f64 = rng.random();
                if t > 0.0 {
                    break t;
                }
            };
            counts[cells.cell_index(t)] += 1;
        }
        counts
    });
    let mut cell_counts = vec![0u64; cells.len()];
    for counts in partial {
        for (acc, c) in cell_counts.iter_mut().zip(counts) {
            *acc += c;
        }
    }

    // Map cells of the bare quantile onto outcomes of g ∘ f.
    let mut counts = vec![0u64; outcomes.len()];
    for (k, &v) in cells.values().iter().enumerate() {
        let image = obs.post().iter().fold(v, |acc, g| g.eval(acc));
        let idx = outcomes.partition_point(|&o| o < image);
        counts[idx] += cell_counts[k];
    }

    let total = n as f64;
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / total).collect();
    let predicted = outcomes
        .iter()
        .map(|&v| prob(obs.backing(), h, obs.event(&BorelSet::points(&[v])).borel()))
        .collect::<Result<Vec<f64>>>()?;
    let max_abs_deviation = empirical
        .iter()
        .zip(&predicted)
        .map(|(e, p)| (e - p).abs())
        .fold(0.0, f64::max);
    let chi_square = counts
        .iter()
        .zip(&predicted)
        .filter(|(_, &p)| p > 0.0)
        .map(|(&c, &p)| {
            let expected = total * p;
            (c as f64 - expected).powi(2) / expected
        })
        .sum();

    Ok(HiddenSampleReport {
        state: h.clone(),
        observable: String::new(),
        sample_count: n,
        seed,
        outcomes,
        counts,
        empirical,
        predicted,
        max_abs_deviation,
        chi_square,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hidden::compose;
    use crate::linalg::HermitianOperator;
    use crate::quantum::PiecewiseFn;

    fn obs(diag: &[f64]) -> ClassicalObservable {
        ClassicalObservable::from_operator(&HermitianOperator::from_diag(diag)).unwrap()
    }

    #[test]
    fn single_eigenvalue_is_exact() {
        let o = obs(&[4.0, 4.0]);
        let h = PureState::from_real(&[0.3, 0.4]).unwrap();
        let r = sample(&o, &h, 1000, 9).unwrap();
        assert_eq!(r.outcomes, vec![4.0]);
        assert_eq!(r.empirical, vec![1.0]);
        assert_eq!(r.predicted, vec![1.0]);
        assert_eq!(r.max_abs_deviation, 0.0);
        assert!(r.within_budget());
    }

    #[test]
    fn pauli_z_on_plus_is_balanced() {
        let r = sample(
            &obs(&[1.0, -1.0]),
            &PureState::from_real(&[1.0, 1.0]).unwrap(),
            100_000,
            42,
        )
        .unwrap();
        assert!((r.empirical[1] - 0.5).abs() <= 0.01);
        assert!(r.within_budget());
        assert_eq!(r.counts.iter().sum::<u64>(), 100_000);
    }

    #[test]
    fn diag_123_equal_weights() {
        let r = sample(
            &obs(&[1.0, 2.0, 3.0]),
            &PureState::from_real(&[1.0, 1.0, 1.0]).unwrap(),
            100_000,
            7,
        )
        .unwrap();
        for f in &r.empirical {
            assert!((f - 1.0 / 3.0).abs() <= 0.01);
        }
        let total: f64 = r.empirical.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic_and_mode_independent() {
        let o = obs(&[-2.0, 0.5, 3.0]);
        let h = PureState::from_real(&[1.0, -2.0, 0.5]).unwrap();
        let n = 3 * PARTITION_SIZE + 17;
        let a = sample_with(&o, &h, n, 11, Execution::Sequential).unwrap();
        let b = sample_with(&o, &h, n, 11, Execution::Parallel).unwrap();
        let c = sample_with(&o, &h, n, 11, Execution::Sequential).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        let d = sample_with(&o, &h, n, 12, Execution::Sequential).unwrap();
        assert_ne!(a.counts, d.counts);
    }

    #[test]
    fn composed_observable_counts_merge() {
        let o = compose(&PiecewiseFn::square(), &obs(&[-1.0, 1.0, 2.0]));
        let h = PureState::from_real(&[1.0, 1.0, 1.0]).unwrap();
        let r = sample(&o, &h, 30_000, 3).unwrap();
        assert_eq!(r.outcomes, vec![1.0, 4.0]);
        assert!((r.predicted[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!(r.within_budget());
    }
}
