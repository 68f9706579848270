use super::WEIGHT_FLOOR;
use crate::error::{Error, Result};
use crate::linalg::SpectralDecomposition;
use crate::quantum::{spectral_weights, PureState};

/// A nondecreasing step function on `(0,1)`: value `values[k-1]` on the cell
/// `(cuts[k-1], cuts[k]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileStep {
    cuts: Vec<f64>,
    values: Vec<f64>,
}

impl QuantileStep {
    /// Checks `0 = c_0 < ... < c_m = 1` and strictly increasing values.
    pub fn new(cuts: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidStep("at least one value is required".into()));
        }
        if cuts.len() != values.len() + 1 {
            return Err(Error::InvalidStep(format!(
                "{} values need {} cuts, found {}",
                values.len(),
                values.len() + 1,
                cuts.len()
            )));
        }
        if cuts[0] != 0.0 || *cuts.last().unwrap() != 1.0 {
            return Err(Error::InvalidStep("cuts must run from 0 to 1".into()));
        }
        if cuts.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidStep("cuts must be strictly increasing".into()));
        }
        if values.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidStep("values must be strictly increasing".into()));
        }
        Ok(Self { cuts, values })
    }

    /// Builds the step of a discrete distribution given as `(value, weight)`
    /// atoms. Equal values merge, zero weights vanish, and the last cut is
    /// pinned to exactly 1.
    pub(crate) fn from_atoms(mut atoms: Vec<(f64, f64)>) -> Self {
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (v, w) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += w,
                _ => merged.push((v, w)),
            }
        }
        merged.retain(|&(_, w)| w > 0.0);
        let mut cuts = Vec::with_capacity(merged.len() + 1);
        cuts.push(0.0);
        let mut acc = 0.0;
        for &(_, w) in &merged {
            acc += w;
            cuts.push(acc);
        }
        *cuts.last_mut().unwrap() = 1.0;
        Self {
            cuts,
            values: merged.into_iter().map(|(v, _)| v).collect(),
        }
    }

    pub fn cuts(&self) -> &[f64] {
        &self.cuts
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Lebesgue measure of the cell carrying `values[k]`.
    pub fn weight(&self, k: usize) -> f64 {
        self.cuts[k + 1] - self.cuts[k]
    }

    pub fn weights(&self) -> Vec<f64> {
        self.cuts.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Index `k` of the cell `(c_k, c_{k+1}]` containing `t`, i.e. the
    /// smallest `k` with `c_{k+1} >= t`.
    pub fn cell_index(&self, t: f64) -> usize {
        self.cuts[1..].partition_point(|&c| c < t).min(self.values.len() - 1)
    }

    /// `f(t) = min { v_k : c_k >= t }`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::OutOfDomain(t));
        }
        Ok(self.values[self.cell_index(t)])
    }

    /// `sum_k g(v_k) (c_k - c_{k-1})`.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &v)| g(v) * self.weight(k))
            .sum()
    }
}

/// Quantile of the spectral distribution of `T` at `h`.
pub fn quantile_function(dec: &SpectralDecomposition, h: &PureState) -> Result<QuantileStep> {
    quantile_function_with_floor(dec, h, WEIGHT_FLOOR)
}

pub fn quantile_function_with_floor(
    dec: &SpectralDecomposition,
    h: &PureState,
    weight_floor: f64,
) -> Result<QuantileStep> {
    Ok(quantile_cells(dec, h, weight_floor)?.0)
}

/// The quantile step together with the eigenvalue index behind each cell.
pub(crate) fn quantile_cells(
    dec: &SpectralDecomposition,
    h: &PureState,
    weight_floor: f64,
) -> Result<(QuantileStep, Vec<usize>)> {
    let weights = spectral_weights(dec, h)?;
    let kept: Vec<usize> = (0..weights.len()).filter(|&k| weights[k] > weight_floor).collect();
    let mut cuts = Vec::with_capacity(kept.len() + 1);
    cuts.push(0.0);
    let mut acc = 0.0;
    for &k in &kept {
        acc += weights[k];
        cuts.push(acc);
    }
    *cuts.last_mut().unwrap() = 1.0;
    let values = kept.iter().map(|&k| dec.eigenvalues()[k]).collect();
    Ok((QuantileStep { cuts, values }, kept))
}
