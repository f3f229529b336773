//! Verification scores and distribution diagnostics: RMSE of the ensemble
//! mean, average ensemble spread, thickness-binned bias, RMSE and skewness,
//! ice volume.

use serde::{Deserialize, Serialize};

use crate::ensemble::{Ensemble, StateField};
use crate::error::{invalid, Error, Result};
use crate::filters::RangeLimitedObservation;
use crate::obs::RawObservation;

pub fn rmse(estimate: &[f64], truth: &[f64]) -> f64 {
    assert_eq!(estimate.len(), truth.len(), "rmse: length mismatch");
    if estimate.is_empty() {
        return 0.0;
    }
    let ss: f64 = estimate
        .iter()
        .zip(truth)
        .map(|(e, t)| (e - t) * (e - t))
        .sum();
    (ss / estimate.len() as f64).sqrt()
}

/// Square root of the spatial mean of per-cell SIT ensemble variance.
pub fn aes(ens: &Ensemble) -> f64 {
    let var = ens.sit_variance();
    (var.iter().sum::<f64>() / var.len() as f64).sqrt()
}

/// Thickness bin edges; bin `b` holds `edges[b] < x <= edges[b + 1]`, and the
/// first bin also holds its lower edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinSpec {
    edges: Vec<f64>,
}

impl Default for BinSpec {
    /// 0, 0.10, then 25 cm steps to 3 m, then one open-ended bin.
    fn default() -> Self {
        let mut edges = vec![0.0, 0.10];
        edges.extend((1..=12).map(|k| 0.25 * k as f64));
        edges.push(f64::INFINITY);
        Self { edges }
    }
}

impl BinSpec {
    pub fn new(edges: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 {
            return Err(invalid("bin_edges", "need at least two edges"));
        }
        if edges.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid("bin_edges", "edges must be strictly increasing"));
        }
        Ok(Self { edges })
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn n_bins(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn bounds(&self, bin: usize) -> (f64, f64) {
        (self.edges[bin], self.edges[bin + 1])
    }

    pub fn bin_of(&self, x: f64) -> Option<usize> {
        if x.is_nan() || x < self.edges[0] {
            return None;
        }
        if x == self.edges[0] {
            return Some(0);
        }
        // first edge >= x closes the bin
        let k = self.edges.partition_point(|&e| e < x);
        (k < self.edges.len()).then(|| k - 1)
    }
}

/// Per-bin values; `None` marks a bin without samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinnedValues {
    pub values: Vec<Option<f64>>,
    pub counts: Vec<usize>,
    /// Count-weighted mean over populated bins.
    pub weighted_total: Option<f64>,
}

/// Running per-bin sums, so bins can be pooled over cycles and seeds.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BinAccumulator {
    sums: Vec<f64>,
    sum_sq: Vec<f64>,
    counts: Vec<usize>,
}

impl BinAccumulator {
    pub fn new(n_bins: usize) -> Self {
        Self {
            sums: vec![0.0; n_bins],
            sum_sq: vec![0.0; n_bins],
            counts: vec![0; n_bins],
        }
    }

    pub fn add(&mut self, bin: usize, x: f64) {
        self.sums[bin] += x;
        self.sum_sq[bin] += x * x;
        self.counts[bin] += 1;
    }

    pub fn merge(&mut self, other: &BinAccumulator) {
        for b in 0..self.sums.len() {
            self.sums[b] += other.sums[b];
            self.sum_sq[b] += other.sum_sq[b];
            self.counts[b] += other.counts[b];
        }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn mean(&self) -> BinnedValues {
        self.finish(
            |s, _, n| s / n as f64,
            |acc| {
                let n: usize = acc.counts.iter().sum();
                (n > 0).then(|| acc.sums.iter().sum::<f64>() / n as f64)
            },
        )
    }

    /// Square root of the mean of squares per bin.
    pub fn rms(&self) -> BinnedValues {
        self.finish(
            |_, q, n| (q / n as f64).sqrt(),
            |acc| {
                let n: usize = acc.counts.iter().sum();
                (n > 0).then(|| (acc.sum_sq.iter().sum::<f64>() / n as f64).sqrt())
            },
        )
    }

    fn finish(
        &self,
        per_bin: impl Fn(f64, f64, usize) -> f64,
        total: impl Fn(&Self) -> Option<f64>,
    ) -> BinnedValues {
        BinnedValues {
            values: (0..self.sums.len())
                .map(|b| {
                    (self.counts[b] > 0)
                        .then(|| per_bin(self.sums[b], self.sum_sq[b], self.counts[b]))
                })
                .collect(),
            counts: self.counts.clone(),
            weighted_total: total(self),
        }
    }
}

/// Adds `estimate - truth` at every observed cell to the bin of the
/// observation value.
pub fn accumulate_by_observation(
    acc: &mut BinAccumulator,
    estimate: &[f64],
    truth: &[f64],
    obs: &[RawObservation],
    bins: &BinSpec,
) {
    for o in obs {
        if let Some(b) = bins.bin_of(o.value) {
            acc.add(b, estimate[o.cell] - truth[o.cell]);
        }
    }
}

/// Mean of `post_mean - truth` over cells grouped by observation value.
pub fn conditional_bias(
    post_mean: &[f64],
    truth: &[f64],
    obs: &[RawObservation],
    bins: &BinSpec,
) -> BinnedValues {
    let mut acc = BinAccumulator::new(bins.n_bins());
    accumulate_by_observation(&mut acc, post_mean, truth, obs, bins);
    acc.mean()
}

/// Moment skewness `m3 / m2^(3/2)`; `None` when the sample has no spread.
pub fn moment_skewness(xs: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return None;
    }
    let mean = xs.iter().sum::<f64>() / n;
    let (mut m2, mut m3) = (0.0, 0.0);
    for x in xs {
        let d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    // relative threshold: a constant sample leaves only rounding noise in m2
    let scale = xs.iter().map(|x| x * x).sum::<f64>() / n;
    if !(m2 > 1e-24 * scale.max(f64::MIN_POSITIVE)) {
        return None;
    }
    Some(m3 / m2.powf(1.5))
}

/// Adds per-cell SIT ensemble skewness to the bin of the truth value.
pub fn accumulate_skewness(
    acc: &mut BinAccumulator,
    ens: &Ensemble,
    truth: &[f64],
    bins: &BinSpec,
) {
    for (cell, &t) in truth.iter().enumerate() {
        let Some(b) = bins.bin_of(t) else { continue };
        if let Some(g1) = moment_skewness(&ens.sit_at(cell)) {
            acc.add(b, g1);
        }
    }
}

/// Average per-cell skewness over cells grouped by truth value; cells with
/// zero spread are skipped.
pub fn conditional_skewness(ens: &Ensemble, truth: &[f64], bins: &BinSpec) -> BinnedValues {
    let mut acc = BinAccumulator::new(bins.n_bins());
    accumulate_skewness(&mut acc, ens, truth, bins);
    acc.mean()
}

/// Sum of thickness times concentration times cell area.
pub fn ice_volume(s: &StateField, cell_area: f64) -> f64 {
    s.sit.iter().zip(&s.sic).map(|(h, c)| h * c).sum::<f64>() * cell_area
}

pub fn percent_soft(obs: &[RangeLimitedObservation]) -> Result<f64> {
    if obs.is_empty() {
        return Err(Error::EmptyObservations);
    }
    let soft = obs.iter().filter(|o| o.is_soft()).count();
    Ok(100.0 * soft as f64 / obs.len() as f64)
}
