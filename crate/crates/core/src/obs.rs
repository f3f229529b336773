//! Synthetic thickness observations and the out-of-range climatology.

use std::io::{BufRead, Write};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::ensemble::StateField;
use crate::error::{invalid, Error, Result};
use crate::output::fmt_f64;

/// Observation error std growing linearly with thickness: `slope t + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObsErrorModel {
    slope: f64,
    intercept: f64,
}

impl Default for ObsErrorModel {
    fn default() -> Self {
        Self {
            slope: 0.06,
            intercept: 0.05,
        }
    }
}

impl ObsErrorModel {
    pub fn new(slope: f64, intercept: f64) -> Result<Self> {
        if !(slope >= 0.0 && slope.is_finite()) {
            return Err(invalid(
                "obs_error_slope",
                format!("must be >= 0, got {slope}"),
            ));
        }
        if !(intercept > 0.0 && intercept.is_finite()) {
            return Err(invalid(
                "obs_error_intercept",
                format!("must be > 0, got {intercept}"),
            ));
        }
        Ok(Self { slope, intercept })
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn std_at(&self, thickness: f64) -> Result<f64> {
        if !(thickness >= 0.0) {
            return Err(invalid(
                "thickness",
                format!("must be >= 0, got {thickness}"),
            ));
        }
        Ok(self.slope * thickness + self.intercept)
    }
}

/// Uncensored observation at a grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawObservation {
    pub cell: usize,
    pub value: f64,
}

/// Perturbs the truth thickness of every ice-covered cell with Gaussian
/// noise of the model's std; open water is not observed. Values are not
/// censored here.
pub fn generate_observations<R: Rng + ?Sized>(
    truth: &StateField,
    model: &ObsErrorModel,
    rng: &mut R,
) -> Vec<RawObservation> {
    let mut out = Vec::new();
    for (cell, &t) in truth.sit.iter().enumerate() {
        if !(t > 0.0) {
            continue;
        }
        let z: f64 = rng.sample(StandardNormal);
        let sigma = model.slope * t + model.intercept;
        out.push(RawObservation {
            cell,
            value: (t + sigma * z).max(0.0),
        });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClimatologyEntry {
    pub mean_above: f64,
    pub var_above: f64,
    pub count: usize,
}

/// Per-cell mean and variance of truth thickness strictly above the
/// detection limit. Cells with fewer than two such samples are unpopulated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClimatologyTable {
    detection_limit: f64,
    entries: Vec<Option<ClimatologyEntry>>,
    pooled_mean_above: Option<f64>,
}

/// Variance floor applied when a climatological value is assimilated.
pub const CLIMATOLOGY_VARIANCE_FLOOR: f64 = 0.01 * 0.01;

impl ClimatologyTable {
    pub fn build(series: &[StateField], mu: f64) -> Self {
        let n_cells = series.first().map_or(0, |s| s.len());
        let mut pooled = (0.0, 0usize);
        let entries = (0..n_cells)
            .map(|c| {
                let above: Vec<f64> = series
                    .iter()
                    .map(|s| s.sit[c])
                    .filter(|&h| h > mu)
                    .collect();
                pooled.0 += above.iter().sum::<f64>();
                pooled.1 += above.len();
                if above.len() < 2 {
                    return None;
                }
                let n = above.len() as f64;
                let mean = above.iter().sum::<f64>() / n;
                let var = above.iter().map(|h| (h - mean).powi(2)).sum::<f64>() / (n - 1.0);
                Some(ClimatologyEntry {
                    mean_above: mean,
                    var_above: var,
                    count: above.len(),
                })
            })
            .collect();
        Self {
            detection_limit: mu,
            entries,
            pooled_mean_above: (pooled.1 > 0).then(|| pooled.0 / pooled.1 as f64),
        }
    }

    pub fn detection_limit(&self) -> f64 {
        self.detection_limit
    }

    pub fn n_cells(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, cell: usize) -> Option<&ClimatologyEntry> {
        self.entries.get(cell).and_then(|e| e.as_ref())
    }

    /// Mean of all above-limit samples over every cell and time.
    pub fn pooled_mean_above(&self) -> Option<f64> {
        self.pooled_mean_above
    }

    pub fn populated(&self) -> usize {
        self.entries.iter().filter(|e| e.is_some()).count()
    }

    /// `cell,mean_above,var_above,count`; unpopulated cells have empty fields
    /// and the count of samples that were above the limit is not kept for them.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "cell,mean_above,var_above,count")?;
        for (c, e) in self.entries.iter().enumerate() {
            match e {
                Some(e) => writeln!(
                    w,
                    "{c},{},{},{}",
                    fmt_f64(e.mean_above),
                    fmt_f64(e.var_above),
                    e.count
                )?,
                None => writeln!(w, "{c},,,0")?,
            }
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R, detection_limit: f64) -> Result<Self> {
        let mut entries = Vec::new();
        let mut pooled = (0.0, 0usize);
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if i == 0 || line.trim().is_empty() {
                continue;
            }
            let bad = |reason: &str| Error::Config {
                line: i + 1,
                reason: reason.to_string(),
            };
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(bad("expected 4 columns"));
            }
            let cell: usize = fields[0].parse().map_err(|_| bad("bad cell"))?;
            if cell != entries.len() {
                return Err(bad("cells must be listed in order"));
            }
            if fields[1].is_empty() {
                entries.push(None);
                continue;
            }
            let mean_above: f64 = fields[1].parse().map_err(|_| bad("bad mean"))?;
            let var_above: f64 = fields[2].parse().map_err(|_| bad("bad variance"))?;
            let count: usize = fields[3].parse().map_err(|_| bad("bad count"))?;
            pooled.0 += mean_above * count as f64;
            pooled.1 += count;
            entries.push(Some(ClimatologyEntry {
                mean_above,
                var_above,
                count,
            }));
        }
        Ok(Self {
            detection_limit,
            entries,
            pooled_mean_above: (pooled.1 > 0).then(|| pooled.0 / pooled.1 as f64),
        })
    }
}
