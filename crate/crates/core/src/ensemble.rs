//! Ensemble container, moments and the local forecast covariances used by
//! the analysis.
//!
//! The state at each grid cell is a thickness (SIT, meters) and a
//! concentration (SIC, fraction). Members are stored one `StateField` each;
//! the forecast covariance matrix is never assembled, only the entries the
//! scalar local analysis needs.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Thickness below which ice is not allowed to persist in the model.
pub const MIN_ICE_THICKNESS: f64 = 0.10;

/// One-dimensional periodic grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    n_cells: usize,
    cell_spacing_km: f64,
}

impl GridSpec {
    pub fn new(n_cells: usize, cell_spacing_km: f64) -> Result<Self> {
        if n_cells == 0 {
            return Err(invalid("n_cells", "must be at least 1"));
        }
        if !(cell_spacing_km > 0.0 && cell_spacing_km.is_finite()) {
            return Err(invalid(
                "cell_spacing_km",
                format!("must be > 0, got {cell_spacing_km}"),
            ));
        }
        Ok(Self {
            n_cells,
            cell_spacing_km,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn cell_spacing_km(&self) -> f64 {
        self.cell_spacing_km
    }

    pub fn cell_area_km2(&self) -> f64 {
        self.cell_spacing_km * self.cell_spacing_km
    }

    /// Number of cells between `a` and `b` going the short way round.
    pub fn ring_distance(&self, a: usize, b: usize) -> usize {
        let d = a.abs_diff(b) % self.n_cells;
        d.min(self.n_cells - d)
    }

    pub fn distance_km(&self, a: usize, b: usize) -> f64 {
        self.ring_distance(a, b) as f64 * self.cell_spacing_km
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateField {
    pub sit: Vec<f64>,
    pub sic: Vec<f64>,
}

impl StateField {
    pub fn new(sit: Vec<f64>, sic: Vec<f64>) -> Result<Self> {
        if sit.len() != sic.len() {
            return Err(Error::Shape(format!(
                "sit has {} cells but sic has {}",
                sit.len(),
                sic.len()
            )));
        }
        Ok(Self { sit, sic })
    }

    pub fn open_water(n_cells: usize) -> Self {
        Self {
            sit: vec![0.0; n_cells],
            sic: vec![0.0; n_cells],
        }
    }

    pub fn len(&self) -> usize {
        self.sit.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sit.is_empty()
    }

    /// SIT nonnegative and SIC within [0, 1] everywhere.
    pub fn is_physical(&self) -> bool {
        self.sit.iter().all(|&h| h >= 0.0) && self.sic.iter().all(|&c| (0.0..=1.0).contains(&c))
    }

    /// Physical state that also honors the model's minimum ice thickness.
    pub fn satisfies_min_thickness(&self) -> bool {
        self.sit.iter().all(|&h| h == 0.0 || h >= MIN_ICE_THICKNESS)
    }

    pub fn is_finite(&self) -> bool {
        self.sit.iter().chain(&self.sic).all(|v| v.is_finite())
    }

    /// Post-analysis clamp: SIC into [0, 1], negative SIT to zero.
    ///
    /// Thin ice between 0 and the model minimum is left untouched; the model
    /// resolves it on its next step.
    pub fn clamp_physical(&mut self) {
        for h in &mut self.sit {
            if *h < 0.0 {
                *h = 0.0;
            }
        }
        for c in &mut self.sic {
            *c = c.clamp(0.0, 1.0);
        }
    }
}

/// Sample covariances needed for a scalar update of one cell from SIT
/// observed at another cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalCovariances {
    /// cov(SIT at cell, SIT at observed cell)
    pub cov_sit_obs: f64,
    /// cov(SIC at cell, SIT at observed cell)
    pub cov_sic_obs: f64,
    /// var(SIT at observed cell)
    pub var_obs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    grid: GridSpec,
    members: Vec<StateField>,
}

impl Ensemble {
    pub fn new(grid: GridSpec, members: Vec<StateField>) -> Result<Self> {
        if members.len() < 2 {
            return Err(invalid(
                "ensemble_size",
                format!("need at least 2 members, got {}", members.len()),
            ));
        }
        if let Some((i, m)) = members
            .iter()
            .enumerate()
            .find(|(_, m)| m.len() != grid.n_cells() || m.sic.len() != grid.n_cells())
        {
            return Err(Error::Shape(format!(
                "member {i} has {} cells, grid has {}",
                m.len(),
                grid.n_cells()
            )));
        }
        Ok(Self { grid, members })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[StateField] {
        &self.members
    }

    pub fn members_mut(&mut self) -> &mut [StateField] {
        &mut self.members
    }

    pub fn into_members(self) -> Vec<StateField> {
        self.members
    }

    pub fn mean(&self) -> StateField {
        let n = self.grid.n_cells();
        let inv = 1.0 / self.size() as f64;
        let mut out = StateField::open_water(n);
        for m in &self.members {
            for c in 0..n {
                out.sit[c] += m.sit[c];
                out.sic[c] += m.sic[c];
            }
        }
        for c in 0..n {
            out.sit[c] *= inv;
            out.sic[c] *= inv;
        }
        out
    }

    /// Member minus ensemble mean, one field per member.
    pub fn anomalies(&self) -> Vec<StateField> {
        let mean = self.mean();
        self.members
            .iter()
            .map(|m| StateField {
                sit: m.sit.iter().zip(&mean.sit).map(|(x, xm)| x - xm).collect(),
                sic: m.sic.iter().zip(&mean.sic).map(|(x, xm)| x - xm).collect(),
            })
            .collect()
    }

    /// SIT values of every member at one cell.
    pub fn sit_at(&self, cell: usize) -> Vec<f64> {
        self.members.iter().map(|m| m.sit[cell]).collect()
    }

    /// Per-cell SIT sample variance (1/(N-1)).
    pub fn sit_variance(&self) -> Vec<f64> {
        let mean = self.mean();
        let denom = (self.size() - 1) as f64;
        (0..self.grid.n_cells())
            .map(|c| {
                self.members
                    .iter()
                    .map(|m| (m.sit[c] - mean.sit[c]).powi(2))
                    .sum::<f64>()
                    / denom
            })
            .collect()
    }

    pub fn local_covariances(&self, cell: usize, obs_cell: usize) -> Result<LocalCovariances> {
        let n = self.grid.n_cells();
        if cell >= n || obs_cell >= n {
            return Err(Error::Shape(format!(
                "cell {cell} / observed cell {obs_cell} outside grid of {n}"
            )));
        }
        let size = self.size();
        let inv = 1.0 / size as f64;
        let (mut h, mut c, mut o) = (0.0, 0.0, 0.0);
        for m in &self.members {
            h += m.sit[cell];
            c += m.sic[cell];
            o += m.sit[obs_cell];
        }
        let (h, c, o) = (h * inv, c * inv, o * inv);
        let (mut cov_h, mut cov_c, mut var_o) = (0.0, 0.0, 0.0);
        for m in &self.members {
            let d_obs = m.sit[obs_cell] - o;
            cov_h += (m.sit[cell] - h) * d_obs;
            cov_c += (m.sic[cell] - c) * d_obs;
            var_o += d_obs * d_obs;
        }
        let denom = (size - 1) as f64;
        Ok(LocalCovariances {
            cov_sit_obs: cov_h / denom,
            cov_sic_obs: cov_c / denom,
            var_obs: var_o / denom,
        })
    }
}

/// Perturbed hard observation `y + sigma_h Z`.
pub fn perturb_observation_hard<R: Rng + ?Sized>(y: f64, sigma_h: f64, rng: &mut R) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    y + sigma_h * z
}
