//! Surrogate seasonal sea-ice model on a periodic 1-D grid.
//!
//! One call advances the state by one day:
//!
//! 1. thermodynamic tendency `dh = g(day) (1 - h / H_MAX)` with
//!    `g(day) = growth_amplitude * cos(2 pi day / season_length)`,
//! 2. semi-Lagrangian upwind shift by the advection speed (linear
//!    interpolation from the departure point, periodic),
//! 3. concentration relaxes toward 1 while ice grows and toward 0 on open
//!    water, at `SIC_RELAXATION` per day,
//! 4. ice thinner than 10 cm either melts out to open water or, while
//!    growing, is set to the 10 cm new-ice thickness.
//!
//! Ensemble members multiply both the growth rate and the advection speed
//! by `1 + pert` per cell, where `pert` is an AR(1) process in time driven
//! by moving-average-smoothed Gaussian noise in space.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::ensemble::{GridSpec, StateField, MIN_ICE_THICKNESS};
use crate::error::{invalid, Result};

/// Thickness at which thermodynamic growth saturates (m).
pub const H_MAX: f64 = 4.0;

/// Relaxation rate of concentration per day.
pub const SIC_RELAXATION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForcingParams {
    /// Peak growth rate (m/day); negative half of the cycle melts.
    pub growth_amplitude: f64,
    /// Period of the seasonal cycle (days).
    pub season_length: f64,
    /// Drift speed in cells per day (positive moves ice toward higher indices).
    pub advection_speed: f64,
    /// Stationary std of the multiplicative forcing perturbation.
    pub perturbation_std: f64,
    /// e-folding time of the perturbation (days).
    pub time_decorrelation: f64,
    /// Width of the spatial smoothing window (km).
    pub space_decorrelation_km: f64,
}

impl Default for ForcingParams {
    fn default() -> Self {
        Self {
            growth_amplitude: 0.02,
            season_length: 365.0,
            advection_speed: 0.3,
            perturbation_std: 0.3,
            time_decorrelation: 2.0,
            space_decorrelation_km: 250.0,
        }
    }
}

impl ForcingParams {
    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("growth_amplitude", self.growth_amplitude),
            ("perturbation_std", self.perturbation_std),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(name, format!("must be >= 0, got {v}")));
            }
        }
        let positive = [
            ("season_length", self.season_length),
            ("time_decorrelation", self.time_decorrelation),
            ("space_decorrelation_km", self.space_decorrelation_km),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(name, format!("must be > 0, got {v}")));
            }
        }
        if !self.advection_speed.is_finite() {
            return Err(invalid("advection_speed", "must be finite"));
        }
        Ok(())
    }

    /// Unperturbed growth rate on a given day.
    pub fn growth_rate(&self, day: i64) -> f64 {
        self.growth_amplitude * (2.0 * PI * day as f64 / self.season_length).cos()
    }

    /// AR(1) coefficient for a one-day step.
    pub fn ar1_coefficient(&self) -> f64 {
        (-1.0 / self.time_decorrelation).exp()
    }

    /// Moving-average window length in cells, at least 1 and at most the grid.
    pub fn smoothing_window(&self, grid: &GridSpec) -> usize {
        let w = (self.space_decorrelation_km / grid.cell_spacing_km()).round() as usize;
        w.clamp(1, grid.n_cells())
    }
}

/// Per-member forcing perturbation carried between daily steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationState {
    pub field: Vec<f64>,
}

impl PerturbationState {
    pub fn zero(n_cells: usize) -> Self {
        Self {
            field: vec![0.0; n_cells],
        }
    }

    /// Draw from the stationary distribution of the AR(1) process.
    pub fn stationary<R: Rng + ?Sized>(grid: &GridSpec, p: &ForcingParams, rng: &mut R) -> Self {
        let eps = smoothed_noise(grid.n_cells(), p.smoothing_window(grid), rng);
        Self {
            field: eps.into_iter().map(|e| p.perturbation_std * e).collect(),
        }
    }

    /// One AR(1) step: `a pert + sqrt(1 - a^2) std eps`.
    pub fn evolve<R: Rng + ?Sized>(&self, grid: &GridSpec, p: &ForcingParams, rng: &mut R) -> Self {
        let a = p.ar1_coefficient();
        let b = (1.0 - a * a).sqrt() * p.perturbation_std;
        let eps = smoothed_noise(grid.n_cells(), p.smoothing_window(grid), rng);
        Self {
            field: self
                .field
                .iter()
                .zip(eps)
                .map(|(x, e)| a * x + b * e)
                .collect(),
        }
    }
}

/// Unit-variance Gaussian noise, spatially correlated by a periodic moving
/// average over `window` cells.
pub fn smoothed_noise<R: Rng + ?Sized>(n_cells: usize, window: usize, rng: &mut R) -> Vec<f64> {
    let white: Vec<f64> = (0..n_cells).map(|_| rng.sample(StandardNormal)).collect();
    let window = window.clamp(1, n_cells);
    let scale = 1.0 / (window as f64).sqrt();
    let half = window / 2;
    (0..n_cells)
        .map(|c| {
            let start = c + n_cells - half;
            (0..window)
                .map(|k| white[(start + k) % n_cells])
                .sum::<f64>()
                * scale
        })
        .collect()
}

fn step_with_factors(
    s: &StateField,
    day: i64,
    p: &ForcingParams,
    factors: Option<&[f64]>,
) -> StateField {
    let n = s.len();
    let g0 = p.growth_rate(day);
    let factor = |c: usize| factors.map_or(1.0, |f| (1.0 + f[c]).max(0.0));

    let growth: Vec<f64> = (0..n).map(|c| g0 * factor(c)).collect();
    let thick: Vec<f64> = (0..n)
        .map(|c| s.sit[c] + growth[c] * (1.0 - s.sit[c] / H_MAX))
        .collect();

    let mut out = StateField::open_water(n);
    for c in 0..n {
        let departure = c as f64 - p.advection_speed * factor(c);
        let base = departure.floor();
        let frac = departure - base;
        let i0 = (base as i64).rem_euclid(n as i64) as usize;
        let i1 = (i0 + 1) % n;
        let h = (1.0 - frac) * thick[i0] + frac * thick[i1];
        let mut a = (1.0 - frac) * s.sic[i0] + frac * s.sic[i1];

        let growing = growth[c] > 0.0;
        if growing {
            a += SIC_RELAXATION * (1.0 - a);
        } else if h < MIN_ICE_THICKNESS {
            a -= SIC_RELAXATION * a;
        }

        let (h, a) = if h < MIN_ICE_THICKNESS {
            if growing {
                (MIN_ICE_THICKNESS, a)
            } else {
                (0.0, 0.0)
            }
        } else {
            (h, a)
        };
        out.sit[c] = h;
        out.sic[c] = a.clamp(0.0, 1.0);
    }
    out
}

/// Advance the truth one day with unperturbed forcing.
pub fn step_truth(s: &StateField, day: i64, p: &ForcingParams) -> StateField {
    step_with_factors(s, day, p, None)
}

/// Advance an ensemble member one day with its own forcing perturbation,
/// then evolve the perturbation.
pub fn step_member<R: Rng + ?Sized>(
    s: &StateField,
    day: i64,
    p: &ForcingParams,
    pert: &PerturbationState,
    grid: &GridSpec,
    rng: &mut R,
) -> (StateField, PerturbationState) {
    let next = step_with_factors(s, day, p, Some(&pert.field));
    (next, pert.evolve(grid, p, rng))
}
