//! Analysis step: the stochastic EnKF for hard data and the EnKF-SQ
//! per-member update for soft (out-of-range) data, plus the observation
//! preprocessing of each benchmark scheme.
//!
//! Both filters share one member update, `x_a = x_f + k_i (y_i - Hx_f)`,
//! with the scalar gain `k_i = cov / (var_obs + R_i)`. They differ only in
//! how `R_i` and the perturbed observation `y_i` are chosen for a soft
//! observation: a member whose observed forecast is at or below the
//! detection limit uses `sigma_ir^2`, a member above it uses
//! `(alpha sigma_or)^2`, and `y_i` is drawn from the two-piece Gaussian
//! centred on the limit.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensemble::{perturb_observation_hard, Ensemble};
use crate::error::{invalid, Error, Result};
use crate::localization::{nearest_observation, LocalizationConfig};
use crate::obs::{ClimatologyTable, ObsErrorModel, RawObservation, CLIMATOLOGY_VARIANCE_FLOOR};
use crate::rng::Streams;
use crate::two_piece::TwoPieceGaussian;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ObsKind {
    /// Quantitative value with Gaussian error std.
    Hard { value: f64, sigma: f64 },
    /// Only known to lie beyond the detection limit.
    Soft,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeLimitedObservation {
    pub cell: usize,
    pub kind: ObsKind,
    pub detection_limit: f64,
}

impl RangeLimitedObservation {
    pub fn hard(cell: usize, value: f64, sigma: f64, detection_limit: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(invalid("sigma_h", format!("must be > 0, got {sigma}")));
        }
        if !value.is_finite() {
            return Err(invalid("value", "must be finite"));
        }
        Ok(Self {
            cell,
            kind: ObsKind::Hard { value, sigma },
            detection_limit,
        })
    }

    pub fn soft(cell: usize, detection_limit: f64) -> Self {
        Self {
            cell,
            kind: ObsKind::Soft,
            detection_limit,
        }
    }

    pub fn is_soft(&self) -> bool {
        matches!(self.kind, ObsKind::Soft)
    }
}

/// Values at or below the limit are hard, values above it soft.
pub fn classify_observation(
    raw_value: f64,
    mu: f64,
    sigma_h: f64,
    cell: usize,
) -> Result<RangeLimitedObservation> {
    if raw_value <= mu {
        RangeLimitedObservation::hard(cell, raw_value, sigma_h, mu)
    } else {
        if !(sigma_h > 0.0) {
            return Err(invalid("sigma_h", format!("must be > 0, got {sigma_h}")));
        }
        Ok(RangeLimitedObservation::soft(cell, mu))
    }
}

/// Out-of-range likelihood parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqParams {
    sigma_ir: f64,
    sigma_or_base: Vec<f64>,
    alpha: f64,
}

impl SqParams {
    pub fn new(sigma_ir: f64, sigma_or_base: Vec<f64>, alpha: f64) -> Result<Self> {
        if !(sigma_ir > 0.0 && sigma_ir.is_finite()) {
            return Err(invalid("sigma_ir", format!("must be > 0, got {sigma_ir}")));
        }
        if let Some(bad) = sigma_or_base.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
            return Err(invalid("sigma_or", format!("must be > 0, got {bad}")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(invalid("alpha", format!("must be > 0, got {alpha}")));
        }
        Ok(Self {
            sigma_ir,
            sigma_or_base,
            alpha,
        })
    }

    pub fn uniform(sigma_ir: f64, sigma_or: f64, alpha: f64, n_cells: usize) -> Result<Self> {
        Self::new(sigma_ir, vec![sigma_or; n_cells], alpha)
    }

    /// `sigma_ir` is the hard-data error at the limit; `sigma_or` per cell is
    /// the climatological above-limit mean minus the limit. Cells without a
    /// climatology entry fall back to the pooled above-limit mean, and to
    /// `sigma_ir` when the truth never exceeded the limit anywhere.
    pub fn from_climatology(
        clim: &ClimatologyTable,
        mu: f64,
        errors: &ObsErrorModel,
        alpha: f64,
    ) -> Result<Self> {
        let sigma_ir = errors.std_at(mu)?;
        let fallback = clim
            .pooled_mean_above()
            .filter(|m| *m > mu)
            .map_or(sigma_ir, |m| m - mu);
        let base = (0..clim.n_cells())
            .map(|c| clim.get(c).map_or(fallback, |e| e.mean_above - mu))
            .collect();
        Self::new(sigma_ir, base, alpha)
    }

    pub fn sigma_ir(&self) -> f64 {
        self.sigma_ir
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn sigma_or_base(&self) -> &[f64] {
        &self.sigma_or_base
    }

    /// `alpha * sigma_or` at a cell.
    pub fn sigma_or(&self, cell: usize) -> f64 {
        self.alpha * self.sigma_or_base[cell]
    }

    pub fn likelihood(&self, cell: usize, mu: f64) -> Result<TwoPieceGaussian> {
        TwoPieceGaussian::new(mu, self.sigma_ir, self.sigma_or(cell))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    EnkfAll,
    EnkfSq,
    EnkfClim,
    EnkfIg,
    FreeRun,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::EnkfAll,
        Scheme::EnkfSq,
        Scheme::EnkfClim,
        Scheme::EnkfIg,
        Scheme::FreeRun,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::EnkfAll => "enkf-all",
            Scheme::EnkfSq => "enkf-sq",
            Scheme::EnkfClim => "enkf-clim",
            Scheme::EnkfIg => "enkf-ig",
            Scheme::FreeRun => "free-run",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.name() == norm || sc.name().replace('-', "") == norm)
            .ok_or_else(|| invalid("scheme", format!("unknown scheme `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SchemeOutput {
    pub observations: Vec<RangeLimitedObservation>,
    /// Out-of-range values dropped by EnKF-CLIM for lack of a climatology entry.
    pub dropped_no_climatology: usize,
}

/// Turns raw observations into what a scheme assimilates.
///
/// Hard data use the error std of the observed value.
pub fn apply_scheme(
    scheme: Scheme,
    raw: &[RawObservation],
    mu: f64,
    clim: &ClimatologyTable,
    errors: &ObsErrorModel,
) -> Result<SchemeOutput> {
    let mut out = SchemeOutput::default();
    if scheme == Scheme::FreeRun {
        return Ok(out);
    }
    for r in raw {
        let sigma = errors.std_at(r.value.max(0.0))?;
        if scheme == Scheme::EnkfAll {
            out.observations.push(RangeLimitedObservation::hard(
                r.cell,
                r.value,
                sigma,
                f64::INFINITY,
            )?);
            continue;
        }
        let o = classify_observation(r.value, mu, sigma, r.cell)?;
        if !o.is_soft() {
            out.observations.push(o);
            continue;
        }
        match scheme {
            Scheme::EnkfSq => out.observations.push(o),
            Scheme::EnkfIg => {}
            Scheme::EnkfClim => match clim.get(r.cell) {
                Some(e) => out.observations.push(RangeLimitedObservation::hard(
                    r.cell,
                    e.mean_above,
                    e.var_above.max(CLIMATOLOGY_VARIANCE_FLOOR).sqrt(),
                    mu,
                )?),
                None => out.dropped_no_climatology += 1,
            },
            Scheme::EnkfAll | Scheme::FreeRun => unreachable!(),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Filter {
    /// Stochastic EnKF; hard data only.
    Stochastic,
    /// EnKF-SQ; hard data as in the stochastic EnKF, soft data through the
    /// two-piece likelihood.
    SemiQualitative(SqParams),
}

impl Filter {
    /// Observation error variance used for one member.
    pub fn member_variance(
        &self,
        obs: &RangeLimitedObservation,
        observed_forecast: f64,
    ) -> Result<f64> {
        match (obs.kind, self) {
            (ObsKind::Hard { sigma, .. }, _) => Ok(sigma * sigma),
            (ObsKind::Soft, Filter::Stochastic) => {
                Err(Error::SoftObservationInStochasticFilter { cell: obs.cell })
            }
            (ObsKind::Soft, Filter::SemiQualitative(p)) => {
                let s = if observed_forecast <= obs.detection_limit {
                    p.sigma_ir()
                } else {
                    p.sigma_or(obs.cell)
                };
                Ok(s * s)
            }
        }
    }

    /// Perturbed observation for one member.
    pub fn perturb<R: Rng + ?Sized>(
        &self,
        obs: &RangeLimitedObservation,
        rng: &mut R,
    ) -> Result<f64> {
        match (obs.kind, self) {
            (ObsKind::Hard { value, sigma }, _) => Ok(perturb_observation_hard(value, sigma, rng)),
            (ObsKind::Soft, Filter::Stochastic) => {
                Err(Error::SoftObservationInStochasticFilter { cell: obs.cell })
            }
            (ObsKind::Soft, Filter::SemiQualitative(p)) => {
                Ok(p.likelihood(obs.cell, obs.detection_limit)?.sample(rng))
            }
        }
    }
}

/// New SIT and SIC of every member at one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalAnalysis {
    pub sit: Vec<f64>,
    pub sic: Vec<f64>,
}

/// Updates one cell from one observation given each member's perturbed
/// observation. Forecast covariances come from `prior` and are shared by all
/// members; only `R_i` varies.
pub fn update_cell(
    prior: &Ensemble,
    cell: usize,
    obs: &RangeLimitedObservation,
    filter: &Filter,
    perturbed: &[f64],
) -> Result<LocalAnalysis> {
    if perturbed.len() != prior.size() {
        return Err(Error::Shape(format!(
            "{} perturbed observations for {} members",
            perturbed.len(),
            prior.size()
        )));
    }
    let cov = prior.local_covariances(cell, obs.cell)?;
    let n = prior.size();
    let mut out = LocalAnalysis {
        sit: Vec::with_capacity(n),
        sic: Vec::with_capacity(n),
    };
    for (m, &y) in prior.members().iter().zip(perturbed) {
        let hx = m.sit[obs.cell];
        let r = filter.member_variance(obs, hx)?;
        let denom = cov.var_obs + r;
        if !(denom > 0.0) {
            return Err(Error::DegenerateInnovation { cell: obs.cell });
        }
        let innovation = y - hx;
        out.sit
            .push(m.sit[cell] + cov.cov_sit_obs / denom * innovation);
        out.sic
            .push(m.sic[cell] + cov.cov_sic_obs / denom * innovation);
    }
    Ok(out)
}

/// Stochastic EnKF update of one cell from a hard observation; member `i`
/// takes the `i`-th perturbation drawn from `rng`.
pub fn enkf_update_local<R: Rng + ?Sized>(
    prior: &Ensemble,
    cell: usize,
    obs: &RangeLimitedObservation,
    rng: &mut R,
) -> Result<LocalAnalysis> {
    let filter = Filter::Stochastic;
    let perturbed = (0..prior.size())
        .map(|_| filter.perturb(obs, rng))
        .collect::<Result<Vec<_>>>()?;
    update_cell(prior, cell, obs, &filter, &perturbed)
}

/// EnKF-SQ update of one cell; perturbations are drawn from `rng` in member
/// order, from the full two-piece distribution for a soft observation.
pub fn enkfsq_update_local<R: Rng + ?Sized>(
    prior: &Ensemble,
    cell: usize,
    obs: &RangeLimitedObservation,
    params: &SqParams,
    rng: &mut R,
) -> Result<LocalAnalysis> {
    let filter = Filter::SemiQualitative(params.clone());
    let perturbed = (0..prior.size())
        .map(|_| filter.perturb(obs, rng))
        .collect::<Result<Vec<_>>>()?;
    update_cell(prior, cell, obs, &filter, &perturbed)
}

/// Localized analysis of the whole grid.
///
/// Each member draws its perturbed observations, in list order, from its own
/// `(cycle, member)` substream; every cell is then updated from its single
/// nearest observation within the radius, and the result is clamped to
/// physical bounds.
pub fn analyze(
    prior: &Ensemble,
    observations: &[RangeLimitedObservation],
    filter: &Filter,
    loc: &LocalizationConfig,
    streams: &Streams,
    cycle: usize,
) -> Result<Ensemble> {
    let grid = *prior.grid();
    let n_cells = grid.n_cells();
    let mut by_cell: Vec<Option<usize>> = vec![None; n_cells];
    for (j, o) in observations.iter().enumerate() {
        if o.cell >= n_cells {
            return Err(Error::Shape(format!(
                "observation at cell {} outside grid",
                o.cell
            )));
        }
        if by_cell[o.cell].replace(j).is_some() {
            return Err(Error::Shape(format!("two observations at cell {}", o.cell)));
        }
    }
    let obs_cells: Vec<usize> = observations.iter().map(|o| o.cell).collect();

    let perturbed: Vec<Vec<f64>> = (0..prior.size())
        .into_par_iter()
        .map(|i| {
            let mut rng = streams.analysis(cycle, i);
            observations
                .iter()
                .map(|o| filter.perturb(o, &mut rng))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut posterior = prior.clone();
    let mut column = vec![0.0; prior.size()];
    for cell in 0..n_cells {
        let Some(obs_cell) = nearest_observation(cell, &obs_cells, loc, &grid) else {
            continue;
        };
        let j = by_cell[obs_cell].expect("observation cell is indexed");
        for (slot, p) in column.iter_mut().zip(&perturbed) {
            *slot = p[j];
        }
        let local = update_cell(prior, cell, &observations[j], filter, &column)?;
        for (i, m) in posterior.members_mut().iter_mut().enumerate() {
            m.sit[cell] = local.sit[i];
            m.sic[cell] = local.sic[i];
        }
    }
    for m in posterior.members_mut() {
        m.clamp_physical();
    }
    Ok(posterior)
}
