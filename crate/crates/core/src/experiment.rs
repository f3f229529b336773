//! Twin experiments: truth run, synthetic observations, ensemble cycling
//! and the sensitivity sweeps built on top of them.
//!
//! All randomness comes from [`Streams`] keyed by the config seed, so runs
//! that differ only in scheme, alpha or analysis mode share the truth, the
//! observation noise, the initial ensemble and the forcing perturbations.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{AnalysisMode, ExperimentConfig};
use crate::diagnostics::{
    accumulate_by_observation, accumulate_skewness, aes, ice_volume, percent_soft, rmse,
    BinAccumulator, BinSpec,
};
use crate::ensemble::{Ensemble, GridSpec, StateField, MIN_ICE_THICKNESS};
use crate::error::{Error, Result};
use crate::filters::{
    analyze, apply_scheme, classify_observation, Filter, RangeLimitedObservation, Scheme, SqParams,
};
use crate::model::{smoothed_noise, step_member, step_truth, ForcingParams, PerturbationState};
use crate::obs::{generate_observations, ClimatologyTable, RawObservation};
use crate::rng::Streams;

/// Truth states from the first truth day; `states[k]` is the state after `k`
/// daily steps.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthRun {
    pub start_day: i64,
    pub states: Vec<StateField>,
}

impl TruthRun {
    pub fn day_of(&self, step: usize) -> i64 {
        self.start_day + step as i64
    }
}

/// Smooth two-harmonic thickness profile every member and the truth start from.
pub fn base_profile(cfg: &ExperimentConfig) -> StateField {
    let n = cfg.n_cells;
    let sit: Vec<f64> = (0..n)
        .map(|c| {
            let x = 2.0 * PI * c as f64 / n as f64;
            cfg.init_mean_thickness + cfg.init_amplitude * (x.cos() + 0.4 * (2.0 * x).sin()) / 1.4
        })
        .collect();
    let sic = vec![cfg.init_concentration; n];
    floor_thin_ice(StateField { sit, sic })
}

fn floor_thin_ice(mut s: StateField) -> StateField {
    for c in 0..s.len() {
        if s.sit[c] < MIN_ICE_THICKNESS {
            s.sit[c] = 0.0;
            s.sic[c] = 0.0;
        }
    }
    s
}

/// Base profile plus a smooth additive thickness perturbation.
fn perturbed_start<R: Rng + ?Sized>(cfg: &ExperimentConfig, rng: &mut R) -> StateField {
    let grid = cfg.grid();
    let mut s = base_profile(cfg);
    let noise = smoothed_noise(grid.n_cells(), cfg.forcing.smoothing_window(&grid), rng);
    let base_sic = cfg.init_concentration;
    for c in 0..s.len() {
        s.sit[c] = (s.sit[c] + cfg.init_perturbation_std * noise[c]).max(0.0);
        s.sic[c] = base_sic;
    }
    floor_thin_ice(s)
}

/// Integrates the truth from its perturbed start with unperturbed forcing,
/// for `max(total_days, climatology_days)` days.
pub fn generate_truth(cfg: &ExperimentConfig) -> TruthRun {
    let streams = Streams::new(cfg.seed);
    let mut state = perturbed_start(cfg, &mut streams.truth_init());
    let len = cfg.total_days().max(cfg.climatology_days);
    let mut states = Vec::with_capacity(len + 1);
    states.push(state.clone());
    for k in 0..len {
        state = step_truth(&state, cfg.start_day + k as i64, &cfg.forcing);
        states.push(state.clone());
    }
    TruthRun {
        start_day: cfg.start_day,
        states,
    }
}

struct Member {
    state: StateField,
    pert: PerturbationState,
    rng: ChaCha8Rng,
}

fn initial_members(cfg: &ExperimentConfig, streams: &Streams) -> Vec<Member> {
    let grid = cfg.grid();
    (0..cfg.ensemble_size)
        .map(|i| {
            let state = perturbed_start(cfg, &mut streams.member_init(i));
            let mut rng = streams.member_forcing(i);
            let pert = PerturbationState::stationary(&grid, &cfg.forcing, &mut rng);
            Member { state, pert, rng }
        })
        .collect()
}

fn propagate(members: &mut [Member], day: i64, forcing: &ForcingParams, grid: &GridSpec) {
    members.par_iter_mut().for_each(|m| {
        let (s, p) = step_member(&m.state, day, forcing, &m.pert, grid, &mut m.rng);
        m.state = s;
        m.pert = p;
    });
}

fn as_ensemble(grid: GridSpec, members: &[Member]) -> Ensemble {
    Ensemble::new(grid, members.iter().map(|m| m.state.clone()).collect())
        .expect("validated ensemble size")
}

fn volume_row(day: i64, phase: Phase, truth: &StateField, ens: &Ensemble, area: f64) -> VolumeRow {
    let v: Vec<f64> = ens.members().iter().map(|m| ice_volume(m, area)).collect();
    VolumeRow {
        day,
        phase,
        truth: ice_volume(truth, area),
        ensemble: v.iter().sum::<f64>() / v.len() as f64,
        member_min: v.iter().copied().fold(f64::INFINITY, f64::min),
        member_max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    Forecast,
    Analysis,
}

impl Phase {
    pub fn name(&self) -> &'static str {
        match self {
            Phase::Forecast => "forecast",
            Phase::Analysis => "analysis",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeRow {
    pub day: i64,
    pub phase: Phase,
    pub truth: f64,
    /// Mean over members of the member volumes.
    pub ensemble: f64,
    pub member_min: f64,
    pub member_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleRecord {
    pub cycle: usize,
    pub day: i64,
    pub prior_rmse: f64,
    pub prior_aes: f64,
    pub posterior_rmse: f64,
    pub posterior_aes: f64,
    /// Share of out-of-range values among the raw observations.
    pub percent_soft: Option<f64>,
    pub n_observations: usize,
    pub n_assimilated: usize,
    pub n_soft_assimilated: usize,
    pub dropped_no_climatology: usize,
}

/// Per-cell SIT summary of one analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleSnapshot {
    pub cycle: usize,
    pub day: i64,
    pub raw: Vec<RawObservation>,
    pub assimilated: Vec<RangeLimitedObservation>,
    pub truth: Vec<f64>,
    pub prior_mean: Vec<f64>,
    pub prior_std: Vec<f64>,
    pub posterior_mean: Vec<f64>,
    pub posterior_std: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    pub cycles: Vec<CycleRecord>,
    pub bins: BinSpec,
    /// Prior `mean - truth`, binned by observation value, pooled over cycles.
    pub prior_error_by_obs: BinAccumulator,
    /// Posterior `mean - truth`, binned by observation value, pooled over cycles.
    pub posterior_error_by_obs: BinAccumulator,
    /// Posterior skewness at the last analysis, binned by truth.
    pub final_skewness: BinAccumulator,
    pub volume: Vec<VolumeRow>,
    /// Every posterior (and forecast) state satisfied SIT >= 0, SIC in [0, 1].
    pub all_states_physical: bool,
}

impl DiagnosticsReport {
    fn average(&self, f: impl Fn(&CycleRecord) -> f64) -> f64 {
        self.cycles.iter().map(f).sum::<f64>() / self.cycles.len() as f64
    }

    pub fn mean_prior_rmse(&self) -> f64 {
        self.average(|c| c.prior_rmse)
    }

    pub fn mean_prior_aes(&self) -> f64 {
        self.average(|c| c.prior_aes)
    }

    pub fn mean_posterior_rmse(&self) -> f64 {
        self.average(|c| c.posterior_rmse)
    }

    pub fn mean_posterior_aes(&self) -> f64 {
        self.average(|c| c.posterior_aes)
    }

    /// Ensemble-minus-truth volume on every day (analysis rows included).
    pub fn volume_difference(&self) -> Vec<f64> {
        self.volume.iter().map(|v| v.ensemble - v.truth).collect()
    }
}

/// Everything one twin experiment produced.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub config: ExperimentConfig,
    pub truth: TruthRun,
    pub climatology: ClimatologyTable,
    pub snapshots: Vec<CycleSnapshot>,
    pub report: DiagnosticsReport,
}

fn sit_std(ens: &Ensemble) -> Vec<f64> {
    ens.sit_variance().into_iter().map(f64::sqrt).collect()
}

/// Runs one twin experiment with `cfg.scheme` in `cfg.mode`.
pub fn run_twin_experiment(cfg: &ExperimentConfig) -> Result<RunArtifacts> {
    cfg.validate()?;
    let grid = cfg.grid();
    let area = grid.cell_area_km2();
    let loc = cfg.localization();
    let errors = cfg.obs_errors();
    let streams = Streams::new(cfg.seed);
    let mu = cfg.detection_limit;
    let bins = BinSpec::default();

    let truth = generate_truth(cfg);
    let climatology = ClimatologyTable::build(&truth.states, mu);
    let filter = match cfg.scheme {
        Scheme::EnkfSq => Filter::SemiQualitative(SqParams::from_climatology(
            &climatology,
            mu,
            &errors,
            cfg.alpha,
        )?),
        _ => Filter::Stochastic,
    };

    let mut members = initial_members(cfg, &streams);
    let mut step = 0usize;
    for _ in 0..cfg.spinup_days {
        propagate(&mut members, truth.day_of(step), &cfg.forcing, &grid);
        step += 1;
    }

    let mut report = DiagnosticsReport {
        cycles: Vec::with_capacity(cfg.n_cycles),
        bins: bins.clone(),
        prior_error_by_obs: BinAccumulator::new(bins.n_bins()),
        posterior_error_by_obs: BinAccumulator::new(bins.n_bins()),
        final_skewness: BinAccumulator::new(bins.n_bins()),
        volume: Vec::new(),
        all_states_physical: true,
    };
    let mut snapshots = Vec::with_capacity(cfg.n_cycles);

    for cycle in 0..cfg.n_cycles {
        for _ in 0..cfg.days_per_cycle {
            propagate(&mut members, truth.day_of(step), &cfg.forcing, &grid);
            step += 1;
            let ens = as_ensemble(grid, &members);
            report.volume.push(volume_row(
                truth.day_of(step),
                Phase::Forecast,
                &truth.states[step],
                &ens,
                area,
            ));
            report.all_states_physical &= ens.members().iter().all(StateField::is_physical);
        }
        let day = truth.day_of(step);
        let truth_now = &truth.states[step];
        let prior = as_ensemble(grid, &members);
        let prior_mean = prior.mean();

        let raw = generate_observations(truth_now, &errors, &mut streams.observations(cycle));
        let classified = raw
            .iter()
            .map(|r| classify_observation(r.value, mu, errors.std_at(r.value)?, r.cell))
            .collect::<Result<Vec<_>>>()?;
        let scheme_obs = apply_scheme(cfg.scheme, &raw, mu, &climatology, &errors)?;

        let posterior = if cfg.scheme == Scheme::FreeRun {
            prior.clone()
        } else {
            analyze(
                &prior,
                &scheme_obs.observations,
                &filter,
                &loc,
                &streams,
                cycle,
            )?
        };
        if !posterior.members().iter().all(StateField::is_finite) {
            return Err(Error::NonFinite { cycle });
        }
        report.all_states_physical &= posterior.members().iter().all(StateField::is_physical);
        let posterior_mean = posterior.mean();

        accumulate_by_observation(
            &mut report.prior_error_by_obs,
            &prior_mean.sit,
            &truth_now.sit,
            &raw,
            &bins,
        );
        accumulate_by_observation(
            &mut report.posterior_error_by_obs,
            &posterior_mean.sit,
            &truth_now.sit,
            &raw,
            &bins,
        );
        if cycle + 1 == cfg.n_cycles {
            accumulate_skewness(
                &mut report.final_skewness,
                &posterior,
                &truth_now.sit,
                &bins,
            );
        }

        report.cycles.push(CycleRecord {
            cycle,
            day,
            prior_rmse: rmse(&prior_mean.sit, &truth_now.sit),
            prior_aes: aes(&prior),
            posterior_rmse: rmse(&posterior_mean.sit, &truth_now.sit),
            posterior_aes: aes(&posterior),
            percent_soft: percent_soft(&classified).ok(),
            n_observations: raw.len(),
            n_assimilated: scheme_obs.observations.len(),
            n_soft_assimilated: scheme_obs
                .observations
                .iter()
                .filter(|o| o.is_soft())
                .count(),
            dropped_no_climatology: scheme_obs.dropped_no_climatology,
        });
        report.volume.push(volume_row(
            day,
            Phase::Analysis,
            truth_now,
            &posterior,
            area,
        ));
        snapshots.push(CycleSnapshot {
            cycle,
            day,
            raw,
            assimilated: scheme_obs.observations,
            truth: truth_now.sit.clone(),
            prior_mean: prior_mean.sit,
            prior_std: sit_std(&prior),
            posterior_mean: posterior_mean.sit,
            posterior_std: sit_std(&posterior),
        });

        if cfg.mode == AnalysisMode::Cycling {
            for (m, s) in members.iter_mut().zip(posterior.into_members()) {
                m.state = s;
            }
        }
    }

    Ok(RunArtifacts {
        config: cfg.clone(),
        truth,
        climatology,
        snapshots,
        report,
    })
}

/// `count` consecutive seeds starting at `first`.
pub fn seed_range(first: u64, count: usize) -> Vec<u64> {
    (0..count as u64).map(|k| first.wrapping_add(k)).collect()
}

/// One row of a sensitivity sweep, averaged over seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub posterior_rmse: f64,
    pub posterior_aes: f64,
    pub prior_rmse: f64,
    pub prior_aes: f64,
    pub per_seed_posterior_rmse: Vec<f64>,
}

fn sweep(
    base: &ExperimentConfig,
    values: &[f64],
    seeds: &[u64],
    apply: impl Fn(&mut ExperimentConfig, f64) + Sync,
) -> Result<Vec<SweepRow>> {
    let jobs: Vec<(usize, u64)> = (0..values.len())
        .flat_map(|v| seeds.iter().map(move |&s| (v, s)))
        .collect();
    let results: Vec<DiagnosticsReport> = jobs
        .par_iter()
        .map(|&(v, s)| {
            let mut cfg = base.clone();
            cfg.seed = s;
            cfg.scheme = Scheme::EnkfSq;
            cfg.mode = AnalysisMode::SingleCycle;
            apply(&mut cfg, values[v]);
            run_twin_experiment(&cfg).map(|r| r.report)
        })
        .collect::<Result<_>>()?;
    let n = seeds.len() as f64;
    Ok(values
        .iter()
        .enumerate()
        .map(|(v, &value)| {
            let reports = &results[v * seeds.len()..(v + 1) * seeds.len()];
            let avg = |f: fn(&DiagnosticsReport) -> f64| reports.iter().map(f).sum::<f64>() / n;
            SweepRow {
                value,
                posterior_rmse: avg(DiagnosticsReport::mean_posterior_rmse),
                posterior_aes: avg(DiagnosticsReport::mean_posterior_aes),
                prior_rmse: avg(DiagnosticsReport::mean_prior_rmse),
                prior_aes: avg(DiagnosticsReport::mean_prior_aes),
                per_seed_posterior_rmse: reports.iter().map(|r| r.mean_posterior_rmse()).collect(),
            }
        })
        .collect())
}

/// Default multipliers 0.1, 0.2, ..., 3.0.
pub fn default_alphas() -> Vec<f64> {
    (1..=30).map(|k| k as f64 / 10.0).collect()
}

pub fn default_ensemble_sizes() -> Vec<usize> {
    vec![2, 5, 10, 20, 30, 50, 99]
}

/// Single-cycle EnKF-SQ runs for each `alpha`, time- and seed-averaged.
pub fn run_alpha_sweep(
    cfg: &ExperimentConfig,
    alphas: &[f64],
    seeds: &[u64],
) -> Result<Vec<SweepRow>> {
    sweep(cfg, alphas, seeds, |c, a| c.alpha = a)
}

/// Single-cycle EnKF-SQ runs for each ensemble size, time- and seed-averaged.
pub fn run_ensemble_size_sweep(
    cfg: &ExperimentConfig,
    sizes: &[usize],
    seeds: &[u64],
) -> Result<Vec<SweepRow>> {
    let values: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    sweep(cfg, &values, seeds, |c, n| c.ensemble_size = n as usize)
}

/// Runs of every scheme for every seed, sharing truth, observations,
/// initial ensemble and forcing within a seed.
#[derive(Debug, Clone)]
pub struct SchemeComparison {
    pub seeds: Vec<u64>,
    pub schemes: Vec<Scheme>,
    /// `runs[s][k]` is scheme `schemes[s]` with seed `seeds[k]`.
    pub runs: Vec<Vec<RunArtifacts>>,
}

impl SchemeComparison {
    pub fn runs_for(&self, scheme: Scheme) -> Option<&[RunArtifacts]> {
        self.schemes
            .iter()
            .position(|&s| s == scheme)
            .map(|i| self.runs[i].as_slice())
    }

    /// Seed average of a per-run scalar.
    pub fn seed_mean(&self, scheme: Scheme, f: impl Fn(&RunArtifacts) -> f64) -> Option<f64> {
        let runs = self.runs_for(scheme)?;
        Some(runs.iter().map(f).sum::<f64>() / runs.len() as f64)
    }

    /// Pools a per-run bin accumulator over seeds.
    pub fn pooled_bins(
        &self,
        scheme: Scheme,
        f: impl Fn(&DiagnosticsReport) -> &BinAccumulator,
    ) -> Option<BinAccumulator> {
        let runs = self.runs_for(scheme)?;
        let mut acc = BinAccumulator::new(runs[0].report.bins.n_bins());
        for r in runs {
            acc.merge(f(&r.report));
        }
        Some(acc)
    }

    /// Seed average, bin by bin, of per-run bin means (bins empty in a run
    /// are skipped for that run).
    pub fn seed_averaged_bin_means(
        &self,
        scheme: Scheme,
        f: impl Fn(&DiagnosticsReport) -> &BinAccumulator,
    ) -> Option<Vec<Option<f64>>> {
        let runs = self.runs_for(scheme)?;
        let n_bins = runs[0].report.bins.n_bins();
        let per_run: Vec<Vec<Option<f64>>> =
            runs.iter().map(|r| f(&r.report).mean().values).collect();
        Some(
            (0..n_bins)
                .map(|b| {
                    let vals: Vec<f64> = per_run.iter().filter_map(|v| v[b]).collect();
                    (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
                })
                .collect(),
        )
    }

    /// Seed-averaged lowest and highest member-minus-truth volume per day.
    pub fn mean_volume_envelope(&self, scheme: Scheme) -> Option<Vec<(f64, f64)>> {
        let runs = self.runs_for(scheme)?;
        let len = runs[0].report.volume.len();
        let mut acc = vec![(0.0, 0.0); len];
        for r in runs {
            for (a, v) in acc.iter_mut().zip(&r.report.volume) {
                a.0 += v.member_min - v.truth;
                a.1 += v.member_max - v.truth;
            }
        }
        let n = runs.len() as f64;
        Some(acc.into_iter().map(|(lo, hi)| (lo / n, hi / n)).collect())
    }

    /// Seed-averaged ensemble-minus-truth volume series.
    pub fn mean_volume_difference(&self, scheme: Scheme) -> Option<Vec<f64>> {
        let runs = self.runs_for(scheme)?;
        let len = runs[0].report.volume.len();
        let mut acc = vec![0.0; len];
        for r in runs {
            for (a, d) in acc.iter_mut().zip(r.report.volume_difference()) {
                *a += d;
            }
        }
        Some(acc.into_iter().map(|a| a / runs.len() as f64).collect())
    }
}

pub fn compare_schemes(
    cfg: &ExperimentConfig,
    schemes: &[Scheme],
    seeds: &[u64],
) -> Result<SchemeComparison> {
    let jobs: Vec<(Scheme, u64)> = schemes
        .iter()
        .flat_map(|&sc| seeds.iter().map(move |&s| (sc, s)))
        .collect();
    let mut flat: Vec<RunArtifacts> = jobs
        .par_iter()
        .map(|&(scheme, seed)| {
            let mut c = cfg.clone();
            c.scheme = scheme;
            c.seed = seed;
            run_twin_experiment(&c)
        })
        .collect::<Result<_>>()?;
    let mut runs = Vec::with_capacity(schemes.len());
    for _ in schemes {
        let rest = flat.split_off(seeds.len());
        runs.push(std::mem::replace(&mut flat, rest));
    }
    Ok(SchemeComparison {
        seeds: seeds.to_vec(),
        schemes: schemes.to_vec(),
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            n_cells: 40,
            ensemble_size: 12,
            n_cycles: 3,
            spinup_days: 30,
            ..Default::default()
        }
    }

    #[test]
    fn truth_is_deterministic_and_physical() {
        let cfg = small();
        let a = generate_truth(&cfg);
        let b = generate_truth(&cfg);
        assert_eq!(a, b);
        assert_eq!(
            a.states.len(),
            cfg.total_days().max(cfg.climatology_days) + 1
        );
        assert!(a
            .states
            .iter()
            .all(|s| s.is_physical() && s.satisfies_min_thickness()));
    }

    #[test]
    fn free_run_prior_equals_posterior() {
        let mut cfg = small();
        cfg.scheme = Scheme::FreeRun;
        let r = run_twin_experiment(&cfg).unwrap();
        for c in &r.report.cycles {
            assert_eq!(c.prior_rmse, c.posterior_rmse);
            assert_eq!(c.prior_aes, c.posterior_aes);
            assert_eq!(c.n_assimilated, 0);
        }
    }

    #[test]
    fn schemes_share_truth_and_observations() {
        let cfg = small();
        let cmp = compare_schemes(&cfg, &Scheme::ALL, &[5]).unwrap();
        let base = &cmp.runs[0][0];
        for runs in &cmp.runs {
            let r = &runs[0];
            assert_eq!(r.truth, base.truth);
            assert_eq!(r.snapshots[0].raw, base.snapshots[0].raw);
            // first prior is untouched by any analysis
            assert_eq!(r.snapshots[0].prior_mean, base.snapshots[0].prior_mean);
        }
    }

    #[test]
    fn single_cycle_priors_follow_the_free_run() {
        let mut cfg = small();
        cfg.mode = AnalysisMode::SingleCycle;
        let sq = run_twin_experiment(&cfg).unwrap();
        cfg.scheme = Scheme::FreeRun;
        let free = run_twin_experiment(&cfg).unwrap();
        for (a, b) in sq.snapshots.iter().zip(&free.snapshots) {
            assert_eq!(a.prior_mean, b.prior_mean);
        }
    }

    #[test]
    fn all_scheme_reduces_error_in_one_cycle() {
        let mut cfg = small();
        cfg.scheme = Scheme::EnkfAll;
        cfg.n_cycles = 1;
        let r = run_twin_experiment(&cfg).unwrap();
        let c = r.report.cycles[0];
        assert!(c.posterior_rmse < c.prior_rmse);
        assert!(c.posterior_aes < c.prior_aes);
    }

    #[test]
    fn sweep_rows_follow_inputs() {
        let cfg = small();
        let rows = run_alpha_sweep(&cfg, &[1.0], &[1]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].value, 1.0);
        let rows = run_ensemble_size_sweep(&cfg, &[2, 5], &[1, 2]).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].per_seed_posterior_rmse.len(), 2);
        assert!(rows.iter().all(|r| r.posterior_rmse.is_finite()));
    }

    #[test]
    fn default_sweep_values() {
        let a = default_alphas();
        assert_eq!(a.len(), 30);
        assert_eq!(a[0], 0.1);
        assert_eq!(a[29], 3.0);
        assert_eq!(default_ensemble_sizes(), vec![2, 5, 10, 20, 30, 50, 99]);
        assert_eq!(seed_range(4, 3), vec![4, 5, 6]);
    }
}
