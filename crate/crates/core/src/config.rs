//! Experiment configuration as a flat `key = value` text file.
//!
//! Blank lines and `#` comments are ignored; unknown keys are rejected.
//! [`ExperimentConfig::echo`] writes every key with its resolved value in a
//! form that parses back to the same config.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ensemble::GridSpec;
use crate::error::{invalid, Error, Result};
use crate::filters::Scheme;
use crate::localization::LocalizationConfig;
use crate::model::ForcingParams;
use crate::obs::ObsErrorModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnalysisMode {
    /// Posterior replaces the forecast and the filter cycles.
    Cycling,
    /// Every cycle analyses the free-running forecast; nothing is fed back.
    SingleCycle,
}

impl AnalysisMode {
    pub fn name(&self) -> &'static str {
        match self {
            AnalysisMode::Cycling => "cycling",
            AnalysisMode::SingleCycle => "single-cycle",
        }
    }
}

impl FromStr for AnalysisMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "cycling" => Ok(AnalysisMode::Cycling),
            "single-cycle" | "single_cycle" => Ok(AnalysisMode::SingleCycle),
            other => Err(invalid("mode", format!("unknown analysis mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub n_cells: usize,
    pub cell_spacing_km: f64,
    pub ensemble_size: usize,
    pub n_cycles: usize,
    pub days_per_cycle: usize,
    pub spinup_days: usize,
    /// Seasonal day of the first truth step; day 0 is peak growth.
    pub start_day: i64,
    /// Minimum truth length (days) used to build the climatology.
    pub climatology_days: usize,
    pub detection_limit: f64,
    pub alpha: f64,
    pub scheme: Scheme,
    pub mode: AnalysisMode,
    pub radius_km: f64,
    pub forcing: ForcingParams,
    pub obs_error_slope: f64,
    pub obs_error_intercept: f64,
    /// Mean of the initial thickness profile (m).
    pub init_mean_thickness: f64,
    /// Amplitude of the initial thickness profile (m).
    pub init_amplitude: f64,
    /// Std of the smooth additive perturbation of initial thickness (m).
    pub init_perturbation_std: f64,
    pub init_concentration: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            n_cells: 100,
            cell_spacing_km: 12.5,
            ensemble_size: 99,
            n_cycles: 20,
            days_per_cycle: 7,
            spinup_days: 90,
            start_day: 225,
            climatology_days: 365,
            detection_limit: 1.0,
            alpha: 1.0,
            scheme: Scheme::EnkfSq,
            mode: AnalysisMode::Cycling,
            radius_km: LocalizationConfig::DEFAULT_RADIUS_KM,
            forcing: ForcingParams::default(),
            obs_error_slope: 0.06,
            obs_error_intercept: 0.05,
            init_mean_thickness: 0.9,
            init_amplitude: 0.9,
            init_perturbation_std: 0.3,
            init_concentration: 0.9,
        }
    }
}

const KEYS: &[&str] = &[
    "seed",
    "n_cells",
    "cell_spacing_km",
    "ensemble_size",
    "n_cycles",
    "days_per_cycle",
    "spinup_days",
    "start_day",
    "climatology_days",
    "detection_limit",
    "alpha",
    "scheme",
    "mode",
    "radius_km",
    "growth_amplitude",
    "season_length",
    "advection_speed",
    "perturbation_std",
    "time_decorrelation",
    "space_decorrelation_km",
    "obs_error_slope",
    "obs_error_intercept",
    "init_mean_thickness",
    "init_amplitude",
    "init_perturbation_std",
    "init_concentration",
];

impl ExperimentConfig {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Parses over the defaults and validates the result.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |reason: String| Error::Config {
                line: i + 1,
                reason,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| err(e.to_string()))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::Config {
                line: 0,
                reason: format!("bad value `{v}` for `{key}`"),
            })
        }
        match key {
            "seed" => self.seed = num(key, value)?,
            "n_cells" => self.n_cells = num(key, value)?,
            "cell_spacing_km" => self.cell_spacing_km = num(key, value)?,
            "ensemble_size" => self.ensemble_size = num(key, value)?,
            "n_cycles" => self.n_cycles = num(key, value)?,
            "days_per_cycle" => self.days_per_cycle = num(key, value)?,
            "spinup_days" => self.spinup_days = num(key, value)?,
            "start_day" => self.start_day = num(key, value)?,
            "climatology_days" => self.climatology_days = num(key, value)?,
            "detection_limit" => self.detection_limit = num(key, value)?,
            "alpha" => self.alpha = num(key, value)?,
            "scheme" => self.scheme = value.parse()?,
            "mode" => self.mode = value.parse()?,
            "radius_km" => self.radius_km = num(key, value)?,
            "growth_amplitude" => self.forcing.growth_amplitude = num(key, value)?,
            "season_length" => self.forcing.season_length = num(key, value)?,
            "advection_speed" => self.forcing.advection_speed = num(key, value)?,
            "perturbation_std" => self.forcing.perturbation_std = num(key, value)?,
            "time_decorrelation" => self.forcing.time_decorrelation = num(key, value)?,
            "space_decorrelation_km" => self.forcing.space_decorrelation_km = num(key, value)?,
            "obs_error_slope" => self.obs_error_slope = num(key, value)?,
            "obs_error_intercept" => self.obs_error_intercept = num(key, value)?,
            "init_mean_thickness" => self.init_mean_thickness = num(key, value)?,
            "init_amplitude" => self.init_amplitude = num(key, value)?,
            "init_perturbation_std" => self.init_perturbation_std = num(key, value)?,
            "init_concentration" => self.init_concentration = num(key, value)?,
            other => {
                return Err(Error::Config {
                    line: 0,
                    reason: format!("unknown key `{other}`"),
                })
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        GridSpec::new(self.n_cells, self.cell_spacing_km)?;
        LocalizationConfig::new(self.radius_km)?;
        ObsErrorModel::new(self.obs_error_slope, self.obs_error_intercept)?;
        self.forcing.validate()?;
        if self.ensemble_size < 2 {
            return Err(invalid("ensemble_size", "must be at least 2"));
        }
        if self.n_cycles < 1 {
            return Err(invalid("n_cycles", "must be at least 1"));
        }
        if self.days_per_cycle < 1 {
            return Err(invalid("days_per_cycle", "must be at least 1"));
        }
        if !(self.detection_limit > 0.0 && self.detection_limit.is_finite()) {
            return Err(invalid("detection_limit", "must be > 0"));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(invalid("alpha", "must be > 0"));
        }
        if !(self.init_perturbation_std >= 0.0) {
            return Err(invalid("init_perturbation_std", "must be >= 0"));
        }
        if !(0.0..=1.0).contains(&self.init_concentration) {
            return Err(invalid("init_concentration", "must lie in [0, 1]"));
        }
        Ok(())
    }

    pub fn grid(&self) -> GridSpec {
        GridSpec::new(self.n_cells, self.cell_spacing_km).expect("validated grid")
    }

    pub fn localization(&self) -> LocalizationConfig {
        LocalizationConfig::new(self.radius_km).expect("validated radius")
    }

    pub fn obs_errors(&self) -> ObsErrorModel {
        ObsErrorModel::new(self.obs_error_slope, self.obs_error_intercept)
            .expect("validated error model")
    }

    /// Days from the first truth state to the last analysis.
    pub fn total_days(&self) -> usize {
        self.spinup_days + self.n_cycles * self.days_per_cycle
    }

    pub fn echo(&self) -> String {
        let f = &self.forcing;
        let values: Vec<String> = vec![
            self.seed.to_string(),
            self.n_cells.to_string(),
            self.cell_spacing_km.to_string(),
            self.ensemble_size.to_string(),
            self.n_cycles.to_string(),
            self.days_per_cycle.to_string(),
            self.spinup_days.to_string(),
            self.start_day.to_string(),
            self.climatology_days.to_string(),
            self.detection_limit.to_string(),
            self.alpha.to_string(),
            self.scheme.name().to_string(),
            self.mode.name().to_string(),
            self.radius_km.to_string(),
            f.growth_amplitude.to_string(),
            f.season_length.to_string(),
            f.advection_speed.to_string(),
            f.perturbation_std.to_string(),
            f.time_decorrelation.to_string(),
            f.space_decorrelation_km.to_string(),
            self.obs_error_slope.to_string(),
            self.obs_error_intercept.to_string(),
            self.init_mean_thickness.to_string(),
            self.init_amplitude.to_string(),
            self.init_perturbation_std.to_string(),
            self.init_concentration.to_string(),
        ];
        let mut out = String::new();
        for (k, v) in KEYS.iter().zip(values) {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}
