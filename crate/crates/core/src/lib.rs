//! Ensemble Kalman filtering of sea-ice thickness with range-limited
//! observations, and twin experiments on a one-dimensional surrogate model.
//!
//! Observations above the instrument's detection limit are assimilated as
//! soft data through a two-piece Gaussian likelihood ([`filters::Filter::SemiQualitative`]).

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod artifacts;
pub mod config;
pub mod diagnostics;
pub mod ensemble;
pub mod error;
pub mod experiment;
pub mod filters;
pub mod localization;
pub mod model;
pub mod obs;
pub mod output;
pub mod rng;
pub mod two_piece;

pub use config::{AnalysisMode, ExperimentConfig};
pub use diagnostics::{BinAccumulator, BinSpec, BinnedValues};
pub use ensemble::{Ensemble, GridSpec, StateField};
pub use error::{Error, Result};
pub use experiment::{
    compare_schemes, run_alpha_sweep, run_ensemble_size_sweep, run_twin_experiment, RunArtifacts,
    SchemeComparison, SweepRow,
};
pub use filters::{Filter, ObsKind, RangeLimitedObservation, Scheme, SqParams};
pub use localization::LocalizationConfig;
pub use model::ForcingParams;
pub use obs::{ClimatologyTable, ObsErrorModel, RawObservation};
pub use rng::Streams;
pub use two_piece::TwoPieceGaussian;
