//! Writing experiment results as CSV and JSON files.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::diagnostics::{BinSpec, BinnedValues};
use crate::error::Result;
use crate::experiment::{CycleSnapshot, RunArtifacts, SchemeComparison, SweepRow, TruthRun};
use crate::filters::ObsKind;
use crate::output::{fmt_f64, fmt_opt};

/// Lowest truth thickness for which binned skewness is considered reliable.
pub const SKEWNESS_RELIABLE_FROM: f64 = 0.25;

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Writes the wide-format truth over the experiment window: one row per
/// day, columns `day`, `sit_<c>`..., `sic_<c>`...
pub fn write_truth_csv(path: &Path, truth: &TruthRun, days: usize) -> Result<()> {
    let mut w = create(path)?;
    let n = truth.states.first().map_or(0, |s| s.len());
    let mut header = vec!["day".to_string()];
    header.extend((0..n).map(|c| format!("sit_{c}")));
    header.extend((0..n).map(|c| format!("sic_{c}")));
    writeln!(w, "{}", header.join(","))?;
    for (step, s) in truth.states.iter().enumerate().take(days + 1) {
        let mut row = vec![truth.day_of(step).to_string()];
        row.extend(s.sit.iter().map(|&x| fmt_f64(x)));
        row.extend(s.sic.iter().map(|&x| fmt_f64(x)));
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}

fn write_binned(
    path: &Path,
    bins: &BinSpec,
    value_name: &str,
    v: &BinnedValues,
    flag: bool,
) -> Result<()> {
    let mut w = create(path)?;
    if flag {
        writeln!(w, "bin,lower,upper,count,{value_name},reliable")?;
    } else {
        writeln!(w, "bin,lower,upper,count,{value_name}")?;
    }
    for b in 0..bins.n_bins() {
        let (lo, hi) = bins.bounds(b);
        write!(
            w,
            "{b},{},{},{},{}",
            fmt_f64(lo),
            fmt_f64(hi),
            v.counts[b],
            fmt_opt(v.values[b])
        )?;
        if flag {
            write!(w, ",{}", lo >= SKEWNESS_RELIABLE_FROM)?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Summary<'a> {
    scheme: &'a str,
    mode: &'a str,
    seed: u64,
    alpha: f64,
    ensemble_size: usize,
    n_cycles: usize,
    mean_prior_rmse: f64,
    mean_prior_aes: f64,
    mean_posterior_rmse: f64,
    mean_posterior_aes: f64,
    all_states_physical: bool,
    climatology_cells: usize,
    dropped_no_climatology: usize,
}

/// Writes every file of one run into `dir`, creating it if needed.
pub fn write_run(dir: &Path, run: &RunArtifacts) -> Result<()> {
    fs::create_dir_all(dir)?;
    let cfg = &run.config;
    let report = &run.report;
    fs::write(dir.join("config.echo"), cfg.echo())?;
    write_truth_csv(&dir.join("truth.csv"), &run.truth, cfg.total_days())?;
    run.climatology
        .write_csv(create(&dir.join("climatology.csv"))?)?;

    for snap in &run.snapshots {
        let mut w = create(&dir.join(format!("obs_cycle_{}.csv", snap.cycle)))?;
        writeln!(w, "cell,raw_value,kind,value,sigma")?;
        for (r, o) in snap.raw.iter().zip(classified_view(snap)) {
            let (kind, value, sigma) = match o {
                Some(ObsKind::Hard { value, sigma }) => ("hard", fmt_f64(value), fmt_f64(sigma)),
                Some(ObsKind::Soft) => ("soft", String::new(), String::new()),
                None => ("dropped", String::new(), String::new()),
            };
            writeln!(w, "{},{},{kind},{value},{sigma}", r.cell, fmt_f64(r.value))?;
        }
        w.flush()?;

        let mut w = create(&dir.join(format!("ens_cycle_{}.csv", snap.cycle)))?;
        writeln!(
            w,
            "cell,truth,prior_mean,prior_std,posterior_mean,posterior_std,increment"
        )?;
        for c in 0..snap.truth.len() {
            writeln!(
                w,
                "{c},{},{},{},{},{},{}",
                fmt_f64(snap.truth[c]),
                fmt_f64(snap.prior_mean[c]),
                fmt_f64(snap.prior_std[c]),
                fmt_f64(snap.posterior_mean[c]),
                fmt_f64(snap.posterior_std[c]),
                fmt_f64(snap.posterior_mean[c] - snap.prior_mean[c]),
            )?;
        }
        w.flush()?;
    }

    let mut w = create(&dir.join("diag.csv"))?;
    writeln!(
        w,
        "cycle,day,prior_rmse,prior_aes,posterior_rmse,posterior_aes,percent_soft,n_obs,n_assimilated,n_soft,dropped_no_climatology"
    )?;
    for c in &report.cycles {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{}",
            c.cycle,
            c.day,
            fmt_f64(c.prior_rmse),
            fmt_f64(c.prior_aes),
            fmt_f64(c.posterior_rmse),
            fmt_f64(c.posterior_aes),
            fmt_opt(c.percent_soft),
            c.n_observations,
            c.n_assimilated,
            c.n_soft_assimilated,
            c.dropped_no_climatology,
        )?;
    }
    w.flush()?;

    let bins = &report.bins;
    write_binned(
        &dir.join("bins_rmse.csv"),
        bins,
        "prior_rmse",
        &report.prior_error_by_obs.rms(),
        false,
    )?;
    write_binned(
        &dir.join("bins_bias.csv"),
        bins,
        "posterior_bias",
        &report.posterior_error_by_obs.mean(),
        false,
    )?;
    write_binned(
        &dir.join("bins_skew.csv"),
        bins,
        "posterior_skewness",
        &report.final_skewness.mean(),
        true,
    )?;

    let mut w = create(&dir.join("volume.csv"))?;
    writeln!(
        w,
        "day,phase,truth_volume,ensemble_volume,difference,member_min,member_max"
    )?;
    for v in &report.volume {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            v.day,
            v.phase.name(),
            fmt_f64(v.truth),
            fmt_f64(v.ensemble),
            fmt_f64(v.ensemble - v.truth),
            fmt_f64(v.member_min),
            fmt_f64(v.member_max)
        )?;
    }
    w.flush()?;

    let summary = Summary {
        scheme: cfg.scheme.name(),
        mode: cfg.mode.name(),
        seed: cfg.seed,
        alpha: cfg.alpha,
        ensemble_size: cfg.ensemble_size,
        n_cycles: cfg.n_cycles,
        mean_prior_rmse: report.mean_prior_rmse(),
        mean_prior_aes: report.mean_prior_aes(),
        mean_posterior_rmse: report.mean_posterior_rmse(),
        mean_posterior_aes: report.mean_posterior_aes(),
        all_states_physical: report.all_states_physical,
        climatology_cells: run.climatology.populated(),
        dropped_no_climatology: report.cycles.iter().map(|c| c.dropped_no_climatology).sum(),
    };
    let mut w = create(&dir.join("summary.json"))?;
    serde_json::to_writer_pretty(&mut w, &summary)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Assimilated kind per raw observation, `None` where the scheme dropped it.
fn classified_view(snap: &CycleSnapshot) -> Vec<Option<ObsKind>> {
    let mut by_cell = vec![None; snap.truth.len()];
    for o in &snap.assimilated {
        by_cell[o.cell] = Some(o.kind);
    }
    snap.raw.iter().map(|r| by_cell[r.cell]).collect()
}

/// One row per swept value with seed-averaged scores.
pub fn write_sweep_csv(path: &Path, value_name: &str, rows: &[SweepRow]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(
        w,
        "{value_name},posterior_rmse,posterior_aes,prior_rmse,prior_aes"
    )?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_f64(r.value),
            fmt_f64(r.posterior_rmse),
            fmt_f64(r.posterior_aes),
            fmt_f64(r.prior_rmse),
            fmt_f64(r.prior_aes)
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `compare.csv` (one row per scheme) plus every run under
/// `seed_<s>/<scheme>/`.
pub fn write_comparison(dir: &Path, cmp: &SchemeComparison) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut w = create(&dir.join("compare.csv"))?;
    writeln!(
        w,
        "scheme,n_seeds,prior_rmse,prior_aes,posterior_rmse,posterior_aes"
    )?;
    for &scheme in &cmp.schemes {
        let m = |f: fn(&RunArtifacts) -> f64| fmt_f64(cmp.seed_mean(scheme, f).unwrap_or(f64::NAN));
        writeln!(
            w,
            "{},{},{},{},{},{}",
            scheme.name(),
            cmp.seeds.len(),
            m(|r| r.report.mean_prior_rmse()),
            m(|r| r.report.mean_prior_aes()),
            m(|r| r.report.mean_posterior_rmse()),
            m(|r| r.report.mean_posterior_aes()),
        )?;
    }
    w.flush()?;
    for (s, runs) in cmp.schemes.iter().zip(&cmp.runs) {
        for run in runs {
            write_run(
                &dir.join(format!("seed_{}", run.config.seed)).join(s.name()),
                run,
            )?;
        }
    }
    Ok(())
}
