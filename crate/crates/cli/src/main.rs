use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use enkfsq_core::artifacts::{write_comparison, write_run, write_sweep_csv, write_truth_csv};
use enkfsq_core::experiment::{
    compare_schemes, default_alphas, default_ensemble_sizes, generate_truth, run_alpha_sweep,
    run_ensemble_size_sweep, run_twin_experiment, seed_range, RunArtifacts,
};
use enkfsq_core::obs::ClimatologyTable;
use enkfsq_core::{AnalysisMode, ExperimentConfig, Scheme};

/// Twin experiments for ensemble assimilation of range-limited sea-ice
/// thickness observations.
#[derive(Parser, Debug)]
#[command(name = "enkfsq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate the truth run and its above-limit climatology.
    Truth(Common),
    /// Run one twin experiment.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        scheme: Option<Scheme>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Analysis mode: cycling or single-cycle.
        #[arg(long)]
        mode: Option<AnalysisMode>,
    },
    /// Single-cycle EnKF-SQ runs over out-of-range error multipliers.
    SweepAlpha {
        #[command(flatten)]
        common: Common,
        /// Comma-separated multipliers (default 0.1, 0.2, ..., 3.0).
        #[arg(long, value_delimiter = ',')]
        alphas: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        seeds: usize,
    },
    /// Single-cycle EnKF-SQ runs over ensemble sizes.
    SweepN {
        #[command(flatten)]
        common: Common,
        /// Comma-separated ensemble sizes (default 2,5,10,20,30,50,99).
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seeds: usize,
    },
    /// Run every scheme on shared truth, observations and ensemble.
    CompareSchemes {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        seeds: usize,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Key-value config file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Ensemble size.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    cycles: Option<usize>,
    /// Override any config key, e.g. `--set advection_speed=0.2`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)
                .with_context(|| format!("reading config {}", path.display()))?,
            None => ExperimentConfig::default(),
        };
        for kv in &self.overrides {
            let Some((k, v)) = kv.split_once('=') else {
                bail!("--set expects KEY=VALUE, got {kv:?}");
            };
            cfg.set(k.trim(), v.trim())?;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(n) = self.n {
            cfg.ensemble_size = n;
        }
        if let Some(c) = self.cycles {
            cfg.n_cycles = c;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn print_run(run: &RunArtifacts, dir: &Path) {
    let r = &run.report;
    println!(
        "{} seed {}: prior rmse {:.4} aes {:.4}, posterior rmse {:.4} aes {:.4} -> {}",
        run.config.scheme,
        run.config.seed,
        r.mean_prior_rmse(),
        r.mean_prior_aes(),
        r.mean_posterior_rmse(),
        r.mean_posterior_aes(),
        dir.display()
    );
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Truth(common) => {
            let cfg = common.config()?;
            let truth = generate_truth(&cfg);
            let clim = ClimatologyTable::build(&truth.states, cfg.detection_limit);
            fs::create_dir_all(&common.out)?;
            fs::write(common.out.join("config.echo"), cfg.echo())?;
            write_truth_csv(
                &common.out.join("truth.csv"),
                &truth,
                truth.states.len() - 1,
            )?;
            clim.write_csv(fs::File::create(common.out.join("climatology.csv"))?)?;
            println!(
                "truth written to {} ({} cells with climatology)",
                common.out.display(),
                clim.populated()
            );
        }
        Command::Run {
            common,
            scheme,
            alpha,
            mode,
        } => {
            let mut cfg = common.config()?;
            if let Some(s) = scheme {
                cfg.scheme = s;
            }
            if let Some(a) = alpha {
                cfg.alpha = a;
            }
            if let Some(m) = mode {
                cfg.mode = m;
            }
            cfg.validate()?;
            let run = run_twin_experiment(&cfg)?;
            write_run(&common.out, &run)?;
            print_run(&run, &common.out);
        }
        Command::SweepAlpha {
            common,
            alphas,
            seeds,
        } => {
            let cfg = common.config()?;
            let alphas = if alphas.is_empty() {
                default_alphas()
            } else {
                alphas
            };
            let rows = run_alpha_sweep(&cfg, &alphas, &seed_range(cfg.seed, seeds))?;
            fs::create_dir_all(&common.out)?;
            fs::write(common.out.join("config.echo"), cfg.echo())?;
            let path = common.out.join("sweep_alpha.csv");
            write_sweep_csv(&path, "alpha", &rows)?;
            for r in &rows {
                println!(
                    "alpha {:.2}: rmse {:.4} aes {:.4}",
                    r.value, r.posterior_rmse, r.posterior_aes
                );
            }
            println!("-> {}", path.display());
        }
        Command::SweepN {
            common,
            sizes,
            seeds,
        } => {
            let cfg = common.config()?;
            let sizes = if sizes.is_empty() {
                default_ensemble_sizes()
            } else {
                sizes
            };
            let rows = run_ensemble_size_sweep(&cfg, &sizes, &seed_range(cfg.seed, seeds))?;
            fs::create_dir_all(&common.out)?;
            fs::write(common.out.join("config.echo"), cfg.echo())?;
            let path = common.out.join("sweep_n.csv");
            write_sweep_csv(&path, "ensemble_size", &rows)?;
            for r in &rows {
                println!(
                    "N {:3}: rmse {:.4} aes {:.4}",
                    r.value, r.posterior_rmse, r.posterior_aes
                );
            }
            println!("-> {}", path.display());
        }
        Command::CompareSchemes { common, seeds } => {
            let cfg = common.config()?;
            let cmp = compare_schemes(&cfg, &Scheme::ALL, &seed_range(cfg.seed, seeds))?;
            write_comparison(&common.out, &cmp)?;
            for &s in &cmp.schemes {
                let rmse = cmp
                    .seed_mean(s, |r| r.report.mean_prior_rmse())
                    .unwrap_or(f64::NAN);
                let aes = cmp
                    .seed_mean(s, |r| r.report.mean_prior_aes())
                    .unwrap_or(f64::NAN);
                println!("{:10} prior rmse {rmse:.4} aes {aes:.4}", s.name());
            }
            println!("-> {}", common.out.join("compare.csv").display());
        }
    }
    Ok(())
}
