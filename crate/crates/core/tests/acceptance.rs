//! Acceptance suite. Prints one `[PASS]`/`[FAIL]` line per criterion and
//! exits non-zero if any criterion fails.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use enkfsq_core::artifacts::write_run;
use enkfsq_core::diagnostics::BinSpec;
use enkfsq_core::experiment::{
    compare_schemes, generate_truth, run_alpha_sweep, run_ensemble_size_sweep, run_twin_experiment,
    seed_range, SchemeComparison,
};
use enkfsq_core::filters::{analyze, classify_observation, enkf_update_local};
use enkfsq_core::obs::generate_observations;
use enkfsq_core::{
    Ensemble, ExperimentConfig, Filter, GridSpec, LocalizationConfig, ObsErrorModel,
    RangeLimitedObservation, Scheme, SqParams, StateField, Streams, TwoPieceGaussian,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Desk-scale batch: 100 cells, N = 30, 20 cycles, 10 seeds.
fn batch_config() -> ExperimentConfig {
    ExperimentConfig {
        n_cells: 100,
        ensemble_size: 30,
        n_cycles: 20,
        ..Default::default()
    }
}

fn batch_seeds() -> Vec<u64> {
    seed_range(1, 10)
}

static BATCH: OnceLock<(SchemeComparison, Duration)> = OnceLock::new();

fn batch() -> &'static (SchemeComparison, Duration) {
    BATCH.get_or_init(|| {
        let t = Instant::now();
        let cmp =
            compare_schemes(&batch_config(), &Scheme::ALL, &batch_seeds()).expect("compare batch");
        (cmp, t.elapsed())
    })
}

fn degeneracy() -> Outcome {
    let cfg = batch_config();
    let grid = cfg.grid();
    let errors = ObsErrorModel::default();
    let truth = generate_truth(&cfg).states[cfg.spinup_days].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let members: Vec<StateField> = (0..cfg.ensemble_size)
        .map(|_| {
            let sit = truth
                .sit
                .iter()
                .map(|&h| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    (h + 0.3 * z).max(0.0)
                })
                .collect();
            StateField::new(sit, truth.sic.clone()).unwrap()
        })
        .collect();
    let prior = Ensemble::new(grid, members).unwrap();
    let raw = generate_observations(&truth, &errors, &mut ChaCha8Rng::seed_from_u64(12));
    let mu = raw.iter().map(|r| r.value).fold(0.0, f64::max) + 1.0;
    let obs: Vec<RangeLimitedObservation> = raw
        .iter()
        .map(|r| {
            classify_observation(r.value, mu, errors.std_at(r.value).unwrap(), r.cell).unwrap()
        })
        .collect();
    let sq = Filter::SemiQualitative(
        SqParams::uniform(errors.std_at(mu).unwrap(), 0.75, 1.0, grid.n_cells()).unwrap(),
    );
    let streams = Streams::new(13);
    let loc = LocalizationConfig::default();
    let a = analyze(&prior, &obs, &sq, &loc, &streams, 0).unwrap();
    let b = analyze(&prior, &obs, &Filter::Stochastic, &loc, &streams, 0).unwrap();
    let bitwise = |x: &Ensemble, y: &Ensemble| {
        x.members().iter().zip(y.members()).all(|(p, q)| {
            p.sit
                .iter()
                .zip(&q.sit)
                .all(|(u, v)| u.to_bits() == v.to_bits())
                && p.sic
                    .iter()
                    .zip(&q.sic)
                    .all(|(u, v)| u.to_bits() == v.to_bits())
        })
    };
    let direct = bitwise(&a, &b);

    // end to end: one cycle of each scheme with the limit above every value
    let mut c = cfg.clone();
    c.n_cycles = 1;
    c.detection_limit = 1.0e3;
    c.scheme = Scheme::EnkfSq;
    let sq_run = run_twin_experiment(&c).unwrap();
    c.scheme = Scheme::EnkfAll;
    let all_run = run_twin_experiment(&c).unwrap();
    let s = &sq_run.snapshots[0];
    let t = &all_run.snapshots[0];
    let same = |x: &[f64], y: &[f64]| x.iter().zip(y).all(|(u, v)| u.to_bits() == v.to_bits());
    let end_to_end =
        same(&s.posterior_mean, &t.posterior_mean) && same(&s.posterior_std, &t.posterior_std);
    check(
        direct && end_to_end && a.size() == b.size(),
        format!(
            "{} observations, all hard; analysis bitwise equal: {direct}; one-cycle run bitwise equal: {end_to_end}",
            obs.len()
        ),
    )
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let x = a + i as f64 * h;
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    s * h / 3.0
}

fn two_piece_suite() -> Outcome {
    let cases = [
        (1.0, 0.11, 0.75),
        (1.0, 0.11, 1.4),
        (0.5, 0.3, 0.05),
        (1.0, 0.2, 0.2),
    ];
    let n = 1_000_000;
    let mut worst_norm: f64 = 0.0;
    let mut lines = Vec::new();
    let mut ok = true;
    for (k, &(mu, s_ir, s_or)) in cases.iter().enumerate() {
        let d = TwoPieceGaussian::new(mu, s_ir, s_or).unwrap();
        // split at the mode, where the density has a kink
        let integral = simpson(|x| d.pdf(x), mu - 12.0 * s_ir, mu, 20_000)
            + simpson(|x| d.pdf(x), mu, mu + 12.0 * s_or, 20_000);
        worst_norm = worst_norm.max((integral - 1.0).abs());

        let mut rng = ChaCha8Rng::seed_from_u64(100 + k as u64);
        let (mut sum, mut sum_sq, mut below) = (0.0, 0.0, 0usize);
        for _ in 0..n {
            let x = d.sample(&mut rng);
            sum += x;
            sum_sq += x * x;
            below += usize::from(x <= mu);
        }
        let nf = n as f64;
        let mean = sum / nf;
        let sd = (sum_sq / nf - mean * mean).sqrt();
        let expected_mean = mu + (2.0 / std::f64::consts::PI).sqrt() * (s_or - s_ir);
        let z_mean = (mean - expected_mean) / (sd / nf.sqrt());
        let p = s_ir / (s_ir + s_or);
        let frac = below as f64 / nf;
        let z_frac = (frac - p) / (p * (1.0 - p) / nf).sqrt();
        ok &= z_mean.abs() < 4.0 && z_frac.abs() < 4.0;
        lines.push(format!("z_mean {z_mean:+.2} z_below {z_frac:+.2}"));
    }
    ok &= worst_norm < 1e-6;
    check(
        ok,
        format!("max |int f - 1| = {worst_norm:.1e}; {}", lines.join(", ")),
    )
}

fn scalar_conjugate() -> Outcome {
    let n = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let members = (0..n)
        .map(|_| {
            let x: f64 = StandardNormal.sample(&mut rng);
            StateField {
                sit: vec![x],
                sic: vec![0.5],
            }
        })
        .collect();
    let prior = Ensemble::new(GridSpec::new(1, 12.5).unwrap(), members).unwrap();
    let obs = RangeLimitedObservation::hard(0, 1.0, 1.0, f64::INFINITY).unwrap();
    let post = enkf_update_local(&prior, 0, &obs, &mut ChaCha8Rng::seed_from_u64(22)).unwrap();
    let nf = n as f64;
    let mean = post.sit.iter().sum::<f64>() / nf;
    let var = post.sit.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    check(
        (mean - 0.5).abs() <= 0.02 && (var - 0.5).abs() <= 0.02,
        format!("posterior mean {mean:.4}, variance {var:.4} (expected 0.5, 0.5)"),
    )
}

fn scheme_ranking() -> Outcome {
    let (cmp, elapsed) = batch();
    let m = |s| cmp.seed_mean(s, |r| r.report.mean_prior_rmse()).unwrap();
    let (all, sq, ig, free) = (
        m(Scheme::EnkfAll),
        m(Scheme::EnkfSq),
        m(Scheme::EnkfIg),
        m(Scheme::FreeRun),
    );
    let gain = (ig - sq) / ig;
    check(
        all < sq && sq < ig && ig < free && gain >= 0.04 && *elapsed < Duration::from_secs(300),
        format!(
            "prior RMSE all {all:.4} < sq {sq:.4} < ig {ig:.4} < free {free:.4}; sq improves on ig by {:.1}% (batch {:.1} s)",
            100.0 * gain,
            elapsed.as_secs_f64()
        ),
    )
}

fn alpha_u_shape() -> Outcome {
    let rows = run_alpha_sweep(&batch_config(), &[0.1, 1.0, 3.0], &batch_seeds()).unwrap();
    let (lo, mid, hi) = (&rows[0], &rows[1], &rows[2]);
    let divergence = lo.posterior_aes < 0.75 * lo.posterior_rmse;
    check(
        mid.posterior_rmse <= lo.posterior_rmse && mid.posterior_rmse <= hi.posterior_rmse && divergence,
        format!(
            "posterior RMSE a=0.1 {:.4}, a=1.0 {:.4}, a=3.0 {:.4}; at a=0.1 AES {:.4} is {:.0}% below RMSE",
            lo.posterior_rmse,
            mid.posterior_rmse,
            hi.posterior_rmse,
            lo.posterior_aes,
            100.0 * (1.0 - lo.posterior_aes / lo.posterior_rmse)
        ),
    )
}

fn ensemble_plateau() -> Outcome {
    let rows = run_ensemble_size_sweep(&batch_config(), &[10, 99], &batch_seeds()).unwrap();
    let (small, large) = (rows[0].posterior_rmse, rows[1].posterior_rmse);
    let rel = (small - large).abs() / large;
    check(
        rel <= 0.15,
        format!(
            "posterior RMSE N=10 {small:.4}, N=99 {large:.4}, relative difference {:.1}%",
            100.0 * rel
        ),
    )
}

fn near_threshold_bias() -> Outcome {
    let (cmp, _) = batch();
    let bins = BinSpec::default();
    let in_range: Vec<usize> = (0..bins.n_bins())
        .filter(|&b| {
            let (lo, hi) = bins.bounds(b);
            lo >= 1.0 && hi <= 2.0
        })
        .collect();
    let mean_abs = |s| {
        let v = cmp
            .seed_averaged_bin_means(s, |r| &r.posterior_error_by_obs)
            .unwrap();
        let vals: Vec<f64> = in_range
            .iter()
            .filter_map(|&b| v[b])
            .map(f64::abs)
            .collect();
        (vals.iter().sum::<f64>() / vals.len() as f64, vals.len())
    };
    let (sq, n_sq) = mean_abs(Scheme::EnkfSq);
    let (clim, n_clim) = mean_abs(Scheme::EnkfClim);
    check(
        n_sq == in_range.len() && n_clim == in_range.len() && sq <= clim,
        format!(
            "mean |bias| over {} bins in (1, 2] m: sq {sq:.4} <= clim {clim:.4}",
            in_range.len()
        ),
    )
}

fn skewness() -> Outcome {
    let (cmp, _) = batch();
    let bins = BinSpec::default();
    let v = cmp
        .seed_averaged_bin_means(Scheme::EnkfSq, |r| &r.final_skewness)
        .unwrap();
    let used: Vec<(f64, f64)> = (0..bins.n_bins())
        .filter(|&b| bins.bounds(b).0 >= 0.25)
        .filter_map(|b| v[b].map(|g| (bins.bounds(b).0, g)))
        .collect();
    let worst = used.iter().map(|(_, g)| g.abs()).fold(0.0, f64::max);
    check(
        !used.is_empty() && worst < 1.0,
        format!(
            "{} populated bins above 0.25 m, max |g1| {worst:.3}",
            used.len()
        ),
    )
}

fn physical_consistency() -> Outcome {
    let (cmp, _) = batch();
    let physical = cmp
        .runs
        .iter()
        .flatten()
        .all(|r| r.report.all_states_physical);
    let sq = cmp.mean_volume_difference(Scheme::EnkfSq).unwrap();
    let free = cmp.mean_volume_difference(Scheme::FreeRun).unwrap();
    let envelope = cmp.mean_volume_envelope(Scheme::FreeRun).unwrap();
    let inside = sq
        .iter()
        .zip(&envelope)
        .all(|(d, (lo, hi))| lo <= d && d <= hi);
    let sq_max = sq.iter().map(|d| d.abs()).fold(0.0, f64::max);
    let free_max = free.iter().map(|d| d.abs()).fold(0.0, f64::max);
    check(
        physical && inside,
        format!(
            "all states physical: {physical}; sq volume difference inside free-run member envelope on all {} days: {inside} \
             (max |dV| sq {sq_max:.0}, free-run mean {free_max:.0})",
            sq.len()
        ),
    )
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn determinism() -> Outcome {
    let mut checked = 0;
    for scheme in [Scheme::EnkfSq, Scheme::EnkfClim] {
        let mut cfg = batch_config();
        cfg.scheme = scheme;
        cfg.seed = 7;
        cfg.n_cycles = 4;
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        write_run(a.path(), &run_twin_experiment(&cfg).unwrap()).unwrap();
        write_run(b.path(), &run_twin_experiment(&cfg).unwrap()).unwrap();
        let (fa, fb) = (dir_bytes(a.path()), dir_bytes(b.path()));
        if fa != fb {
            return Err(format!("{scheme}: output directories differ"));
        }
        checked += fa.len();
    }
    Ok(format!(
        "{checked} files byte-identical across repeated runs"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "1 degeneracy to stochastic EnKF",
            degeneracy,
            Some(Duration::from_secs(1)),
        ),
        (
            "2 two-piece likelihood",
            two_piece_suite,
            Some(Duration::from_secs(5)),
        ),
        (
            "3 scalar conjugate oracle",
            scalar_conjugate,
            Some(Duration::from_secs(5)),
        ),
        ("4 scheme ranking", scheme_ranking, None),
        (
            "5 alpha sweep U-shape",
            alpha_u_shape,
            Some(Duration::from_secs(180)),
        ),
        (
            "6 ensemble-size plateau",
            ensemble_plateau,
            Some(Duration::from_secs(180)),
        ),
        ("7 bias near threshold", near_threshold_bias, None),
        ("8 skewness", skewness, None),
        ("9 physical consistency", physical_consistency, None),
        ("10 determinism", determinism, None),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let t = Instant::now();
        let mut outcome = f();
        let elapsed = t.elapsed();
        if let (Some(limit), Ok(detail)) = (limit, &outcome) {
            if elapsed > limit {
                outcome = Err(format!(
                    "{detail}; exceeded {:.0} s budget",
                    limit.as_secs_f64()
                ));
            }
        }
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {name}: {detail} ({:.2} s)", elapsed.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
