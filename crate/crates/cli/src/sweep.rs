use std::path::{Path, PathBuf};

use clap::Args;
use rayon::prelude::*;
use slr_core::rng::splitmix64;
use slr_core::{gen_instance, solve_constrained, ConstrainedConfig, InstanceSpec, MagnitudeLaw, Seed};

use crate::io::write_atomic;
use crate::{CliError, EXIT_OK};

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    /// Inclusive rank range `a:b`.
    #[arg(long, value_parser = parse_ranks)]
    pub ranks: RankRange,
    /// Support densities `lo:hi:step`, as draws per cell.
    #[arg(long, value_parser = parse_densities)]
    pub densities: DensityGrid,
    #[arg(long)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    /// Per-trial CSV; the per-cell summary goes to `<stem>_summary.csv`.
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads; 0 uses all cores. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[arg(long, default_value_t = 2000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Fixed lambda instead of the per-instance rule.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Largest relative Frobenius error, on both parts, counted as success.
    #[arg(long, default_value_t = 1e-4)]
    pub threshold: f64,
    #[arg(long, default_value_t = 10.0)]
    pub amplitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankRange(pub usize, pub usize);

#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid(pub Vec<f64>);

fn parse_ranks(s: &str) -> Result<RankRange, String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|_| format!("bad rank {a:?}"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad rank {b:?}"))?;
    if a > b {
        return Err(format!("empty rank range {s}"));
    }
    Ok(RankRange(a, b))
}

fn parse_densities(s: &str) -> Result<DensityGrid, String> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|x| x.trim().parse::<f64>().map_err(|_| format!("bad density {x:?}")))
        .collect::<Result<_, _>>()?;
    let [lo, hi, step] = parts[..] else {
        return Err(format!("expected lo:hi:step, got {s:?}"));
    };
    if !(lo >= 0.0 && hi >= lo && hi <= 1.0) {
        return Err(format!("densities need 0 <= lo <= hi <= 1, got {s}"));
    }
    if lo == hi {
        return Ok(DensityGrid(vec![lo]));
    }
    if step.is_nan() || step <= 0.0 {
        return Err(format!("step must be positive, got {step}"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    // Round to 12 decimals so grid points print as typed (0.15, not 0.15000000000000002).
    let snap = |x: f64| format!("{x:.12}").parse::<f64>().unwrap_or(x);
    Ok(DensityGrid((0..=count).map(|i| snap(lo + i as f64 * step)).collect()))
}

/// Seed of one trial: depends only on the base seed and the cell indices.
pub fn trial_seed(base: u64, rank: usize, density_index: usize, trial: usize) -> u64 {
    let h = splitmix64(splitmix64(splitmix64(rank as u64) ^ density_index as u64) ^ trial as u64);
    base ^ h
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRow {
    pub rank: usize,
    pub density: f64,
    pub trial: usize,
    pub seed: u64,
    pub ktilde: usize,
    pub support_size: usize,
    pub alpha_beta: f64,
    pub lambda: f64,
    pub iterations: usize,
    pub converged: bool,
    pub sparse_relative_error: f64,
    pub low_rank_relative_error: f64,
    pub success: bool,
    pub error: String,
}

struct Task {
    rank: usize,
    density_index: usize,
    density: f64,
    trial: usize,
}

fn run_trial(args: &SweepArgs, task: &Task) -> TrialRow {
    let seed = trial_seed(args.seed, task.rank, task.density_index, task.trial);
    let ktilde = (task.density * (args.m * args.n) as f64).round() as usize;
    let mut row = TrialRow {
        rank: task.rank,
        density: task.density,
        trial: task.trial,
        seed,
        ktilde,
        support_size: 0,
        alpha_beta: f64::NAN,
        lambda: f64::NAN,
        iterations: 0,
        converged: false,
        sparse_relative_error: f64::NAN,
        low_rank_relative_error: f64::NAN,
        success: false,
        error: String::new(),
    };
    if let Err(e) = solve_trial(args, ktilde, &mut row) {
        row.error = e.to_string();
        row.success = false;
    }
    row
}

fn solve_trial(args: &SweepArgs, ktilde: usize, row: &mut TrialRow) -> slr_core::Result<()> {
    let inst = gen_instance::<f64>(&InstanceSpec {
        m: args.m,
        n: args.n,
        rank: row.rank,
        ktilde,
        magnitude: MagnitudeLaw::Fixed { amplitude: args.amplitude },
        sigma: 0.0,
        seed: Seed(row.seed),
    })?;
    let p = &inst.profile;
    row.support_size = p.support_size;
    row.alpha_beta = p.product;
    let alpha = if p.alpha > 0.0 { p.alpha } else { 1.0 };
    row.lambda = args.lambda.unwrap_or_else(|| (5.0 / 3.0 * p.gamma / alpha).sqrt());
    let mut cfg = ConstrainedConfig::new(row.lambda, 0.0, 0.0);
    cfg.max_iter = args.max_iter;
    cfg.tol_primal = args.tol;
    cfg.tol_dual = args.tol;
    let mut report = solve_constrained(&inst.y, &cfg)?;
    report.attach_target(&inst.target)?;
    let err = report.recovery.expect("target attached");
    row.iterations = report.iterations;
    row.converged = report.converged;
    row.sparse_relative_error = err.sparse_relative;
    row.low_rank_relative_error = err.low_rank_relative;
    row.success = err.sparse_relative <= args.threshold && err.low_rank_relative <= args.threshold;
    Ok(())
}

/// All trials in grid order (rank, then density, then trial).
pub fn sweep_rows(args: &SweepArgs) -> Result<Vec<TrialRow>, CliError> {
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let mut tasks = Vec::new();
    for rank in args.ranks.0..=args.ranks.1 {
        for (density_index, &density) in args.densities.0.iter().enumerate() {
            for trial in 0..args.trials {
                tasks.push(Task { rank, density_index, density, trial });
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(pool.install(|| tasks.par_iter().map(|t| run_trial(args, t)).collect()))
}

pub fn trials_csv(rows: &[TrialRow]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| CliError::Parse(e.to_string());
    w.write_record([
        "rank",
        "density",
        "trial",
        "seed",
        "ktilde",
        "support_size",
        "alpha_beta",
        "lambda",
        "iterations",
        "converged",
        "sparse_relative_error",
        "low_rank_relative_error",
        "success",
        "error",
    ])
    .map_err(to_err)?;
    for r in rows {
        w.write_record([
            r.rank.to_string(),
            format!("{:?}", r.density),
            r.trial.to_string(),
            r.seed.to_string(),
            r.ktilde.to_string(),
            r.support_size.to_string(),
            format!("{:?}", r.alpha_beta),
            format!("{:?}", r.lambda),
            r.iterations.to_string(),
            r.converged.to_string(),
            format!("{:?}", r.sparse_relative_error),
            format!("{:?}", r.low_rank_relative_error),
            r.success.to_string(),
            r.error.clone(),
        ])
        .map_err(to_err)?;
    }
    w.into_inner().map_err(|e| CliError::Parse(e.to_string()))
}

/// One row per (rank, density) cell with its success rate.
pub fn summary_csv(rows: &[TrialRow]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| CliError::Parse(e.to_string());
    w.write_record(["rank", "density", "trials", "successes", "success_rate"]).map_err(to_err)?;
    for cell in rows.chunk_by(|a, b| a.rank == b.rank && a.density == b.density) {
        let wins = cell.iter().filter(|r| r.success).count();
        w.write_record([
            cell[0].rank.to_string(),
            format!("{:?}", cell[0].density),
            cell.len().to_string(),
            wins.to_string(),
            format!("{:?}", wins as f64 / cell.len() as f64),
        ])
        .map_err(to_err)?;
    }
    w.into_inner().map_err(|e| CliError::Parse(e.to_string()))
}

pub fn summary_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}_summary.csv"))
}

pub fn run(args: &SweepArgs) -> Result<i32, CliError> {
    let rows = sweep_rows(args)?;
    write_atomic(&args.out, &trials_csv(&rows)?)?;
    write_atomic(&summary_path(&args.out), &summary_csv(&rows)?)?;
    Ok(EXIT_OK)
}
