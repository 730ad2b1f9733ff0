use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use serde::Serialize;
use slr_core::{
    solve_constrained, solve_regularized, ConstrainedConfig, Matrix64, RegularizedConfig, SolveReport,
    TargetPair,
};

use crate::io::{read_matrix, write_json, write_matrix};
use crate::{parse_box, CliError, EXIT_NOT_CONVERGED, EXIT_OK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Regularized,
    Constrained,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Observed matrix Y.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Weight on the entrywise 1-norm of the sparse part.
    #[arg(long)]
    pub lambda: f64,
    /// Residual weight 1/(2 mu) (regularized mode, required there).
    #[arg(long)]
    pub mu: Option<f64>,
    /// Entrywise 1-norm budget for the residual (constrained mode).
    #[arg(long, default_value_t = 0.0)]
    pub eps_v1: f64,
    /// Trace-norm budget for the residual (constrained mode).
    #[arg(long, default_value_t = 0.0)]
    pub eps_star: f64,
    /// Entrywise bound on the low-rank part, or `inf`.
    #[arg(long, default_value = "inf", value_parser = parse_box)]
    pub b: f64,
    /// Stopping tolerance; defaults to the solver's own.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Rebalance the ADMM penalty when residuals drift apart.
    #[arg(long)]
    pub adaptive_penalty: bool,
    #[arg(long)]
    pub out_sparse: PathBuf,
    #[arg(long)]
    pub out_lowrank: PathBuf,
    #[arg(long)]
    pub report: PathBuf,
    /// Known sparse part; adds recovery errors to the report.
    #[arg(long, requires = "target_lowrank")]
    pub target_sparse: Option<PathBuf>,
    #[arg(long, requires = "target_sparse")]
    pub target_lowrank: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum MuOrEps {
    Mu(f64),
    /// `[eps_v1, eps_star]`.
    Eps([f64; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecomposeReport {
    pub mode: &'static str,
    pub lambda: f64,
    pub mu_or_eps: MuOrEps,
    pub iterations: usize,
    pub converged: bool,
    pub objective: f64,
    pub residual_v1: f64,
    pub residual_star: f64,
    pub residual_v2: f64,
    pub wall_time_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sparse_relative_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub low_rank_relative_error: Option<f64>,
}

pub fn run(args: &DecomposeArgs) -> Result<i32, CliError> {
    let y = read_matrix(&args.input)?;
    let target = match (&args.target_sparse, &args.target_lowrank) {
        (Some(s), Some(l)) => Some(TargetPair::new(read_matrix(s)?, read_matrix(l)?)?),
        _ => None,
    };
    let (mut solved, mu_or_eps, wall) = solve(args, &y)?;
    if let Some(t) = &target {
        solved.attach_target(t)?;
    }
    write_matrix(&args.out_sparse, &solved.sparse)?;
    write_matrix(&args.out_lowrank, &solved.low_rank)?;
    let report = DecomposeReport {
        mode: solved.formulation.as_str(),
        lambda: args.lambda,
        mu_or_eps,
        iterations: solved.iterations,
        converged: solved.converged,
        objective: solved.objective,
        residual_v1: solved.residual_v1,
        residual_star: solved.residual_star,
        residual_v2: solved.residual_v2,
        wall_time_seconds: wall,
        sparse_relative_error: solved.recovery.as_ref().map(|r| r.sparse_relative),
        low_rank_relative_error: solved.recovery.as_ref().map(|r| r.low_rank_relative),
    };
    write_json(&args.report, &report)?;
    if solved.converged {
        Ok(EXIT_OK)
    } else {
        eprintln!("warning: stopped at the iteration cap ({}) before converging", solved.iterations);
        Ok(EXIT_NOT_CONVERGED)
    }
}

fn solve(args: &DecomposeArgs, y: &Matrix64) -> Result<(SolveReport<f64>, MuOrEps, f64), CliError> {
    let start = Instant::now();
    let (report, tag) = match args.mode {
        Mode::Regularized => {
            let mu = args.mu.ok_or_else(|| CliError::Usage("--mu is required in regularized mode".into()))?;
            let mut cfg = RegularizedConfig::new(args.lambda, mu);
            cfg.b = args.b;
            if let Some(t) = args.tol {
                cfg.tol = t;
            }
            if let Some(k) = args.max_iter {
                cfg.max_iter = k;
            }
            (solve_regularized(y, &cfg)?, MuOrEps::Mu(mu))
        }
        Mode::Constrained => {
            let mut cfg = ConstrainedConfig::new(args.lambda, args.eps_v1, args.eps_star);
            cfg.b = args.b;
            cfg.adaptive_penalty = args.adaptive_penalty;
            if let Some(t) = args.tol {
                cfg.tol_primal = t;
                cfg.tol_dual = t;
            }
            if let Some(k) = args.max_iter {
                cfg.max_iter = k;
            }
            (solve_constrained(y, &cfg)?, MuOrEps::Eps([args.eps_v1, args.eps_star]))
        }
    };
    Ok((report, tag, start.elapsed().as_secs_f64()))
}
