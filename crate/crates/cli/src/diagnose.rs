use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use slr_core::{
    check_conditions, check_identifiability, profile, Formulation, IncoherenceProfile, TargetPair,
};

use crate::io::{read_matrix, write_json};
use crate::{finite_or_none, flatten_json, CliError, EXIT_OK};

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[arg(long)]
    pub sparse: PathBuf,
    #[arg(long)]
    pub lowrank: PathBuf,
    /// Balancing parameter; defaults to the minimizer of alpha*beta.
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,
    /// Used for both formulations; defaults to a per-formulation rule.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    #[arg(long)]
    pub report: PathBuf,
}

/// Condition outcome for one formulation. Window limits are `null` when
/// unbounded; `window_lo` is `null` also when the lower limit does not exist.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormulationVerdict {
    pub lambda: f64,
    pub product_ok: bool,
    pub lambda_upper_ok: bool,
    pub lambda_lower_ok: bool,
    pub passed: bool,
    pub window_lo: Option<f64>,
    pub window_hi: Option<f64>,
    pub window_nonempty: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnoseReport {
    pub rows: usize,
    pub cols: usize,
    pub support_size: usize,
    pub rank: usize,
    pub m0: usize,
    pub n0: usize,
    pub a: f64,
    pub b: f64,
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub rho: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub alpha_beta: f64,
    pub identifiable: bool,
    pub c: f64,
    pub mu: f64,
    pub constrained: FormulationVerdict,
    pub regularized: FormulationVerdict,
}

/// `√((5/3)γ/α)` for the constrained program, `(15/82)/α` for the
/// regularized one, with `α = 0` read as 1.
pub fn default_lambda(p: &IncoherenceProfile<f64>, formulation: Formulation) -> f64 {
    let alpha = if p.alpha > 0.0 { p.alpha } else { 1.0 };
    match formulation {
        Formulation::Constrained => (5.0 / 3.0 * p.gamma / alpha).sqrt(),
        Formulation::Regularized => 15.0 / 82.0 / alpha,
    }
}

pub fn diagnose(target: &TargetPair<f64>, args: &DiagnoseArgs) -> Result<DiagnoseReport, CliError> {
    let p = profile(target, args.rho)?;
    let verdict = |f: Formulation| -> Result<FormulationVerdict, CliError> {
        let lambda = args.lambda.unwrap_or_else(|| default_lambda(&p, f));
        let v = check_conditions(&p, f, args.c, lambda, Some(args.mu), 0.0, 0.0)?;
        Ok(FormulationVerdict {
            lambda,
            product_ok: v.passed.product,
            lambda_upper_ok: v.passed.lambda_upper,
            lambda_lower_ok: v.passed.lambda_lower,
            passed: v.all_passed(),
            window_lo: finite_or_none(v.lambda_window.0),
            window_hi: finite_or_none(v.lambda_window.1),
            window_nonempty: v.window_nonempty(),
        })
    };
    Ok(DiagnoseReport {
        rows: p.shape.0,
        cols: p.shape.1,
        support_size: p.support_size,
        rank: p.rank,
        m0: p.m0,
        n0: p.n0,
        a: p.a,
        b: p.b,
        u: p.u,
        v: p.v,
        w: p.w,
        rho: p.rho,
        alpha: p.alpha,
        beta: p.beta,
        gamma: p.gamma,
        alpha_beta: p.product,
        identifiable: check_identifiability(&p),
        c: args.c,
        mu: args.mu,
        constrained: verdict(Formulation::Constrained)?,
        regularized: verdict(Formulation::Regularized)?,
    })
}

pub fn run(args: &DiagnoseArgs) -> Result<i32, CliError> {
    let target = TargetPair::new(read_matrix(&args.sparse)?, read_matrix(&args.lowrank)?)?;
    let report =
        serde_json::to_value(diagnose(&target, args)?).map_err(|e| CliError::Parse(e.to_string()))?;
    write_json(&args.report, &flatten_json(report))?;
    Ok(EXIT_OK)
}
