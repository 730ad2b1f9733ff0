use std::path::PathBuf;

use clap::Args;
use serde_json::{json, Map, Value};
use slr_core::{
    build_certificate, check_conditions, perturbation_levels, profile, DualCertificate, Error, Formulation,
    Matrix64, TargetPair,
};

use crate::io::{read_matrix, write_json};
use crate::{finite_or_none, CliError, EXIT_OK, EXIT_PRECONDITION};

/// Tolerance on the feasibility equations and slack on the complement caps.
pub const CERTIFICATE_TOL: f64 = 1e-8;
const NEUMANN_TOL: f64 = 1e-12;

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub sparse: PathBuf,
    #[arg(long)]
    pub lowrank: PathBuf,
    /// Perturbation E; zero when omitted.
    #[arg(long)]
    pub noise: Option<PathBuf>,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,
    #[arg(long)]
    pub report: PathBuf,
}

/// Report keys and the overall verdict. Certificate fields are `null` when the
/// recovery conditions fail.
pub fn certify_report(
    target: &TargetPair<f64>,
    e: &Matrix64,
    lambda: f64,
    mu: f64,
    c: f64,
) -> Result<(Map<String, Value>, bool), CliError> {
    let p = profile(target, None)?;
    let levels = perturbation_levels(target, e)?;
    let verdict = check_conditions(
        &p,
        Formulation::Regularized,
        c,
        lambda,
        Some(mu),
        levels.eps_2to2,
        levels.eps_vinf,
    )?;
    let mut out = Map::new();
    out.insert("lambda".into(), json!(lambda));
    out.insert("mu".into(), json!(mu));
    out.insert("c".into(), json!(c));
    out.insert("alpha_beta".into(), json!(p.product));
    out.insert("eps_2to2".into(), json!(levels.eps_2to2));
    out.insert("eps_vinf".into(), json!(levels.eps_vinf));
    out.insert("eps_star_prime".into(), json!(levels.eps_star_prime));
    out.insert("conditions_passed".into(), json!(verdict.all_passed()));
    out.insert("product_ok".into(), json!(verdict.passed.product));
    out.insert("lambda_upper_ok".into(), json!(verdict.passed.lambda_upper));
    out.insert("lambda_lower_ok".into(), json!(verdict.passed.lambda_lower));
    out.insert("window_lo".into(), json!(finite_or_none(verdict.lambda_window.0)));
    out.insert("window_hi".into(), json!(finite_or_none(verdict.lambda_window.1)));

    let cert = match build_certificate(target, e, lambda, mu, c, NEUMANN_TOL) {
        Ok(cert) => Some(cert),
        Err(Error::Precondition(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let satisfied = match &cert {
        Some(cert) => {
            insert_certificate(&mut out, cert);
            feasible(cert) && cert.complement_caps_hold(CERTIFICATE_TOL) && cert.all_bounds_satisfied()
        }
        None => {
            for key in CERTIFICATE_KEYS {
                out.insert(key.into(), Value::Null);
            }
            false
        }
    };
    out.insert("all_satisfied".into(), json!(satisfied));
    Ok((out, satisfied))
}

const CERTIFICATE_KEYS: [&str; 9] = [
    "feasibility_support",
    "feasibility_tangent",
    "complement_support",
    "complement_support_cap",
    "complement_tangent",
    "complement_tangent_cap",
    "neumann_iterations_support",
    "neumann_iterations_tangent",
    "contraction",
];

pub fn feasible(cert: &DualCertificate<f64>) -> bool {
    cert.feasibility_residuals.0 <= CERTIFICATE_TOL && cert.feasibility_residuals.1 <= CERTIFICATE_TOL
}

fn insert_certificate(out: &mut Map<String, Value>, cert: &DualCertificate<f64>) {
    let values = [
        json!(cert.feasibility_residuals.0),
        json!(cert.feasibility_residuals.1),
        json!(cert.complement_norms.0),
        json!(cert.lambda / cert.c),
        json!(cert.complement_norms.1),
        json!(1.0 / cert.c),
        json!(cert.neumann_iterations.0),
        json!(cert.neumann_iterations.1),
        json!(cert.contraction),
    ];
    for (key, v) in CERTIFICATE_KEYS.iter().zip(values) {
        out.insert((*key).into(), v);
    }
    for b in &cert.bound_diagnostics {
        out.insert(format!("{}_measured", b.name), json!(b.measured));
        out.insert(format!("{}_bound", b.name), json!(b.bound));
        out.insert(format!("{}_ok", b.name), json!(b.satisfied));
    }
}

pub fn run(args: &CertifyArgs) -> Result<i32, CliError> {
    let target = TargetPair::new(read_matrix(&args.sparse)?, read_matrix(&args.lowrank)?)?;
    let e = match &args.noise {
        Some(path) => read_matrix(path)?,
        None => Matrix64::zeros(target.shape().0, target.shape().1),
    };
    let (report, satisfied) = certify_report(&target, &e, args.lambda, args.mu, args.c)?;
    write_json(&args.report, &Value::Object(report.clone()))?;
    if satisfied {
        return Ok(EXIT_OK);
    }
    let failing: Vec<&str> = [
        ("alpha*beta < 1", "product_ok"),
        ("lambda <= upper limit", "lambda_upper_ok"),
        ("lambda >= lower limit", "lambda_lower_ok"),
    ]
    .iter()
    .filter(|(_, key)| report[*key] == json!(false))
    .map(|(name, _)| *name)
    .collect();
    if failing.is_empty() {
        eprintln!("certificate built but not all checks are satisfied");
    } else {
        eprintln!("recovery conditions fail: {}", failing.join(", "));
    }
    Ok(EXIT_PRECONDITION)
}
