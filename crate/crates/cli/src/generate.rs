use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Serialize;
use slr_core::{
    check_identifiability, gaussian_matrix, gen_incoherent_target, gen_instance, perturbation_levels,
    profile, GeneratedInstance, InstanceSpec, MagnitudeLaw, Matrix64, Seed,
};

use crate::io::{write_json, write_matrix};
use crate::{CliError, EXIT_OK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Uniform support draws with replacement and random singular subspaces.
    Uniform,
    /// At most one support cell per row and column, flat singular vectors.
    Incoherent,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub rank: usize,
    /// Support draws (uniform model) or support size (incoherent model).
    #[arg(long)]
    pub ktilde: usize,
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    #[arg(long)]
    pub seed: u64,
    /// Files written: PREFIX_{y,sparse,lowrank,noise}.csv and PREFIX_profile.json.
    #[arg(long)]
    pub out_prefix: PathBuf,
    #[arg(long, value_enum, default_value_t = Model::Uniform)]
    pub model: Model,
    /// Magnitude of the sparse entries.
    #[arg(long, default_value_t = 10.0)]
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceSummary {
    pub m: usize,
    pub n: usize,
    pub rank: usize,
    pub ktilde: usize,
    pub sigma: f64,
    pub seed: u64,
    pub model: Model,
    pub amplitude: f64,
    pub support_size: usize,
    pub rho: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub alpha_beta: f64,
    pub identifiable: bool,
    pub eps_2to2: f64,
    pub eps_vinf: f64,
    pub eps_star_prime: f64,
}

/// Noise stream of the incoherent model, independent of the target streams.
const NOISE_LABEL: u64 = 0x6e6f697365;

pub fn generate(args: &GenerateArgs) -> Result<GeneratedInstance<f64>, CliError> {
    let spec = InstanceSpec {
        m: args.m,
        n: args.n,
        rank: args.rank,
        ktilde: args.ktilde,
        magnitude: MagnitudeLaw::Fixed { amplitude: args.amplitude },
        sigma: args.sigma,
        seed: Seed(args.seed),
    };
    match args.model {
        Model::Uniform => Ok(gen_instance(&spec)?),
        Model::Incoherent => {
            spec.validate()?;
            let target = gen_incoherent_target::<f64>(
                args.m,
                args.n,
                args.rank,
                args.ktilde,
                spec.magnitude,
                spec.seed,
            )?;
            let e = if args.sigma > 0.0 {
                gaussian_matrix::<f64>(args.m, args.n, spec.seed.derive(NOISE_LABEL)).scale(args.sigma)
            } else {
                Matrix64::zeros(args.m, args.n)
            };
            let y = &target.sum() + &e;
            Ok(GeneratedInstance {
                spec,
                y,
                profile: profile(&target, None)?,
                levels: perturbation_levels(&target, &e)?,
                target,
                e,
            })
        }
    }
}

pub fn output_path(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_os_string();
    name.push(suffix);
    PathBuf::from(name)
}

pub fn run(args: &GenerateArgs) -> Result<i32, CliError> {
    let inst = generate(args)?;
    let p = &inst.profile;
    write_matrix(&output_path(&args.out_prefix, "_y.csv"), &inst.y)?;
    write_matrix(&output_path(&args.out_prefix, "_sparse.csv"), &inst.target.sparse)?;
    write_matrix(&output_path(&args.out_prefix, "_lowrank.csv"), &inst.target.low_rank)?;
    write_matrix(&output_path(&args.out_prefix, "_noise.csv"), &inst.e)?;
    let summary = InstanceSummary {
        m: args.m,
        n: args.n,
        rank: args.rank,
        ktilde: args.ktilde,
        sigma: args.sigma,
        seed: args.seed,
        model: args.model,
        amplitude: args.amplitude,
        support_size: p.support_size,
        rho: p.rho,
        alpha: p.alpha,
        beta: p.beta,
        gamma: p.gamma,
        alpha_beta: p.product,
        identifiable: check_identifiability(p),
        eps_2to2: inst.levels.eps_2to2,
        eps_vinf: inst.levels.eps_vinf,
        eps_star_prime: inst.levels.eps_star_prime,
    };
    write_json(&output_path(&args.out_prefix, "_profile.json"), &summary)?;
    Ok(EXIT_OK)
}
