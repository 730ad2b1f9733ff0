//! Sparse plus low-rank matrix decomposition.
//!
//! Splits an observed matrix `Y` into a sparse part `X_S` and a low-rank
//! part `X_L` by solving either the constrained program
//! `min λ‖X_S‖_v1 + ‖X_L‖_*  s.t.  ‖X_S + X_L − Y‖ ≤ ε` or the regularized
//! program `min (1/2μ)‖X_S + X_L − Y‖_F² + λ‖X_S‖_v1 + ‖X_L‖_*`, and
//! evaluates the rank-sparsity incoherence quantities, recovery conditions,
//! error bounds, and dual certificates that govern when the split is exact.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below are the double-precision instantiations used by the
//! command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificate;
pub mod error;
pub mod incoherence;
mod lp;
pub mod matrix;
pub mod norms;
pub mod prox;
pub mod rng;
pub mod scalar;
pub mod solvers;
pub mod subspaces;
pub mod svd;
pub mod synth;

pub use certificate::{
    build_certificate, build_certificate_unchecked, perturbation_levels, subgradient_check, subgradient_gap,
    verify_bounds, BoundCheck, DualCertificate, PerturbationLevels, SubgradientReport,
};
pub use error::{Error, Result};
pub use incoherence::{
    check_conditions, check_identifiability, incoherence_upper_bounds, optimal_rho, profile,
    simplified_parameters, ConditionFlags, ConditionVerdict, Formulation, IncoherenceProfile,
    IncoherenceUpperBounds, SimplifiedParameters,
};
pub use matrix::{frobenius_inner, Matrix};
pub use norms::{entrywise_norm, flat_norm, induced_norm, sharp_norm, trace_norm, EntrywiseP, InducedMode};
pub use prox::{clip_entries, project_l1_ball, project_nuclear_ball, prox_l1_box, soft_threshold, svt};
pub use rng::{gaussian_matrix, Seed, SeededRng};
pub use scalar::Scalar;
pub use solvers::{
    constrained_error_bound, constrained_objective, regularized_error_bounds, regularized_objective,
    solve_constrained, solve_regularized, AdmmDiagnostics, ConstrainedConfig, ErrorBounds, KktResiduals,
    RecoveryErrors, RegularizedBounds, RegularizedConfig, SolveReport, STALL_SWEEPS,
};
pub use subspaces::{
    neumann_inverse, orth_matrix, project_support, project_tangent, sign_matrix, NeumannSide,
    NeumannSolution, Projector, RowColSpace, SupportSet, TargetPair,
};
pub use svd::{svd, SvdFactors};
pub use synth::{
    gen_flat_subspaces, gen_incoherent_target, gen_instance, gen_permutation_support,
    gen_row_clustered_support, gen_subspaces, gen_support, GeneratedInstance, InstanceSpec, MagnitudeLaw,
};

pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type SvdFactors64 = SvdFactors<f64>;
