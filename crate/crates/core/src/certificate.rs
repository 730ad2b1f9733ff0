//! Dual certificate `(Q_Ω̄, Q_T̄)` for a target decomposition, with checks of
//! its feasibility equations, complement caps and norm bounds.

use crate::error::{Error, Result};
use crate::incoherence::{check_conditions, profile, Formulation, IncoherenceProfile};
use crate::matrix::{frobenius_inner, Matrix};
use crate::norms::{l1, trace_norm};
use crate::rng::{gaussian_matrix, Seed, SeededRng};
use crate::scalar::Scalar;
use crate::subspaces::{neumann_inverse, orth_matrix, sign_matrix, NeumannSide, Projector, TargetPair};
use crate::svd::spectral_norm;

/// One norm inequality, measured against its bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck<T> {
    pub name: &'static str,
    pub measured: T,
    pub bound: T,
    pub satisfied: bool,
}

impl<T: Scalar> BoundCheck<T> {
    /// Satisfied when `measured ≤ bound·(1 + 1e-8) + 1e-10`.
    pub fn new(name: &'static str, measured: T, bound: T) -> Self {
        Self { name, measured, bound, satisfied: within_slack(measured, bound) }
    }
}

pub(crate) fn within_slack<T: Scalar>(measured: T, bound: T) -> bool {
    measured <= bound * T::c(1.0 + 1e-8) + T::c(1e-10)
}

/// Noise levels derived from the perturbation `E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationLevels<T> {
    /// `‖E‖_{2→2}`.
    pub eps_2to2: T,
    /// `‖E‖_v∞ + ‖P_T̄(E)‖_v∞`.
    pub eps_vinf: T,
    /// `‖P_T̄(E)‖_*`.
    pub eps_star_prime: T,
}

pub fn perturbation_levels<T: Scalar>(
    target: &TargetPair<T>,
    e: &Matrix<T>,
) -> Result<PerturbationLevels<T>> {
    let pte = target.space.project(e)?;
    Ok(PerturbationLevels {
        eps_2to2: spectral_norm(e)?,
        eps_vinf: e.max_abs() + pte.max_abs(),
        eps_star_prime: trace_norm(&pte)?,
    })
}

#[derive(Debug, Clone)]
pub struct DualCertificate<T> {
    /// Supported on `Ω̄`.
    pub q_omega: Matrix<T>,
    /// Lies in `T̄`.
    pub q_t: Matrix<T>,
    pub lambda: T,
    pub mu: T,
    pub c: T,
    pub e: Matrix<T>,
    pub levels: PerturbationLevels<T>,
    /// `‖P_Ω̄(Q) − λ·sign(X̄_S)‖_v∞` and `‖P_T̄(Q) − orth(X̄_L)‖_v∞`, `Q = Q_Ω̄ + Q_T̄ + μ⁻¹E`.
    pub feasibility_residuals: (T, T),
    /// `‖P_Ω̄⊥(Q)‖_v∞` and `‖P_T̄⊥(Q)‖_{2→2}`.
    pub complement_norms: (T, T),
    pub bound_diagnostics: Vec<BoundCheck<T>>,
    /// Neumann steps used for `Q_Ω̄` and `Q_T̄`.
    pub neumann_iterations: (usize, usize),
    /// Largest measured per-step contraction over both inversions.
    pub contraction: T,
    pub profile: IncoherenceProfile<T>,
}

impl<T: Scalar> DualCertificate<T> {
    /// `Q_Ω̄ + Q_T̄ + μ⁻¹E`.
    pub fn total(&self) -> Matrix<T> {
        &(&self.q_omega + &self.q_t) + &scaled_perturbation(&self.e, self.mu)
    }

    /// Complement caps `λ/c` and `1/c`, each with `slack`.
    pub fn complement_caps_hold(&self, slack: T) -> bool {
        self.complement_norms.0 <= self.lambda / self.c + slack
            && self.complement_norms.1 <= self.c.recip() + slack
    }

    pub fn all_bounds_satisfied(&self) -> bool {
        self.bound_diagnostics.iter().all(|b| b.satisfied)
    }
}

/// `μ⁻¹E`, exactly zero when `E` is zero regardless of `μ`.
fn scaled_perturbation<T: Scalar>(e: &Matrix<T>, mu: T) -> Matrix<T> {
    if e.is_zero() {
        Matrix::zeros(e.rows(), e.cols())
    } else {
        e.scale(mu.recip())
    }
}

/// Build the certificate by Neumann inversion at the profile's optimal `ρ`.
///
/// The recovery conditions are checked first (with the noise levels of `e`);
/// a failure is a [`Error::Precondition`].
pub fn build_certificate<T: Scalar>(
    target: &TargetPair<T>,
    e: &Matrix<T>,
    lambda: T,
    mu: T,
    c: T,
    tol: T,
) -> Result<DualCertificate<T>> {
    check_inputs(target, e, mu)?;
    let prof = profile(target, None)?;
    let levels = perturbation_levels(target, e)?;
    let verdict = check_conditions(
        &prof,
        Formulation::Regularized,
        c,
        lambda,
        Some(mu),
        levels.eps_2to2,
        levels.eps_vinf,
    )?;
    if !verdict.all_passed() {
        return Err(Error::Precondition(format!(
            "recovery conditions fail at rho={:e}: alpha*beta<1 {}, lambda<=upper {}, \
             lambda>=lower {} (window [{:e}, {:e}], lambda {:e})",
            prof.rho,
            verdict.passed.product,
            verdict.passed.lambda_upper,
            verdict.passed.lambda_lower,
            verdict.lambda_window.0,
            verdict.lambda_window.1,
            lambda
        )));
    }
    assemble(target, e, lambda, mu, c, tol, prof, levels)
}

/// [`build_certificate`] without the recovery-condition check. The Neumann
/// inversions still fail with [`Error::NonConvergence`] if they diverge.
pub fn build_certificate_unchecked<T: Scalar>(
    target: &TargetPair<T>,
    e: &Matrix<T>,
    lambda: T,
    mu: T,
    c: T,
    tol: T,
) -> Result<DualCertificate<T>> {
    check_inputs(target, e, mu)?;
    if !(c > T::one()) {
        return Err(Error::Parameter(format!("c must exceed 1, got {c}")));
    }
    let prof = profile(target, None)?;
    let levels = perturbation_levels(target, e)?;
    assemble(target, e, lambda, mu, c, tol, prof, levels)
}

fn check_inputs<T: Scalar>(target: &TargetPair<T>, e: &Matrix<T>, mu: T) -> Result<()> {
    e.ensure_finite()?;
    target.sparse.check_same_shape(e, "build_certificate")?;
    if !e.is_zero() && !(mu > T::zero()) {
        return Err(Error::Parameter(format!("mu must be positive when E is nonzero, got {mu}")));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn assemble<T: Scalar>(
    target: &TargetPair<T>,
    e: &Matrix<T>,
    lambda: T,
    mu: T,
    c: T,
    tol: T,
    prof: IncoherenceProfile<T>,
    levels: PerturbationLevels<T>,
) -> Result<DualCertificate<T>> {
    let support = &target.support;
    let space = &target.space;
    let sign = sign_matrix(&target.sparse);
    let orth = orth_matrix(space);
    let e_mu = scaled_perturbation(e, mu);

    let rhs_omega = &(&sign.scale(lambda) - &support.project(&orth)?)
        - &support.project(&space.project_complement(&e_mu)?)?;
    let rhs_t = &(&orth - &space.project(&sign)?.scale(lambda))
        - &space.project(&support.project_complement(&e_mu)?)?;
    let sol_omega = neumann_inverse(support, space, NeumannSide::Support, &rhs_omega, tol)?;
    let sol_t = neumann_inverse(support, space, NeumannSide::Tangent, &rhs_t, tol)?;

    let q_omega = sol_omega.x;
    let q_t = sol_t.x;
    let q = &(&q_omega + &q_t) + &e_mu;
    let feasibility_residuals =
        ((&support.project(&q)? - &sign.scale(lambda)).max_abs(), (&space.project(&q)? - &orth).max_abs());
    let complement_norms =
        (support.project_complement(&q)?.max_abs(), spectral_norm(&space.project_complement(&q)?)?);

    let mut cert = DualCertificate {
        q_omega,
        q_t,
        lambda,
        mu,
        c,
        e: e.clone(),
        levels,
        feasibility_residuals,
        complement_norms,
        bound_diagnostics: Vec::new(),
        neumann_iterations: (sol_omega.iterations, sol_t.iterations),
        contraction: sol_omega.contraction.max(sol_t.contraction),
        profile: prof,
    };
    cert.bound_diagnostics = verify_bounds(&cert, &cert.profile)?;
    Ok(cert)
}

/// The seven norm bounds on `Q_Ω̄`, `Q_T̄`, measured against their limits.
pub fn verify_bounds<T: Scalar>(
    cert: &DualCertificate<T>,
    profile: &IncoherenceProfile<T>,
) -> Result<Vec<BoundCheck<T>>> {
    let (alpha, beta, gamma) = (profile.alpha, profile.beta, profile.gamma);
    let lambda = cert.lambda;
    let inv_mu = |eps: T| {
        if eps.is_zero() {
            T::zero()
        } else {
            eps / cert.mu
        }
    };
    let e22 = inv_mu(cert.levels.eps_2to2);
    let evi = inv_mu(cert.levels.eps_vinf);
    let k = lambda + gamma + evi;
    let d = T::one() - alpha * beta;
    let two = T::c(2.0);
    let r = T::from_usize_lossy(profile.rank);
    let kbar = T::from_usize_lossy(profile.support_size);

    let qo_22 = spectral_norm(&cert.q_omega)?;
    let qt_22 = spectral_norm(&cert.q_t)?;
    let qt_star = trace_norm(&cert.q_t)?;
    let qt_inf = cert.q_t.max_abs();
    let qo_inf = cert.q_omega.max_abs();
    let qo_l1 = l1(&cert.q_omega);
    let sum_sq = (&cert.q_omega + &cert.q_t).frobenius_norm().powi(2);
    let lambda_term =
        if lambda > T::zero() { lambda * qo_l1 * (T::one() + evi / lambda) } else { evi * qo_l1 };

    Ok(vec![
        BoundCheck::new("q_omega_2to2", qo_22, alpha / d * k),
        BoundCheck::new("q_t_2to2", qt_22, two * alpha / d * k + T::one() + two * e22),
        BoundCheck::new("q_t_trace", qt_star, two * r * qt_22),
        BoundCheck::new("q_t_vinf", qt_inf, k / d),
        BoundCheck::new("q_omega_vinf", qo_inf, two * k / d),
        BoundCheck::new("q_omega_v1", qo_l1, kbar * qo_inf),
        BoundCheck::new("q_sum_frobenius_sq", sum_sq, lambda_term + qt_star * (T::one() + two * e22)),
    ])
}

/// Outcome of checking that `Q` is a simultaneous subgradient and that the
/// resulting lower bound on the objective gap holds at sampled points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubgradientReport<T> {
    /// `P_Ω̄(Q) = λ·sign(X̄_S)` and `‖Q‖_v∞ ≤ λ`.
    pub in_l1_subdifferential: bool,
    /// `P_T̄(Q) = orth(X̄_L)` and `‖Q‖_{2→2} ≤ 1`.
    pub in_trace_subdifferential: bool,
    /// `‖P_Ω̄⊥(Q)‖_v∞ ≤ λ/c` and `‖P_T̄⊥(Q)‖_{2→2} ≤ 1/c`.
    pub complement_caps: bool,
    /// Largest `rhs − lhs` of the gap inequality over the probes; negative
    /// means every probe satisfied it strictly (`−∞` with no probes).
    pub worst_violation: T,
}

/// `[⟨Q, ΔS + ΔL⟩ + (1 − 1/c)(λ‖P_Ω̄⊥ΔS‖_v1 + ‖P_T̄⊥ΔL‖_*)] − [g(X) − g(X̄)]`
/// with `g = λ‖·‖_v1 + ‖·‖_*`.
pub fn subgradient_gap<T: Scalar>(
    target: &TargetPair<T>,
    q: &Matrix<T>,
    lambda: T,
    c: T,
    xs: &Matrix<T>,
    xl: &Matrix<T>,
) -> Result<T> {
    let ds = xs.try_sub(&target.sparse)?;
    let dl = xl.try_sub(&target.low_rank)?;
    let g = |s: &Matrix<T>, l: &Matrix<T>| -> Result<T> { Ok(lambda * l1(s) + trace_norm(l)?) };
    let lhs = g(xs, xl)? - g(&target.sparse, &target.low_rank)?;
    let rhs = frobenius_inner(q, &(&ds + &dl))?
        + (T::one() - c.recip())
            * (lambda * l1(&target.support.project_complement(&ds)?)
                + trace_norm(&target.space.project_complement(&dl)?)?);
    Ok(rhs - lhs)
}

/// Check subdifferential membership of `q` and sample `probes` random points.
///
/// Probe `k` perturbs both components by Gaussian matrices scaled by
/// `10^u` with `u` uniform in `[−3, 1]`, so both small and large steps are seen.
pub fn subgradient_check<T: Scalar>(
    target: &TargetPair<T>,
    q: &Matrix<T>,
    lambda: T,
    c: T,
    probes: usize,
    seed: Seed,
) -> Result<SubgradientReport<T>> {
    if !(c > T::one()) {
        return Err(Error::Parameter(format!("c must exceed 1, got {c}")));
    }
    target.sparse.check_same_shape(q, "subgradient_check")?;
    let tol = T::floor_tol(1e-8);
    let rel = T::c(1.0 + 1e-9);
    let support = &target.support;
    let space = &target.space;
    let sign = sign_matrix(&target.sparse);
    let orth = orth_matrix(space);

    let l1_eq = (&support.project(q)? - &sign.scale(lambda)).max_abs() <= tol * lambda.max(T::one());
    let in_l1 = l1_eq && q.max_abs() <= lambda * rel + tol;
    let tr_eq = (&space.project(q)? - &orth).max_abs() <= tol;
    let in_trace = tr_eq && spectral_norm(q)? <= rel + tol;
    let caps = support.project_complement(q)?.max_abs() <= lambda / c * rel + tol
        && spectral_norm(&space.project_complement(q)?)? <= c.recip() * rel + tol;

    let (m, n) = target.shape();
    let mut rng = SeededRng::new(seed);
    let mut worst = T::neg_infinity();
    for k in 0..probes {
        let scale_s = T::c(10f64.powf(rng.uniform_in(-3.0, 1.0)));
        let scale_l = T::c(10f64.powf(rng.uniform_in(-3.0, 1.0)));
        let ds = gaussian_matrix::<T>(m, n, seed.derive(2 * k as u64 + 1)).scale(scale_s);
        let dl = gaussian_matrix::<T>(m, n, seed.derive(2 * k as u64 + 2)).scale(scale_l);
        let xs = &target.sparse + &ds;
        let xl = &target.low_rank + &dl;
        worst = worst.max(subgradient_gap(target, q, lambda, c, &xs, &xl)?);
    }
    Ok(SubgradientReport {
        in_l1_subdifferential: in_l1,
        in_trace_subdifferential: in_trace,
        complement_caps: caps,
        worst_violation: worst,
    })
}
