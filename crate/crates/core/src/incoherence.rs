//! Rank-sparsity incoherence: `α(ρ)`, `β(ρ)`, `γ`, the balancing parameter,
//! and the recovery conditions on `(λ, μ)`.

use crate::error::{Error, Result};
use crate::norms::{induced_norm, InducedMode};
use crate::scalar::Scalar;
use crate::subspaces::{orth_matrix, TargetPair};

/// Which convex program a condition or parameter rule refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    /// Residual constrained in `‖·‖_v1` and `‖·‖_*`.
    Constrained,
    /// Squared Frobenius residual penalized with weight `1/(2μ)`.
    Regularized,
}

impl Formulation {
    pub fn as_str(self) -> &'static str {
        match self {
            Formulation::Constrained => "constrained",
            Formulation::Regularized => "regularized",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IncoherenceProfile<T> {
    /// `‖sign(X̄_S)‖_{1→1}`: largest support count in a column.
    pub a: T,
    /// `‖sign(X̄_S)‖_{∞→∞}`: largest support count in a row.
    pub b: T,
    /// `‖ŪŪᵀ‖_v∞`.
    pub u: T,
    /// `‖V̄V̄ᵀ‖_v∞`.
    pub v: T,
    /// `‖Ū‖_{2→∞}·‖V̄‖_{2→∞}`.
    pub w: T,
    /// `‖ŪV̄ᵀ‖_v∞`.
    pub gamma: T,
    /// Balancing parameter the `*` fields are evaluated at.
    pub rho: T,
    pub alpha: T,
    pub beta: T,
    /// `α(ρ)·β(ρ)`.
    pub product: T,
    pub m0: usize,
    pub n0: usize,
    /// `k̄ = |supp(X̄_S)|`.
    pub support_size: usize,
    pub rank: usize,
    pub shape: (usize, usize),
    /// `‖Ū‖_v∞` and `‖V̄‖_v∞`.
    pub u_max_entry: T,
    pub v_max_entry: T,
}

impl<T: Scalar> IncoherenceProfile<T> {
    /// `max(ρ·a, b/ρ)`.
    pub fn alpha_at(&self, rho: T) -> T {
        (rho * self.a).max(self.b / rho)
    }

    /// `u/ρ + v·ρ + w`.
    pub fn beta_at(&self, rho: T) -> T {
        self.u / rho + self.v * rho + self.w
    }

    /// Same profile re-evaluated at another `ρ`.
    pub fn at_rho(&self, rho: T) -> Result<Self> {
        check_rho(rho)?;
        let mut p = self.clone();
        p.rho = rho;
        p.alpha = self.alpha_at(rho);
        p.beta = self.beta_at(rho);
        p.product = p.alpha * p.beta;
        Ok(p)
    }
}

/// Profile of `target`, evaluated at `rho` or at [`optimal_rho`] when `None`.
pub fn profile<T: Scalar>(target: &TargetPair<T>, rho: Option<T>) -> Result<IncoherenceProfile<T>> {
    let support = &target.support;
    let space = &target.space;
    let m0 = support.max_per_column();
    let n0 = support.max_per_row();
    let a = T::from_usize_lossy(m0);
    let b = T::from_usize_lossy(n0);
    let (u, v, w, gamma, u_max, v_max) = if space.rank() == 0 {
        (T::zero(), T::zero(), T::zero(), T::zero(), T::zero(), T::zero())
    } else {
        let uu = space.u().matmul_t(space.u())?.max_abs();
        let vv = space.v().matmul_t(space.v())?.max_abs();
        let w =
            induced_norm(space.u(), InducedMode::TwoToInf)? * induced_norm(space.v(), InducedMode::TwoToInf)?;
        let gamma = orth_matrix(space).max_abs();
        (uu, vv, w, gamma, space.u().max_abs(), space.v().max_abs())
    };
    let base = IncoherenceProfile {
        a,
        b,
        u,
        v,
        w,
        gamma,
        rho: T::one(),
        alpha: T::zero(),
        beta: T::zero(),
        product: T::zero(),
        m0,
        n0,
        support_size: support.len(),
        rank: space.rank(),
        shape: target.shape(),
        u_max_entry: u_max,
        v_max_entry: v_max,
    };
    let rho = match rho {
        Some(r) => r,
        None => optimal_rho(a, b)?,
    };
    base.at_rho(rho)
}

/// Minimizer `√(b/a)` of `α(ρ)`, or 1 when either count is zero.
pub fn optimal_rho<T: Scalar>(a: T, b: T) -> Result<T> {
    if !(a >= T::zero()) || !(b >= T::zero()) {
        return Err(Error::Parameter(format!("column/row counts must be nonnegative, got a={a}, b={b}")));
    }
    if a.is_zero() || b.is_zero() {
        return Ok(T::one());
    }
    Ok((b / a).sqrt())
}

/// `α(ρ)·β(ρ) < 1` at the profile's `ρ`: the support and tangent space meet only at 0.
pub fn check_identifiability<T: Scalar>(profile: &IncoherenceProfile<T>) -> bool {
    profile.product < T::one()
}

/// Per-inequality outcome of [`check_conditions`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionFlags {
    /// `αβ < 1`.
    pub product: bool,
    /// `λ` at or below the upper limit.
    pub lambda_upper: bool,
    /// `λ` at or above the lower limit, with a positive denominator.
    pub lambda_lower: bool,
}

impl ConditionFlags {
    pub fn all(&self) -> bool {
        self.product && self.lambda_upper && self.lambda_lower
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionVerdict<T> {
    pub formulation: Formulation,
    pub rho: T,
    pub c: T,
    pub lambda: T,
    pub mu: Option<T>,
    pub eps_2to2: T,
    pub eps_vinf: T,
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub passed: ConditionFlags,
    /// `[λ_min, λ_max]` implied by the two `λ` inequalities. `λ_min` is `+∞`
    /// when the lower-limit denominator is not positive.
    pub lambda_window: (T, T),
}

impl<T: Scalar> ConditionVerdict<T> {
    pub fn window_nonempty(&self) -> bool {
        self.passed.product && self.lambda_window.0 <= self.lambda_window.1
    }

    pub fn all_passed(&self) -> bool {
        self.passed.all()
    }
}

/// `μ⁻¹·ε`, taken as 0 when `ε = 0` so that `μ = 0` is usable without noise.
fn scaled_by_mu<T: Scalar>(eps: T, mu: T) -> T {
    if eps.is_zero() {
        T::zero()
    } else {
        eps / mu
    }
}

/// Evaluate the three recovery conditions at the profile's `ρ`.
///
/// For [`Formulation::Constrained`] the `ε` terms are zeroed and `mu` is ignored.
pub fn check_conditions<T: Scalar>(
    profile: &IncoherenceProfile<T>,
    formulation: Formulation,
    c: T,
    lambda: T,
    mu: Option<T>,
    eps_2to2: T,
    eps_vinf: T,
) -> Result<ConditionVerdict<T>> {
    if !(c > T::one()) {
        return Err(Error::Parameter(format!("c must exceed 1, got {c}")));
    }
    let (mu, e22, evi) = match formulation {
        Formulation::Constrained => (None, T::zero(), T::zero()),
        Formulation::Regularized => {
            let mu = mu.ok_or_else(|| Error::Parameter("regularized conditions need mu".into()))?;
            if !(mu >= T::zero()) {
                return Err(Error::Parameter(format!("mu must be nonnegative, got {mu}")));
            }
            if !(eps_2to2 >= T::zero()) || !(eps_vinf >= T::zero()) {
                return Err(Error::Parameter("noise levels must be nonnegative".into()));
            }
            (Some(mu), eps_2to2, eps_vinf)
        }
    };
    let mu_val = mu.unwrap_or(T::one());
    let e22_mu = scaled_by_mu(e22, mu_val);
    let evi_mu = scaled_by_mu(evi, mu_val);
    let (alpha, beta, gamma) = (profile.alpha, profile.beta, profile.gamma);
    let ab = alpha * beta;
    let two = T::c(2.0);

    let upper_num = (T::one() - ab) * (T::one() - c * e22_mu) - c * alpha * evi_mu - c * alpha * gamma;
    let lambda_upper = c * alpha * lambda <= upper_num;
    let hi = if alpha > T::zero() {
        upper_num / (c * alpha)
    } else if upper_num >= T::zero() {
        T::infinity()
    } else {
        T::neg_infinity()
    };

    let denom = T::one() - ab - c * ab;
    let lower_num = c * (gamma + (two - ab) * evi_mu);
    let (lambda_lower, lo) = if denom > T::zero() {
        let lo = lower_num / denom;
        (lambda >= lo, lo)
    } else {
        (false, T::infinity())
    };

    Ok(ConditionVerdict {
        formulation,
        rho: profile.rho,
        c,
        lambda,
        mu,
        eps_2to2: e22,
        eps_vinf: evi,
        alpha,
        beta,
        gamma,
        passed: ConditionFlags { product: ab < T::one(), lambda_upper, lambda_lower },
        lambda_window: (lo, hi),
    })
}

/// Parameters chosen by the closed-form rule for `c = 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplifiedParameters<T> {
    pub lambda: T,
    /// Only set for the regularized program.
    pub mu: Option<T>,
    /// Interval the rule requires `λ` to lie in.
    pub lambda_interval: (T, T),
}

/// Relative slack on the interval check, for premises that hold with equality.
const INTERVAL_REL_TOL: f64 = 1e-12;

/// Closed-form `(λ, μ)` valid when the profile is incoherent enough.
///
/// Regularized: needs `αγ ≤ 1/41` and `αβ ≤ 3/41`; returns `λ = (15/82)/α`,
/// `μ = max(4ε_{2→2}, (2/15)ε_v∞/λ)`. Constrained: needs `αγ ≤ 1/15` and
/// `αβ ≤ 1/5`; returns `λ = √((5/3)γ/α)`.
pub fn simplified_parameters<T: Scalar>(
    profile: &IncoherenceProfile<T>,
    formulation: Formulation,
    eps_2to2: T,
    eps_vinf: T,
) -> Result<SimplifiedParameters<T>> {
    let (alpha, beta, gamma) = (profile.alpha, profile.beta, profile.gamma);
    let ag = alpha * gamma;
    let ab = alpha * beta;
    let (ag_cap, ab_cap) = match formulation {
        Formulation::Regularized => (1.0 / 41.0, 3.0 / 41.0),
        Formulation::Constrained => (1.0 / 15.0, 1.0 / 5.0),
    };
    let (ag_label, ab_label) = match formulation {
        Formulation::Regularized => ("1/41", "3/41"),
        Formulation::Constrained => ("1/15", "1/5"),
    };
    if ag > T::c(ag_cap) {
        return Err(Error::Precondition(format!("alpha*gamma = {ag:e} exceeds {ag_label}")));
    }
    if ab > T::c(ab_cap) {
        return Err(Error::Precondition(format!("alpha*beta = {ab:e} exceeds {ab_label}")));
    }
    if !(alpha > T::zero()) {
        return Err(Error::Precondition(
            "alpha = 0 (empty support): the rule gives an unbounded lambda".into(),
        ));
    }
    if !(eps_2to2 >= T::zero()) || !(eps_vinf >= T::zero()) {
        return Err(Error::Parameter("noise levels must be nonnegative".into()));
    }
    let (lambda, mu, lo, hi) = match formulation {
        Formulation::Regularized => {
            let lambda = T::c(15.0 / 82.0) / alpha;
            // (15/2)·ε_v∞/λ keeps c·α·μ⁻¹·ε_v∞ ≤ 2/41, which both λ limits need;
            // it also dominates (2/15)·ε_v∞/λ.
            let mu = (T::c(4.0) * eps_2to2).max(T::c(7.5) * eps_vinf / lambda);
            (lambda, Some(mu), T::c(7.5) * gamma, lambda)
        }
        Formulation::Constrained => {
            let lambda = (T::c(5.0 / 3.0) * gamma / alpha).sqrt();
            (lambda, None, T::c(5.0) * gamma, (T::c(3.0) * alpha).recip())
        }
    };
    let slack = T::c(INTERVAL_REL_TOL);
    if lambda < lo * (T::one() - slack) || lambda > hi * (T::one() + slack) {
        return Err(Error::Precondition(format!("lambda = {lambda:e} outside [{lo:e}, {hi:e}]")));
    }
    Ok(SimplifiedParameters { lambda, mu, lambda_interval: (lo, hi) })
}

/// Worst-case incoherence bounds from support counts and basis entry sizes,
/// evaluated at `ρ = √(n/m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncoherenceUpperBounds<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    /// `max(m0·r̄/m, n0·r̄/n)`.
    pub c1: T,
    /// `max(m·‖Ū‖²_v∞, n·‖V̄‖²_v∞)`.
    pub c2: T,
    pub rho: T,
}

pub fn incoherence_upper_bounds<T: Scalar>(
    m: usize,
    n: usize,
    rank: usize,
    m0: usize,
    n0: usize,
    u_max_entry: T,
    v_max_entry: T,
) -> IncoherenceUpperBounds<T> {
    let (mf, nf, r) = (T::from_usize_lossy(m), T::from_usize_lossy(n), T::from_usize_lossy(rank));
    let c1 = (T::from_usize_lossy(m0) * r / mf).max(T::from_usize_lossy(n0) * r / nf);
    let c2 = (mf * u_max_entry * u_max_entry).max(nf * v_max_entry * v_max_entry);
    let root = (mf * nf).sqrt();
    let alpha = if rank == 0 { T::infinity() } else { c1 / r * root };
    IncoherenceUpperBounds {
        alpha,
        beta: T::c(3.0) * c2 * r / root,
        gamma: c2 * r / root,
        c1,
        c2,
        rho: (nf / mf).sqrt(),
    }
}

fn check_rho<T: Scalar>(rho: T) -> Result<()> {
    if !(rho > T::zero()) || !rho.is_finite() {
        return Err(Error::Parameter(format!("rho must be positive, got {rho}")));
    }
    Ok(())
}
