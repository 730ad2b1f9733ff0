//! Solvers for the constrained and regularized decomposition programs, plus
//! the recovery-error bounds used to judge their output.
//!
//! * [`solve_regularized`] minimizes
//!   `(1/2μ)‖X_S + X_L − Y‖_F² + λ‖X_S‖_v1 + ‖X_L‖_*` (optionally with
//!   `‖X_S − Y‖_v∞ ≤ b`) by exact two-block coordinate descent.
//! * [`solve_constrained`] minimizes `λ‖X_S‖_v1 + ‖X_L‖_*` subject to
//!   `‖X_S + X_L − Y‖_v1 ≤ ε_v1`, `‖X_S + X_L − Y‖_* ≤ ε_*` (optionally with
//!   `‖X_L‖_v∞ ≤ b`) by ADMM.
//!
//! Both are deterministic: no randomness is used internally.

use crate::certificate::PerturbationLevels;
use crate::error::{Error, Result};
use crate::incoherence::{Formulation, IncoherenceProfile};
use crate::matrix::Matrix;
use crate::norms::{l1, trace_norm};
use crate::prox::{clip_entries, project_l1_ball, project_nuclear_ball, prox_l1_box, soft_threshold};
use crate::scalar::Scalar;
use crate::subspaces::{project_tangent, RowColSpace, TargetPair};
use crate::svd::{spectral_norm, svd, SvdFactors};

/// Consecutive small-decrease sweeps required before the regularized solver stops.
pub const STALL_SWEEPS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizedConfig<T> {
    pub lambda: T,
    pub mu: T,
    /// Box radius on `‖X_S − Y‖_v∞`; `∞` disables it.
    pub b: T,
    /// Stop once the objective decreases by at most `tol·max(|f|, 1)` in
    /// [`STALL_SWEEPS`] consecutive sweeps.
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Scalar> RegularizedConfig<T> {
    pub fn new(lambda: T, mu: T) -> Self {
        Self { lambda, mu, b: T::infinity(), tol: T::floor_tol(1e-12), max_iter: 100_000 }
    }

    pub fn validate(&self) -> Result<()> {
        positive("lambda", self.lambda)?;
        positive("mu", self.mu)?;
        positive("b", self.b)?;
        nonneg("tol", self.tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstrainedConfig<T> {
    pub lambda: T,
    pub eps_v1: T,
    pub eps_star: T,
    /// Box radius on `‖X_L‖_v∞`; `∞` disables it.
    pub b: T,
    pub penalty: T,
    /// Rebalance the penalty when one residual exceeds the other tenfold.
    pub adaptive_penalty: bool,
    pub tol_primal: T,
    pub tol_dual: T,
    pub max_iter: usize,
    pub dykstra_iters: usize,
    pub dykstra_tol: T,
}

impl<T: Scalar> ConstrainedConfig<T> {
    pub fn new(lambda: T, eps_v1: T, eps_star: T) -> Self {
        Self {
            lambda,
            eps_v1,
            eps_star,
            b: T::infinity(),
            penalty: T::one(),
            adaptive_penalty: false,
            tol_primal: T::floor_tol(1e-9),
            tol_dual: T::floor_tol(1e-9),
            max_iter: 100_000,
            dykstra_iters: 500,
            dykstra_tol: T::floor_tol(1e-11),
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("lambda", self.lambda)?;
        nonneg("eps_v1", self.eps_v1)?;
        nonneg("eps_star", self.eps_star)?;
        positive("b", self.b)?;
        positive("penalty", self.penalty)?;
        nonneg("tol_primal", self.tol_primal)?;
        nonneg("tol_dual", self.tol_dual)?;
        nonneg("dykstra_tol", self.dykstra_tol)
    }

    /// True when the feasible residual set is `{0}`.
    pub fn is_exact(&self) -> bool {
        self.eps_v1.is_zero() || self.eps_star.is_zero()
    }
}

/// ADMM state at exit.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmDiagnostics<T> {
    pub primal_residual: T,
    pub dual_residual: T,
    pub penalty: T,
    pub penalty_updates: usize,
    /// Intersection projections that hit `dykstra_iters` before `dykstra_tol`.
    pub dykstra_warnings: usize,
}

/// Largest violation of the first-order conditions of the regularized program.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktResiduals<T> {
    pub sparse: T,
    pub low_rank: T,
}

/// Errors of an estimate against a known target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryErrors<T> {
    pub sparse_v1: T,
    pub sparse_v2: T,
    pub sparse_star: T,
    pub low_rank_v1: T,
    pub low_rank_v2: T,
    pub low_rank_star: T,
    /// `‖Δ_S‖_F / ‖X̄_S‖_F`, or the absolute error when `X̄_S = 0`.
    pub sparse_relative: T,
    pub low_rank_relative: T,
}

impl<T: Scalar> RecoveryErrors<T> {
    pub fn measure(sparse: &Matrix<T>, low_rank: &Matrix<T>, target: &TargetPair<T>) -> Result<Self> {
        let ds = sparse.try_sub(&target.sparse)?;
        let dl = low_rank.try_sub(&target.low_rank)?;
        Ok(Self {
            sparse_v1: l1(&ds),
            sparse_v2: ds.frobenius_norm(),
            sparse_star: trace_norm(&ds)?,
            low_rank_v1: l1(&dl),
            low_rank_v2: dl.frobenius_norm(),
            low_rank_star: trace_norm(&dl)?,
            sparse_relative: relative(&ds, &target.sparse),
            low_rank_relative: relative(&dl, &target.low_rank),
        })
    }

    pub fn max_v1(&self) -> T {
        self.sparse_v1.max(self.low_rank_v1)
    }
}

fn relative<T: Scalar>(delta: &Matrix<T>, reference: &Matrix<T>) -> T {
    let r = reference.frobenius_norm();
    if r.is_zero() {
        delta.frobenius_norm()
    } else {
        delta.frobenius_norm() / r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizedBounds<T> {
    pub r_prime: T,
    pub sparse_v1: T,
    /// `min{v1, √(2b·v1)}`.
    pub sparse_v2: T,
    pub low_rank_star: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ErrorBounds<T> {
    Constrained { max_v1: T },
    Regularized(RegularizedBounds<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<T> {
    pub formulation: Formulation,
    pub sparse: Matrix<T>,
    pub low_rank: Matrix<T>,
    pub iterations: usize,
    pub objective: T,
    /// Objective after every iteration.
    pub objective_trace: Vec<T>,
    pub residual_v1: T,
    pub residual_star: T,
    pub residual_v2: T,
    pub converged: bool,
    pub admm: Option<AdmmDiagnostics<T>>,
    pub kkt: Option<KktResiduals<T>>,
    pub recovery: Option<RecoveryErrors<T>>,
    pub bounds: Option<ErrorBounds<T>>,
}

impl<T: Scalar> SolveReport<T> {
    /// Fill `recovery` from a known target.
    pub fn attach_target(&mut self, target: &TargetPair<T>) -> Result<()> {
        self.recovery = Some(RecoveryErrors::measure(&self.sparse, &self.low_rank, target)?);
        Ok(())
    }

    /// Recompute `(‖R‖_v1, ‖R‖_*, ‖R‖_F)` for `R = X̂_S + X̂_L − Y`.
    pub fn recompute_residuals(&self, y: &Matrix<T>) -> Result<(T, T, T)> {
        residual_norms(&self.sparse, &self.low_rank, y)
    }
}

fn residual_norms<T: Scalar>(s: &Matrix<T>, l: &Matrix<T>, y: &Matrix<T>) -> Result<(T, T, T)> {
    let r = s.try_add(l)?.try_sub(y)?;
    Ok((l1(&r), trace_norm(&r)?, r.frobenius_norm()))
}

/// Regularized objective `(1/2μ)‖S + L − Y‖_F² + λ‖S‖_v1 + ‖L‖_*`.
pub fn regularized_objective<T: Scalar>(
    y: &Matrix<T>,
    s: &Matrix<T>,
    l: &Matrix<T>,
    lambda: T,
    mu: T,
) -> Result<T> {
    let r = s.try_add(l)?.try_sub(y)?;
    let fit = r.frobenius_norm().powi(2) / (T::c(2.0) * mu);
    Ok(fit + lambda * l1(s) + trace_norm(l)?)
}

/// Constrained objective `λ‖S‖_v1 + ‖L‖_*`.
pub fn constrained_objective<T: Scalar>(s: &Matrix<T>, l: &Matrix<T>, lambda: T) -> Result<T> {
    Ok(lambda * l1(s) + trace_norm(l)?)
}

/// `svt` that also returns the factors of its input and the trace norm of its output.
fn svt_factored<T: Scalar>(m: &Matrix<T>, tau: T) -> Result<(Matrix<T>, T, SvdFactors<T>)> {
    let f = svd(m)?;
    let s: Vec<T> = f.singular_values.iter().map(|&x| (x - tau).max(T::zero())).collect();
    let trace = s.iter().fold(T::zero(), |acc, &x| acc + x);
    Ok((f.reassemble(&s), trace, f))
}

pub fn solve_regularized<T: Scalar>(y: &Matrix<T>, cfg: &RegularizedConfig<T>) -> Result<SolveReport<T>> {
    cfg.validate()?;
    y.ensure_finite()?;
    let (m, n) = y.shape();
    let two = T::c(2.0);
    let mut l = Matrix::zeros(m, n);
    let mut s = Matrix::zeros(m, n);
    let mut trace = T::zero();
    let mut factors = None;
    let mut prev = y.frobenius_norm().powi(2) / (two * cfg.mu);
    let mut trace_log = Vec::new();
    let mut stalled = 0;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iter {
        iterations += 1;
        s = prox_l1_box(&y.try_sub(&l)?, y, cfg.lambda * cfg.mu, cfg.b)?;
        let (nl, nt, f) = svt_factored(&y.try_sub(&s)?, cfg.mu)?;
        l = nl;
        trace = nt;
        factors = Some(f);
        let fit = s.try_add(&l)?.try_sub(y)?.frobenius_norm().powi(2) / (two * cfg.mu);
        let obj = fit + cfg.lambda * l1(&s) + trace;
        trace_log.push(obj);
        let decrease = prev - obj;
        prev = obj;
        if decrease <= cfg.tol * obj.abs().max(T::one()) {
            stalled += 1;
            if stalled == STALL_SWEEPS {
                converged = true;
                break;
            }
        } else {
            stalled = 0;
        }
    }
    let (residual_v1, residual_star, residual_v2) = residual_norms(&s, &l, y)?;
    let objective = residual_v2.powi(2) / (two * cfg.mu) + cfg.lambda * l1(&s) + trace;
    let kkt = match factors {
        Some(f) => regularized_kkt(y, &s, &l, &f, cfg)?,
        None => KktResiduals { sparse: T::zero(), low_rank: T::zero() },
    };
    Ok(SolveReport {
        formulation: Formulation::Regularized,
        sparse: s,
        low_rank: l,
        iterations,
        objective,
        objective_trace: trace_log,
        residual_v1,
        residual_star,
        residual_v2,
        converged,
        admm: None,
        kkt: Some(kkt),
        recovery: None,
        bounds: None,
    })
}

/// First-order residuals with `G = (Y − S − L)/μ`: distance of each `G_ij`
/// from `λ∂|S_ij|` plus the box normal cone, and the distance of `G` from
/// `∂‖L‖_*` measured as `max(‖P_T G − UVᵀ‖_v∞, ‖P_T⊥ G‖_{2→2} − 1)`.
fn regularized_kkt<T: Scalar>(
    y: &Matrix<T>,
    s: &Matrix<T>,
    l: &Matrix<T>,
    lowrank_input: &SvdFactors<T>,
    cfg: &RegularizedConfig<T>,
) -> Result<KktResiduals<T>> {
    let g = y.try_sub(s)?.try_sub(l)?.scale(T::one() / cfg.mu);
    let lam = cfg.lambda;
    let mut sparse = T::zero();
    for ((&gij, &sij), &yij) in g.as_slice().iter().zip(s.as_slice()).zip(y.as_slice()) {
        let (mut lo, mut hi) = if sij > T::zero() {
            (lam, lam)
        } else if sij < T::zero() {
            (-lam, -lam)
        } else {
            (-lam, lam)
        };
        if cfg.b.is_finite() {
            if sij >= yij + cfg.b {
                hi = T::infinity();
            }
            if sij <= yij - cfg.b {
                lo = T::neg_infinity();
            }
        }
        let d = (lo - gij).max(gij - hi).max(T::zero());
        sparse = sparse.max(d);
    }

    let k = lowrank_input.singular_values.iter().filter(|&&x| x > cfg.mu).count();
    let (m, n) = y.shape();
    let space = RowColSpace::new(take_columns(&lowrank_input.u, k), take_columns(&lowrank_input.v, k))?;
    let pt = project_tangent(&space, &g)?;
    let orth = space.u().matmul_t(space.v())?;
    let on_t = pt.try_sub(&orth)?.max_abs();
    let off_t = if m == 0 || n == 0 { T::zero() } else { spectral_norm(&g.try_sub(&pt)?)? - T::one() };
    Ok(KktResiduals { sparse, low_rank: on_t.max(off_t).max(T::zero()) })
}

fn take_columns<T: Scalar>(m: &Matrix<T>, k: usize) -> Matrix<T> {
    Matrix::from_fn(m.rows(), k, |i, j| m[(i, j)])
}

pub fn solve_constrained<T: Scalar>(y: &Matrix<T>, cfg: &ConstrainedConfig<T>) -> Result<SolveReport<T>> {
    cfg.validate()?;
    y.ensure_finite()?;
    if cfg.is_exact() {
        admm_exact(y, cfg)
    } else {
        admm_ball(y, cfg)
    }
}

/// Penalty rebalancing; returns the factor the scaled dual must be multiplied by.
fn rebalance<T: Scalar>(cfg: &ConstrainedConfig<T>, rho: &mut T, primal: T, dual: T) -> Option<T> {
    if !cfg.adaptive_penalty {
        return None;
    }
    let ten = T::c(10.0);
    let two = T::c(2.0);
    if primal > ten * dual {
        *rho *= two;
        Some(T::one() / two)
    } else if dual > ten * primal {
        *rho /= two;
        Some(two)
    } else {
        None
    }
}

/// `L ← clip(svt(V, 1/ρ), b)` with its trace norm, rejected with an error if
/// clipping raises the subproblem objective `‖L‖_* + (ρ/2)‖L − V‖_F²` above
/// its value at `previous`.
fn lowrank_update<T: Scalar>(v: &Matrix<T>, rho: T, b: T, previous: &Matrix<T>) -> Result<(Matrix<T>, T)> {
    let (l, trace, _) = svt_factored(v, T::one() / rho)?;
    if b.is_infinite() || l.max_abs() <= b {
        return Ok((l, trace));
    }
    let clipped = clip_entries(&l, b)?;
    let clipped_trace = trace_norm(&clipped)?;
    let half = rho / T::c(2.0);
    let after = clipped_trace + half * clipped.try_sub(v)?.frobenius_norm().powi(2);
    let before = trace_norm(previous)? + half * previous.try_sub(v)?.frobenius_norm().powi(2);
    if after > before + T::floor_tol(1e-12) * before.abs().max(T::one()) {
        return Err(Error::Precondition(format!(
            "box clipping of the low-rank update raised the augmented objective ({after} > {before}); \
             solve without the box and clip afterwards"
        )));
    }
    Ok((clipped, clipped_trace))
}

fn admm_exact<T: Scalar>(y: &Matrix<T>, cfg: &ConstrainedConfig<T>) -> Result<SolveReport<T>> {
    let (m, n) = y.shape();
    let mut s = Matrix::zeros(m, n);
    let mut l = Matrix::zeros(m, n);
    let mut w = Matrix::zeros(m, n);
    let mut rho = cfg.penalty;
    let mut updates = 0;
    let mut trace_log = Vec::new();
    let mut primal = T::infinity();
    let mut dual = T::infinity();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iter {
        iterations += 1;
        s = soft_threshold(&y.try_sub(&l)?.try_sub(&w)?, cfg.lambda / rho)?;
        let (nl, trace) = lowrank_update(&y.try_sub(&s)?.try_sub(&w)?, rho, cfg.b, &l)?;
        let r = s.try_add(&nl)?.try_sub(y)?;
        primal = r.frobenius_norm();
        dual = rho * nl.try_sub(&l)?.frobenius_norm();
        l = nl;
        w = w.try_add(&r)?;
        trace_log.push(cfg.lambda * l1(&s) + trace);
        if primal <= cfg.tol_primal && dual <= cfg.tol_dual {
            converged = true;
            break;
        }
        if let Some(f) = rebalance(cfg, &mut rho, primal, dual) {
            w = w.scale(f);
            updates += 1;
        }
    }
    finish_constrained(
        y,
        s,
        l,
        cfg,
        iterations,
        converged,
        trace_log,
        AdmmDiagnostics {
            primal_residual: primal,
            dual_residual: dual,
            penalty: rho,
            penalty_updates: updates,
            dykstra_warnings: 0,
        },
    )
}

/// Consensus ADMM over `x = (S, L, Z₁, Z₂)` with `Z₁` in the v1 ball and `Z₂`
/// in the trace ball, against a copy `x̃` held in the affine set
/// `S̃ + L̃ − Y = Z̃₁ = Z̃₂`. The exit residual `X̂_S + X̂_L − Y` is then
/// projected onto the intersection of the balls and the correction is
/// folded into `X̂_L`.
fn admm_ball<T: Scalar>(y: &Matrix<T>, cfg: &ConstrainedConfig<T>) -> Result<SolveReport<T>> {
    let (m, n) = y.shape();
    let zeros = || Matrix::<T>::zeros(m, n);
    let (mut s, mut l) = (zeros(), zeros());
    let (mut st, mut lt, mut zt) = (y.clone(), zeros(), zeros());
    let (mut ws, mut wl, mut w1, mut w2) = (zeros(), zeros(), zeros(), zeros());
    let mut rho = cfg.penalty;
    let mut updates = 0;
    let mut trace_log = Vec::new();
    let mut primal = T::infinity();
    let mut dual = T::infinity();
    let mut iterations = 0;
    let mut converged = false;
    let two = T::c(2.0);
    let half = T::c(0.5);
    let fifth = T::c(0.2);
    while iterations < cfg.max_iter {
        iterations += 1;
        s = soft_threshold(&st.try_sub(&ws)?, cfg.lambda / rho)?;
        let (nl, trace) = lowrank_update(&lt.try_sub(&wl)?, rho, cfg.b, &l)?;
        l = nl;
        let z1 = project_l1_ball(&zt.try_sub(&w1)?, cfg.eps_v1)?;
        let z2 = project_nuclear_ball(&zt.try_sub(&w2)?, cfg.eps_star)?;
        trace_log.push(cfg.lambda * l1(&s) + trace);

        // Projection of (S + W_S, L + W_L, Z₁ + W₁, Z₂ + W₂) onto the affine set.
        let vs = s.try_add(&ws)?;
        let vl = l.try_add(&wl)?;
        let v1 = z1.try_add(&w1)?;
        let v2 = z2.try_add(&w2)?;
        let fit = vs.try_add(&vl)?.try_sub(y)?;
        let nzt = fit.try_add(&v1.try_add(&v2)?.scale(two))?.scale(fifth);
        let shift = fit.try_sub(&nzt)?.scale(half);
        let nst = vs.try_sub(&shift)?;
        let nlt = vl.try_sub(&shift)?;

        let rs = s.try_sub(&nst)?;
        let rl = l.try_sub(&nlt)?;
        let r1 = z1.try_sub(&nzt)?;
        let r2 = z2.try_sub(&nzt)?;
        primal = stacked_norm(&[&rs, &rl, &r1, &r2]);
        let dz = nzt.try_sub(&zt)?;
        dual = rho * stacked_norm(&[&nst.try_sub(&st)?, &nlt.try_sub(&lt)?, &dz, &dz]);
        ws = ws.try_add(&rs)?;
        wl = wl.try_add(&rl)?;
        w1 = w1.try_add(&r1)?;
        w2 = w2.try_add(&r2)?;
        st = nst;
        lt = nlt;
        zt = nzt;
        if primal <= cfg.tol_primal && dual <= cfg.tol_dual {
            converged = true;
            break;
        }
        if let Some(f) = rebalance(cfg, &mut rho, primal, dual) {
            for w in [&mut ws, &mut wl, &mut w1, &mut w2] {
                *w = w.scale(f);
            }
            updates += 1;
        }
    }
    let residual = s.try_add(&l)?.try_sub(y)?;
    let (feasible, ok) = dykstra(&residual, cfg)?;
    let l = l.try_add(&feasible.try_sub(&residual)?)?;
    finish_constrained(
        y,
        s,
        l,
        cfg,
        iterations,
        converged,
        trace_log,
        AdmmDiagnostics {
            primal_residual: primal,
            dual_residual: dual,
            penalty: rho,
            penalty_updates: updates,
            dykstra_warnings: usize::from(!ok),
        },
    )
}

fn stacked_norm<T: Scalar>(parts: &[&Matrix<T>]) -> T {
    parts.iter().map(|p| p.frobenius_norm().powi(2)).sum::<T>().sqrt()
}

/// Projection onto `{‖Z‖_v1 ≤ ε_v1} ∩ {‖Z‖_* ≤ ε_*}`; the flag is false when
/// the iteration budget ran out first.
fn dykstra<T: Scalar>(v: &Matrix<T>, cfg: &ConstrainedConfig<T>) -> Result<(Matrix<T>, bool)> {
    let (m, n) = v.shape();
    let mut x = v.clone();
    let mut p = Matrix::zeros(m, n);
    let mut q = Matrix::zeros(m, n);
    for _ in 0..cfg.dykstra_iters {
        let xp = x.try_add(&p)?;
        let a = project_l1_ball(&xp, cfg.eps_v1)?;
        p = xp.try_sub(&a)?;
        let aq = a.try_add(&q)?;
        let nx = project_nuclear_ball(&aq, cfg.eps_star)?;
        q = aq.try_sub(&nx)?;
        let step = nx.try_sub(&x)?.frobenius_norm();
        x = nx;
        if step <= cfg.dykstra_tol {
            return Ok((x, true));
        }
    }
    Ok((x, false))
}

#[allow(clippy::too_many_arguments)]
fn finish_constrained<T: Scalar>(
    y: &Matrix<T>,
    s: Matrix<T>,
    l: Matrix<T>,
    cfg: &ConstrainedConfig<T>,
    iterations: usize,
    converged: bool,
    objective_trace: Vec<T>,
    admm: AdmmDiagnostics<T>,
) -> Result<SolveReport<T>> {
    let (residual_v1, residual_star, residual_v2) = residual_norms(&s, &l, y)?;
    let objective = constrained_objective(&s, &l, cfg.lambda)?;
    Ok(SolveReport {
        formulation: Formulation::Constrained,
        sparse: s,
        low_rank: l,
        iterations,
        objective,
        objective_trace,
        residual_v1,
        residual_star,
        residual_v2,
        converged,
        admm: Some(admm),
        kkt: None,
        recovery: None,
        bounds: None,
    })
}

fn check_product<T: Scalar>(profile: &IncoherenceProfile<T>) -> Result<T> {
    let d = T::one() - profile.product;
    if !(d > T::zero()) {
        return Err(Error::Precondition(format!("alpha*beta = {} must be below 1", profile.product)));
    }
    Ok(d)
}

fn check_c<T: Scalar>(c: T) -> Result<T> {
    if !(c > T::one()) {
        return Err(Error::Parameter(format!("c must exceed 1, got {c}")));
    }
    Ok(T::one() / (T::one() - T::one() / c))
}

/// Bound on `max{‖Δ_S‖_v1, ‖Δ_L‖_v1}` for the constrained program:
/// `(1 + K)·ε_v1 + K·ε_*/λ` with `K = (1 − 1/c)⁻¹(2 − αβ)/(1 − αβ)`.
pub fn constrained_error_bound<T: Scalar>(
    profile: &IncoherenceProfile<T>,
    c: T,
    lambda: T,
    eps_v1: T,
    eps_star: T,
) -> Result<T> {
    let d = check_product(profile)?;
    let cinv = check_c(c)?;
    positive("lambda", lambda)?;
    nonneg("eps_v1", eps_v1)?;
    nonneg("eps_star", eps_star)?;
    let k = cinv * (T::c(2.0) - profile.product) / d;
    Ok((T::one() + k) * eps_v1 + k * eps_star / lambda)
}

/// `ε/μ`, taken as 0 when `ε = 0` so that `μ = 0` is allowed for exact data.
fn over_mu<T: Scalar>(eps: T, mu: T) -> T {
    if eps.is_zero() {
        T::zero()
    } else {
        eps / mu
    }
}

/// Error bounds for the regularized program with box radius `b` on `‖X_S − Y‖_v∞`.
pub fn regularized_error_bounds<T: Scalar>(
    profile: &IncoherenceProfile<T>,
    c: T,
    lambda: T,
    mu: T,
    b: T,
    levels: &PerturbationLevels<T>,
) -> Result<RegularizedBounds<T>> {
    let d = check_product(profile)?;
    let cinv = check_c(c)?;
    positive("lambda", lambda)?;
    nonneg("mu", mu)?;
    positive("b", b)?;
    let two = T::c(2.0);
    let k = T::from_usize_lossy(profile.support_size);
    let r = T::from_usize_lossy(profile.rank);
    let e_inf = over_mu(levels.eps_vinf, mu);
    let e_22 = over_mu(levels.eps_2to2, mu);
    let kk = lambda + profile.gamma + e_inf;
    let spec = T::one() + two * e_22;
    let r_prime =
        (lambda + e_inf) * (two * k / d) * kk + spec * two * r * (two * profile.alpha / d * kk + spec);
    let sparse_v1 =
        (r_prime * cinv / lambda * mu + lambda * k * mu + two * (k * r).sqrt() * mu + k * levels.eps_vinf)
            / d;
    let sparse_v2 = if b.is_infinite() { sparse_v1 } else { sparse_v1.min((two * b * sparse_v1).sqrt()) };
    let low_rank_star =
        (two * r).sqrt() * sparse_v2 + levels.eps_star_prime + (r_prime * cinv / two + two * r) * mu;
    Ok(RegularizedBounds { r_prime, sparse_v1, sparse_v2, low_rank_star })
}

fn positive<T: Scalar>(name: &str, x: T) -> Result<()> {
    if !(x > T::zero()) {
        return Err(Error::Parameter(format!("{name} must be positive, got {x}")));
    }
    Ok(())
}

fn nonneg<T: Scalar>(name: &str, x: T) -> Result<()> {
    if !(x >= T::zero()) {
        return Err(Error::Parameter(format!("{name} must be nonnegative, got {x}")));
    }
    Ok(())
}
