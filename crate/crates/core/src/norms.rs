//! Matrix norms: entry-wise, induced, trace, and the balanced hybrid
//! `♯(ρ)` norm together with its dual `♭(ρ)`.

use crate::error::{Error, Result};
use crate::lp::DenseLp;
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::svd::{spectral_norm, svd};

/// Largest `m·n` accepted by [`flat_norm`].
pub const FLAT_NORM_MAX_ENTRIES: usize = 256;

/// Exponent of an entry-wise norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntrywiseP {
    One,
    Two,
    Inf,
}

/// Operator norm `‖M‖_{p→q}` for the cases used by the analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InducedMode {
    /// Largest column absolute sum.
    OneToOne,
    /// Largest column Euclidean norm.
    OneToTwo,
    /// Largest singular value.
    TwoToTwo,
    /// Largest row Euclidean norm.
    TwoToInf,
    /// Largest row absolute sum.
    InfToInf,
}

pub fn entrywise_norm<T: Scalar>(m: &Matrix<T>, p: EntrywiseP) -> T {
    match p {
        EntrywiseP::One => l1(m),
        EntrywiseP::Two => m.frobenius_norm(),
        EntrywiseP::Inf => m.max_abs(),
    }
}

/// `‖M‖_v1`.
pub fn l1<T: Scalar>(m: &Matrix<T>) -> T {
    m.as_slice().iter().map(|x| x.abs()).sum()
}

pub fn induced_norm<T: Scalar>(m: &Matrix<T>, mode: InducedMode) -> Result<T> {
    let (rows, cols) = m.shape();
    let col_reduce = |f: &dyn Fn(T) -> T, finish: &dyn Fn(T) -> T| {
        (0..cols).map(|j| finish((0..rows).map(|i| f(m[(i, j)])).sum::<T>())).fold(T::zero(), T::max)
    };
    let row_reduce = |f: &dyn Fn(T) -> T, finish: &dyn Fn(T) -> T| {
        (0..rows).map(|i| finish(m.row(i).iter().map(|&x| f(x)).sum::<T>())).fold(T::zero(), T::max)
    };
    let abs = |x: T| x.abs();
    let sq = |x: T| x * x;
    let id = |x: T| x;
    let sqrt = |x: T| x.sqrt();
    Ok(match mode {
        InducedMode::OneToOne => col_reduce(&abs, &id),
        InducedMode::OneToTwo => col_reduce(&sq, &sqrt),
        InducedMode::TwoToTwo => spectral_norm(m)?,
        InducedMode::TwoToInf => row_reduce(&sq, &sqrt),
        InducedMode::InfToInf => row_reduce(&abs, &id),
    })
}

/// Sum of singular values.
pub fn trace_norm<T: Scalar>(m: &Matrix<T>) -> Result<T> {
    Ok(svd(m)?.singular_values.iter().fold(T::zero(), |acc, &s| acc + s))
}

/// `max{ρ‖M‖_{1→1}, ρ⁻¹‖M‖_{∞→∞}}`.
pub fn sharp_norm<T: Scalar>(m: &Matrix<T>, rho: T) -> Result<T> {
    check_rho(rho)?;
    let col = induced_norm(m, InducedMode::OneToOne)?;
    let row = induced_norm(m, InducedMode::InfToInf)?;
    Ok((rho * col).max(row / rho))
}

/// Dual of the `♯(ρ)` norm, `sup{⟨M, N⟩ : ‖N‖_♯(ρ) ≤ 1}`, solved exactly as a
/// linear program over `N = N⁺ − N⁻` with `N⁺, N⁻ ≥ 0`.
///
/// Only defined here for `m·n ≤ 256`; larger inputs are rejected.
pub fn flat_norm<T: Scalar>(m: &Matrix<T>, rho: T) -> Result<T> {
    check_rho(rho)?;
    let (rows, cols) = m.shape();
    let mn = rows * cols;
    if mn > FLAT_NORM_MAX_ENTRIES {
        return Err(Error::UnsupportedSize { rows, cols, limit: FLAT_NORM_MAX_ENTRIES });
    }
    if m.is_zero() {
        return Ok(T::zero());
    }
    let mut objective = Vec::with_capacity(2 * mn);
    objective.extend_from_slice(m.as_slice());
    objective.extend(m.as_slice().iter().map(|&x| -x));

    let mut constraints = Vec::with_capacity(rows + cols);
    // ρ · Σ_i (N⁺ + N⁻)_ij ≤ 1 for every column j.
    for j in 0..cols {
        let mut a = vec![T::zero(); 2 * mn];
        for i in 0..rows {
            a[i * cols + j] = rho;
            a[mn + i * cols + j] = rho;
        }
        constraints.push(a);
    }
    // ρ⁻¹ · Σ_j (N⁺ + N⁻)_ij ≤ 1 for every row i.
    let inv = rho.recip();
    for i in 0..rows {
        let mut a = vec![T::zero(); 2 * mn];
        for j in 0..cols {
            a[i * cols + j] = inv;
            a[mn + i * cols + j] = inv;
        }
        constraints.push(a);
    }
    let lp = DenseLp { objective, constraints, bounds: vec![T::one(); rows + cols] };
    // N = 0 is always feasible, so any failure here is a solver bug.
    let sol = lp.solve()?;
    Ok(sol.value)
}

fn check_rho<T: Scalar>(rho: T) -> Result<()> {
    if !(rho > T::zero()) || !rho.is_finite() {
        return Err(Error::Parameter(format!("rho must be positive, got {rho}")));
    }
    Ok(())
}
