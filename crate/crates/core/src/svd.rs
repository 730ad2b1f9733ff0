//! Thin singular value decomposition by one-sided (Hestenes) Jacobi rotations.
//!
//! Jacobi is slower than Golub–Kahan for large matrices but it is short,
//! deterministic, and computes small singular values to high relative
//! accuracy, which keeps the rank cutoff below well defined.

use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};
use crate::scalar::Scalar;

/// Default relative rank cutoff: singular values `σ_i ≤ 1e-10·σ_1` are dropped.
pub const RANK_CUTOFF: f64 = 1e-10;

/// Default cap on Jacobi sweeps before reporting a factorization failure.
pub const MAX_SWEEPS: usize = 80;

/// `M ≈ U · diag(σ) · Vᵀ` truncated to the numerical rank.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdFactors<T> {
    /// `m × r`, orthonormal columns.
    pub u: Matrix<T>,
    /// Nonincreasing, all strictly above the cutoff.
    pub singular_values: Vec<T>,
    /// `n × r`, orthonormal columns.
    pub v: Matrix<T>,
}

impl<T: Scalar> SvdFactors<T> {
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        self.reassemble(&self.singular_values)
    }

    /// `U · diag(s) · Vᵀ` for replacement singular values `s`.
    pub fn reassemble(&self, s: &[T]) -> Matrix<T> {
        assert_eq!(s.len(), self.rank());
        let m = self.u.rows();
        let us = Matrix::from_fn(m, s.len(), |i, k| self.u[(i, k)] * s[k]);
        us.matmul_t(&self.v).expect("svd factor shapes")
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SvdOptions {
    pub max_sweeps: usize,
    pub rel_cutoff: f64,
}

impl Default for SvdOptions {
    fn default() -> Self {
        Self { max_sweeps: MAX_SWEEPS, rel_cutoff: RANK_CUTOFF }
    }
}

pub fn svd<T: Scalar>(m: &Matrix<T>) -> Result<SvdFactors<T>> {
    svd_with(m, SvdOptions::default())
}

pub fn svd_with<T: Scalar>(m: &Matrix<T>, opts: SvdOptions) -> Result<SvdFactors<T>> {
    m.ensure_finite()?;
    if m.rows() < m.cols() {
        let f = jacobi_tall(&m.transpose(), opts, m.shape())?;
        return Ok(SvdFactors { u: f.v, singular_values: f.singular_values, v: f.u });
    }
    jacobi_tall(m, opts, m.shape())
}

/// Largest singular value (0 for the zero matrix).
pub fn spectral_norm<T: Scalar>(m: &Matrix<T>) -> Result<T> {
    Ok(svd(m)?.singular_values.first().copied().unwrap_or_else(T::zero))
}

fn jacobi_tall<T: Scalar>(
    a: &Matrix<T>,
    opts: SvdOptions,
    reported_shape: (usize, usize),
) -> Result<SvdFactors<T>> {
    let (m, n) = a.shape();
    let mut g = a.columns();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|j| {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            e
        })
        .collect();

    let tol = T::epsilon() * T::from_usize_lossy(m.max(1));
    let mut converged = n < 2;
    for _ in 0..opts.max_sweeps {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let (alpha, beta, gamma) = {
                    let (gp, gq) = (&g[p], &g[q]);
                    (dot(gp, gp), dot(gq, gq), dot(gp, gq))
                };
                if alpha.is_zero() || beta.is_zero() {
                    continue;
                }
                if gamma.abs() <= tol * alpha.sqrt() * beta.sqrt() {
                    continue;
                }
                rotated = true;
                let two = T::c(2.0);
                let zeta = (beta - alpha) / (two * gamma);
                let t = zeta.signum() / (zeta.abs() + T::one().hypot(zeta));
                let c = T::one() / T::one().hypot(t);
                let s = c * t;
                rotate_pair(&mut g, p, q, c, s);
                rotate_pair(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::Factorization {
            rows: reported_shape.0,
            cols: reported_shape.1,
            sweeps: opts.max_sweeps,
        });
    }

    let norms: Vec<T> = g.iter().map(|col| dot(col, col).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite norms"));
    let top = order.first().map_or(T::zero(), |&i| norms[i]);
    let cutoff = T::c(opts.rel_cutoff) * top;

    let kept: Vec<usize> = order.into_iter().filter(|&i| norms[i] > cutoff && norms[i] > T::zero()).collect();
    let singular_values: Vec<T> = kept.iter().map(|&i| norms[i]).collect();
    let u_cols: Vec<Vec<T>> = kept.iter().map(|&i| g[i].iter().map(|&x| x / norms[i]).collect()).collect();
    let v_cols: Vec<Vec<T>> = kept.iter().map(|&i| v[i].clone()).collect();

    Ok(SvdFactors {
        u: Matrix::from_columns(m, &u_cols),
        singular_values,
        v: Matrix::from_columns(n, &v_cols),
    })
}

fn rotate_pair<T: Scalar>(cols: &mut [Vec<T>], p: usize, q: usize, c: T, s: T) {
    let (head, tail) = cols.split_at_mut(q);
    let (xp, xq) = (&mut head[p], &mut tail[0]);
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = c * x - s * y;
        *b = s * x + c * y;
    }
}
