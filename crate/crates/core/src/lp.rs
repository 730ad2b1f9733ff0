//! Dense tableau simplex for `max cᵀx  s.t.  Ax ≤ b, x ≥ 0` with `b ≥ 0`.
//!
//! The slack basis is feasible because `b ≥ 0`, so no phase one is needed.
//! Pivoting follows Bland's rule, which rules out cycling on the heavily
//! degenerate programs produced by the flat-norm computation.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub(crate) struct DenseLp<T> {
    pub objective: Vec<T>,
    pub constraints: Vec<Vec<T>>,
    pub bounds: Vec<T>,
}

#[derive(Debug, Clone)]
pub(crate) struct LpSolution<T> {
    pub value: T,
    #[cfg_attr(not(test), allow(dead_code))]
    pub x: Vec<T>,
}

impl<T: Scalar> DenseLp<T> {
    pub fn solve(&self) -> Result<LpSolution<T>> {
        let nvar = self.objective.len();
        let ncon = self.constraints.len();
        if self.bounds.len() != ncon || self.constraints.iter().any(|r| r.len() != nvar) {
            return Err(Error::Internal("malformed linear program".into()));
        }
        if self.bounds.iter().any(|&b| b < T::zero()) {
            return Err(Error::Internal("linear program needs nonnegative bounds".into()));
        }

        // Columns: structural variables, then slacks, then the right-hand side.
        let width = nvar + ncon + 1;
        let rhs = width - 1;
        let mut tab: Vec<Vec<T>> = (0..ncon)
            .map(|i| {
                let mut row = vec![T::zero(); width];
                row[..nvar].copy_from_slice(&self.constraints[i]);
                row[nvar + i] = T::one();
                row[rhs] = self.bounds[i];
                row
            })
            .collect();
        // Reduced-cost row for maximization: entries are -c; optimum when all ≥ 0.
        let mut cost = vec![T::zero(); width];
        for (k, &c) in self.objective.iter().enumerate() {
            cost[k] = -c;
        }
        let mut basis: Vec<usize> = (nvar..nvar + ncon).collect();

        let scale = self
            .objective
            .iter()
            .chain(self.constraints.iter().flatten())
            .fold(T::one(), |acc, &x| acc.max(x.abs()));
        let tol = T::epsilon() * T::c(1e3) * scale;
        let max_pivots = 50 * (nvar + ncon + 1) * (ncon + 1);

        for _ in 0..max_pivots {
            let Some(enter) = (0..width - 1).find(|&k| cost[k] < -tol) else {
                let mut x = vec![T::zero(); nvar];
                for (i, &bv) in basis.iter().enumerate() {
                    if bv < nvar {
                        x[bv] = tab[i][rhs];
                    }
                }
                return Ok(LpSolution { value: cost[rhs], x });
            };

            let mut leave: Option<(usize, T)> = None;
            for (i, row) in tab.iter().enumerate() {
                let a = row[enter];
                if a > tol {
                    let ratio = row[rhs] / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr || (ratio == lr && basis[i] < basis[li]) {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            let Some((pivot_row, _)) = leave else {
                return Err(Error::Internal("linear program is unbounded".into()));
            };

            let piv = tab[pivot_row][enter];
            for x in tab[pivot_row].iter_mut() {
                *x /= piv;
            }
            let pivot = tab[pivot_row].clone();
            for (i, row) in tab.iter_mut().enumerate() {
                if i == pivot_row {
                    continue;
                }
                let f = row[enter];
                if !f.is_zero() {
                    for (x, &p) in row.iter_mut().zip(&pivot) {
                        *x -= f * p;
                    }
                }
            }
            let f = cost[enter];
            for (x, &p) in cost.iter_mut().zip(&pivot) {
                *x -= f * p;
            }
            basis[pivot_row] = enter;
        }
        Err(Error::Internal("simplex pivot limit reached".into()))
    }
}
