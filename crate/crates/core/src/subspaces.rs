//! Support and tangent-space projections, and the Neumann-series inverse of
//! `I − P_a ∘ P_b` used to build dual certificates.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::svd::svd;

/// Set of matrix cells: the support `Ω̄` of a sparse matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSet {
    rows: usize,
    cols: usize,
    cells: Vec<(usize, usize)>,
    mask: Vec<bool>,
}

impl SupportSet {
    /// Repeated cells are collapsed; out-of-range cells are an error.
    pub fn new(rows: usize, cols: usize, cells: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut mask = vec![false; rows * cols];
        for (i, j) in cells {
            if i >= rows || j >= cols {
                return Err(Error::Parameter(format!("cell ({i}, {j}) outside {rows}x{cols}")));
            }
            mask[i * cols + j] = true;
        }
        Ok(Self::from_mask(rows, cols, mask))
    }

    fn from_mask(rows: usize, cols: usize, mask: Vec<bool>) -> Self {
        let cells = mask.iter().enumerate().filter(|(_, &b)| b).map(|(p, _)| (p / cols, p % cols)).collect();
        Self { rows, cols, cells, mask }
    }

    /// Exact nonzero pattern of `m`.
    pub fn from_nonzeros<T: Scalar>(m: &Matrix<T>) -> Self {
        let mask = m.as_slice().iter().map(|x| !x.is_zero()).collect();
        Self::from_mask(m.rows(), m.cols(), mask)
    }

    pub fn empty(rows: usize, cols: usize) -> Self {
        Self::from_mask(rows, cols, vec![false; rows * cols])
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        Self::from_mask(rows, cols, vec![true; rows * cols])
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Row-major sorted, distinct cells.
    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    /// Cardinality `k̄`.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.mask[i * self.cols + j]
    }

    /// Largest number of cells in one column (`m0`).
    pub fn max_per_column(&self) -> usize {
        let mut counts = vec![0usize; self.cols];
        for &(_, j) in &self.cells {
            counts[j] += 1;
        }
        counts.into_iter().max().unwrap_or(0)
    }

    /// Largest number of cells in one row (`n0`).
    pub fn max_per_row(&self) -> usize {
        let mut counts = vec![0usize; self.rows];
        for &(i, _) in &self.cells {
            counts[i] += 1;
        }
        counts.into_iter().max().unwrap_or(0)
    }
}

/// Column and row spaces of a low-rank matrix, given by orthonormal bases.
#[derive(Debug, Clone, PartialEq)]
pub struct RowColSpace<T> {
    u: Matrix<T>,
    v: Matrix<T>,
}

impl<T: Scalar> RowColSpace<T> {
    /// `u` is `m × r`, `v` is `n × r`, both with orthonormal columns (checked to 1e-10).
    pub fn new(u: Matrix<T>, v: Matrix<T>) -> Result<Self> {
        if u.cols() != v.cols() {
            return Err(Error::Dimension { op: "RowColSpace::new", left: u.shape(), right: v.shape() });
        }
        if u.cols() > u.rows().min(v.rows()) {
            return Err(Error::Parameter(format!(
                "rank {} exceeds min({}, {})",
                u.cols(),
                u.rows(),
                v.rows()
            )));
        }
        let tol = T::floor_tol(1e-10);
        for (name, q) in [("U", &u), ("V", &v)] {
            let g = q.t_matmul(q)?;
            let defect = (&g - &Matrix::identity(g.rows())).max_abs();
            if defect > tol {
                return Err(Error::Parameter(format!("{name} columns not orthonormal (defect {defect:e})")));
            }
        }
        Ok(Self { u, v })
    }

    /// Singular subspaces of `x_l` after rank truncation.
    pub fn from_matrix(x_l: &Matrix<T>) -> Result<Self> {
        let f = svd(x_l)?;
        Ok(Self { u: f.u, v: f.v })
    }

    pub fn empty(rows: usize, cols: usize) -> Self {
        Self { u: Matrix::zeros(rows, 0), v: Matrix::zeros(cols, 0) }
    }

    pub fn u(&self) -> &Matrix<T> {
        &self.u
    }

    pub fn v(&self) -> &Matrix<T> {
        &self.v
    }

    /// `r̄`.
    pub fn rank(&self) -> usize {
        self.u.cols()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.u.rows(), self.v.rows())
    }
}

/// A candidate decomposition `(X̄_S, X̄_L)` with its support and singular subspaces.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetPair<T> {
    pub sparse: Matrix<T>,
    pub low_rank: Matrix<T>,
    pub support: SupportSet,
    pub space: RowColSpace<T>,
}

impl<T: Scalar> TargetPair<T> {
    pub fn new(sparse: Matrix<T>, low_rank: Matrix<T>) -> Result<Self> {
        sparse.check_same_shape(&low_rank, "TargetPair::new")?;
        sparse.ensure_finite()?;
        let support = SupportSet::from_nonzeros(&sparse);
        let space = RowColSpace::from_matrix(&low_rank)?;
        Ok(Self { sparse, low_rank, support, space })
    }

    pub fn shape(&self) -> (usize, usize) {
        self.sparse.shape()
    }

    /// `X̄_S + X̄_L`.
    pub fn sum(&self) -> Matrix<T> {
        &self.sparse + &self.low_rank
    }
}

/// Orthogonal projector onto a subspace of `R^{m×n}` under `⟨A, B⟩ = tr(AᵀB)`.
pub trait Projector<T: Scalar> {
    fn shape(&self) -> (usize, usize);

    fn project(&self, m: &Matrix<T>) -> Result<Matrix<T>>;

    /// `M − P(M)`: projection onto the orthogonal complement.
    fn project_complement(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        let p = self.project(m)?;
        Ok(m - &p)
    }

    fn check_shape(&self, m: &Matrix<T>) -> Result<()> {
        if m.shape() != self.shape() {
            return Err(Error::Dimension { op: "project", left: self.shape(), right: m.shape() });
        }
        Ok(())
    }
}

impl<T: Scalar> Projector<T> for SupportSet {
    fn shape(&self) -> (usize, usize) {
        SupportSet::shape(self)
    }

    fn project(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        self.check_shape(m)?;
        let mut out = m.clone();
        for (x, &keep) in out.as_mut_slice().iter_mut().zip(&self.mask) {
            if !keep {
                *x = T::zero();
            }
        }
        Ok(out)
    }
}

impl<T: Scalar> Projector<T> for RowColSpace<T> {
    fn shape(&self) -> (usize, usize) {
        RowColSpace::shape(self)
    }

    /// `UUᵀM + MVVᵀ − UUᵀMVVᵀ`.
    fn project(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        self.check_shape(m)?;
        if self.rank() == 0 {
            return Ok(Matrix::zeros(m.rows(), m.cols()));
        }
        let utm = self.u.t_matmul(m)?; // r × n
        let mv = m.try_matmul(&self.v)?; // m × r
        let utmv = utm.try_matmul(&self.v)?; // r × r
        let left = self.u.try_matmul(&utm)?;
        let right = mv.matmul_t(&self.v)?;
        let both = self.u.try_matmul(&utmv)?.matmul_t(&self.v)?;
        Ok(&(&left + &right) - &both)
    }
}

/// Entry-wise sign in `{−1, 0, +1}`; exact zeros map to 0.
pub fn sign_matrix<T: Scalar>(m: &Matrix<T>) -> Matrix<T> {
    m.map(|x| {
        if x > T::zero() {
            T::one()
        } else if x < T::zero() {
            -T::one()
        } else {
            T::zero()
        }
    })
}

/// `UVᵀ` (the zero matrix when the rank is 0).
pub fn orth_matrix<T: Scalar>(space: &RowColSpace<T>) -> Matrix<T> {
    let (m, n) = space.shape();
    if space.rank() == 0 {
        return Matrix::zeros(m, n);
    }
    space.u.matmul_t(&space.v).expect("factor shapes")
}

pub fn project_support<T: Scalar>(support: &SupportSet, m: &Matrix<T>) -> Result<Matrix<T>> {
    support.project(m)
}

pub fn project_tangent<T: Scalar>(space: &RowColSpace<T>, m: &Matrix<T>) -> Result<Matrix<T>> {
    space.project(m)
}

/// Which of the two compositions the Neumann iteration inverts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeumannSide {
    /// `(I − P_Ω̄ ∘ P_T̄)⁻¹`
    Support,
    /// `(I − P_T̄ ∘ P_Ω̄)⁻¹`
    Tangent,
}

#[derive(Debug, Clone)]
pub struct NeumannSolution<T> {
    pub x: Matrix<T>,
    pub iterations: usize,
    /// Largest measured `‖x_{k+1} − x_k‖ / ‖x_k − x_{k−1}‖` above the round-off floor.
    pub contraction: T,
    /// `‖x − (P_a ∘ P_b)(x) − rhs‖_F`.
    pub residual: T,
}

/// Hard ceiling on Neumann steps regardless of the measured rate.
pub const NEUMANN_MAX_STEPS: usize = 100_000;

/// Default fixed-point tolerance for certificate construction.
pub const NEUMANN_TOL: f64 = 1e-12;

/// Solve `x = rhs + (P_a ∘ P_b)(x)` by fixed-point iteration, stopping once
/// `‖x_{k+1} − x_k‖_F ≤ tol`.
///
/// The step budget is `ceil(log(tol/‖rhs‖_F) / log q) + 50` with `q` the
/// largest per-step contraction measured so far; exceeding it (or the hard
/// ceiling) is a [`Error::NonConvergence`] reporting `q`.
pub fn neumann_inverse<T: Scalar>(
    support: &SupportSet,
    space: &RowColSpace<T>,
    side: NeumannSide,
    rhs: &Matrix<T>,
    tol: T,
) -> Result<NeumannSolution<T>> {
    if !(tol > T::zero()) {
        return Err(Error::Parameter(format!("tol must be positive, got {tol}")));
    }
    support.check_shape(rhs)?;
    space.check_shape(rhs)?;
    let compose = |x: &Matrix<T>| -> Result<Matrix<T>> {
        match side {
            NeumannSide::Support => support.project(&space.project(x)?),
            NeumannSide::Tangent => space.project(&support.project(x)?),
        }
    };

    let rhs_norm = rhs.frobenius_norm();
    if rhs_norm.is_zero() {
        return Ok(NeumannSolution {
            x: rhs.clone(),
            iterations: 0,
            contraction: T::zero(),
            residual: T::zero(),
        });
    }
    let floor = T::epsilon() * T::c(1e4) * rhs_norm;

    let mut x = rhs.clone();
    let mut prev_step: Option<T> = None;
    let mut q = T::zero();
    let mut iterations = 0;
    loop {
        let next = &compose(&x)? + rhs;
        iterations += 1;
        let step = (&next - &x).frobenius_norm();
        x = next;
        if let Some(prev) = prev_step {
            if prev > floor {
                q = q.max(step / prev);
            }
        }
        prev_step = Some(step);
        if step <= tol {
            break;
        }
        let budget = if q > T::zero() && q < T::one() {
            let b = ((tol / rhs_norm).ln() / q.ln()).ceil();
            b.to_usize().unwrap_or(NEUMANN_MAX_STEPS).saturating_add(50)
        } else if q >= T::one() {
            iterations.min(50) + 50
        } else {
            NEUMANN_MAX_STEPS
        };
        if iterations >= budget.min(NEUMANN_MAX_STEPS) {
            return Err(Error::NonConvergence { iterations, rate: q.to_f64().unwrap_or(f64::NAN) });
        }
    }
    let residual = (&(&x - &compose(&x)?) - rhs).frobenius_norm();
    Ok(NeumannSolution { x, iterations, contraction: q, residual })
}
