//! Random instances: uniform support draws, random singular subspaces, and
//! low-rank-plus-outliers-plus-noise observations.

use crate::certificate::{perturbation_levels, PerturbationLevels};
use crate::error::{Error, Result};
use crate::incoherence::{profile, IncoherenceProfile};
use crate::matrix::Matrix;
use crate::rng::{gaussian_matrix, Seed, SeededRng};
use crate::scalar::Scalar;
use crate::subspaces::{RowColSpace, SupportSet, TargetPair};

/// Distribution of the nonzero entries of the sparse component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MagnitudeLaw {
    /// `±A` with a fair random sign.
    Fixed { amplitude: f64 },
    /// Random sign times a magnitude uniform in `[0.1·A, A]`.
    Uniform { amplitude: f64 },
}

impl Default for MagnitudeLaw {
    fn default() -> Self {
        MagnitudeLaw::Fixed { amplitude: 10.0 }
    }
}

impl MagnitudeLaw {
    pub fn amplitude(self) -> f64 {
        match self {
            MagnitudeLaw::Fixed { amplitude } | MagnitudeLaw::Uniform { amplitude } => amplitude,
        }
    }

    fn draw(self, rng: &mut SeededRng) -> f64 {
        let sign = rng.sign();
        match self {
            MagnitudeLaw::Fixed { amplitude } => sign * amplitude,
            MagnitudeLaw::Uniform { amplitude } => sign * rng.uniform_in(0.1 * amplitude, amplitude),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceSpec {
    pub m: usize,
    pub n: usize,
    pub rank: usize,
    /// Number of uniform support draws, with replacement.
    pub ktilde: usize,
    pub magnitude: MagnitudeLaw,
    /// Standard deviation of the additive Gaussian noise.
    pub sigma: f64,
    pub seed: Seed,
}

impl InstanceSpec {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::Parameter("dimensions must be positive".into()));
        }
        if self.rank > self.m.min(self.n) {
            return Err(Error::Parameter(format!("rank {} exceeds min({}, {})", self.rank, self.m, self.n)));
        }
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(Error::Parameter(format!("sigma must be nonnegative, got {}", self.sigma)));
        }
        let a = self.magnitude.amplitude();
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Parameter(format!("amplitude must be positive, got {a}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct GeneratedInstance<T> {
    pub spec: InstanceSpec,
    /// `X̄_S + X̄_L + E`.
    pub y: Matrix<T>,
    pub target: TargetPair<T>,
    /// Noise actually added.
    pub e: Matrix<T>,
    pub profile: IncoherenceProfile<T>,
    pub levels: PerturbationLevels<T>,
}

// Sub-stream labels, one per random ingredient.
const SUPPORT: u64 = 1;
const LEFT: u64 = 2;
const RIGHT: u64 = 3;
const SINGULAR: u64 = 4;
const MAGNITUDE: u64 = 5;
const NOISE: u64 = 6;

/// `ktilde` uniform draws over the `m × n` cells, with repeats collapsed.
pub fn gen_support(m: usize, n: usize, ktilde: usize, seed: Seed) -> SupportSet {
    let mut rng = SeededRng::new(seed);
    let cells: Vec<(usize, usize)> = (0..ktilde)
        .map(|_| {
            let p = rng.index(m * n);
            (p / n, p % n)
        })
        .collect();
    SupportSet::new(m, n, cells).expect("cells drawn in range")
}

/// Every cell of `rows` distinct, uniformly chosen rows. A maximally
/// row-coherent support for stress tests.
pub fn gen_row_clustered_support(m: usize, n: usize, rows: usize, seed: Seed) -> Result<SupportSet> {
    if rows > m {
        return Err(Error::Parameter(format!("{rows} rows requested from {m}")));
    }
    let mut rng = SeededRng::new(seed);
    // Partial Fisher–Yates over row indices.
    let mut idx: Vec<usize> = (0..m).collect();
    for k in 0..rows {
        let j = k + rng.index(m - k);
        idx.swap(k, j);
    }
    let cells = idx[..rows].iter().flat_map(|&i| (0..n).map(move |j| (i, j)));
    SupportSet::new(m, n, cells)
}

/// Orthonormal `m × r` and `n × r` bases from Gaussian matrices, by thin QR
/// with positive `R` diagonal.
pub fn gen_subspaces<T: Scalar>(m: usize, n: usize, rank: usize, seed: Seed) -> Result<RowColSpace<T>> {
    if rank > m.min(n) {
        return Err(Error::Parameter(format!("rank {rank} exceeds min({m}, {n})")));
    }
    let u = orthonormalize(&gaussian_matrix::<T>(m, rank, seed.derive(LEFT)))?;
    let v = orthonormalize(&gaussian_matrix::<T>(n, rank, seed.derive(RIGHT)))?;
    RowColSpace::new(u, v)
}

/// Q factor of a thin QR by modified Gram–Schmidt with one reorthogonalization
/// pass. Dividing by the positive norm makes `diag(R) > 0`.
fn orthonormalize<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    let (m, r) = a.shape();
    let mut cols: Vec<Vec<T>> = (0..r).map(|j| a.column(j)).collect();
    for k in 0..r {
        for _ in 0..2 {
            for prev in 0..k {
                let (head, tail) = cols.split_at_mut(k);
                let q = &head[prev];
                let x = &mut tail[0];
                let proj: T = q.iter().zip(x.iter()).map(|(&a, &b)| a * b).sum();
                for (xi, &qi) in x.iter_mut().zip(q) {
                    *xi -= proj * qi;
                }
            }
        }
        let norm = cols[k].iter().map(|&x| x * x).sum::<T>().sqrt();
        if !(norm > T::epsilon()) {
            return Err(Error::Internal("rank-deficient Gaussian draw".into()));
        }
        for x in cols[k].iter_mut() {
            *x /= norm;
        }
    }
    Ok(Matrix::from_fn(m, r, |i, j| cols[j][i]))
}

/// Orthonormal bases from random `±1` matrices, by the same QR as
/// [`gen_subspaces`]. Rank one gives exactly flat vectors, so `β = 3/√(mn)`
/// at `ρ = √(n/m)`.
pub fn gen_flat_subspaces<T: Scalar>(m: usize, n: usize, rank: usize, seed: Seed) -> Result<RowColSpace<T>> {
    if rank > m.min(n) {
        return Err(Error::Parameter(format!("rank {rank} exceeds min({m}, {n})")));
    }
    let signs = |rows: usize, s: Seed| {
        let mut rng = SeededRng::new(s);
        Matrix::from_fn(rows, rank, |_, _| T::c(rng.sign()))
    };
    let u = orthonormalize(&signs(m, seed.derive(LEFT)))?;
    let v = orthonormalize(&signs(n, seed.derive(RIGHT)))?;
    RowColSpace::new(u, v)
}

/// `k` cells with pairwise distinct rows and columns, so `α(ρ*) = 1` when `k > 0`.
pub fn gen_permutation_support(m: usize, n: usize, k: usize, seed: Seed) -> Result<SupportSet> {
    if k > m.min(n) {
        return Err(Error::Parameter(format!("{k} cells need distinct rows and columns in {m}x{n}")));
    }
    let mut rng = SeededRng::new(seed);
    let mut rows: Vec<usize> = (0..m).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    for t in 0..k {
        let i = t + rng.index(m - t);
        rows.swap(t, i);
        let j = t + rng.index(n - t);
        cols.swap(t, j);
    }
    SupportSet::new(m, n, (0..k).map(|t| (rows[t], cols[t])))
}

/// Target pair on a permutation support with flat singular vectors: the
/// most incoherent configuration, used where the recovery conditions must hold.
pub fn gen_incoherent_target<T: Scalar>(
    m: usize,
    n: usize,
    rank: usize,
    k: usize,
    magnitude: MagnitudeLaw,
    seed: Seed,
) -> Result<TargetPair<T>> {
    let support = gen_permutation_support(m, n, k, seed.derive(SUPPORT))?;
    let space = gen_flat_subspaces::<T>(m, n, rank, seed)?;
    let mut mag_rng = SeededRng::new(seed.derive(MAGNITUDE));
    let mut xs = Matrix::zeros(m, n);
    for &(i, j) in support.cells() {
        xs[(i, j)] = T::c(magnitude.draw(&mut mag_rng));
    }
    let xl = low_rank_from(&space, m, n, seed)?;
    Ok(TargetPair { sparse: xs, low_rank: xl, support, space })
}

/// `Ū·diag(s)·V̄ᵀ` with `s` uniform in `[1, 2]·√(mn)/r̄`.
fn low_rank_from<T: Scalar>(space: &RowColSpace<T>, m: usize, n: usize, seed: Seed) -> Result<Matrix<T>> {
    let r = space.rank();
    if r == 0 {
        return Ok(Matrix::zeros(m, n));
    }
    let mut sv_rng = SeededRng::new(seed.derive(SINGULAR));
    let scale = ((m * n) as f64).sqrt() / r as f64;
    let s: Vec<T> = (0..r).map(|_| T::c(sv_rng.uniform_in(1.0, 2.0) * scale)).collect();
    let us = Matrix::from_fn(m, r, |i, k| space.u()[(i, k)] * s[k]);
    us.matmul_t(space.v())
}

/// Draw an instance. Singular values of `X̄_L` are uniform in
/// `[1, 2]·√(mn)/r̄`, so its entries stay of order one.
pub fn gen_instance<T: Scalar>(spec: &InstanceSpec) -> Result<GeneratedInstance<T>> {
    spec.validate()?;
    let (m, n, r) = (spec.m, spec.n, spec.rank);
    let seed = spec.seed;

    let support = gen_support(m, n, spec.ktilde, seed.derive(SUPPORT));
    let mut mag_rng = SeededRng::new(seed.derive(MAGNITUDE));
    let mut xs = Matrix::zeros(m, n);
    for &(i, j) in support.cells() {
        xs[(i, j)] = T::c(spec.magnitude.draw(&mut mag_rng));
    }

    let space = gen_subspaces::<T>(m, n, r, seed)?;
    let xl = low_rank_from(&space, m, n, seed)?;

    let e = if spec.sigma > 0.0 {
        gaussian_matrix::<T>(m, n, seed.derive(NOISE)).scale(T::c(spec.sigma))
    } else {
        Matrix::zeros(m, n)
    };
    let y = &(&xs + &xl) + &e;

    let target = TargetPair { sparse: xs, low_rank: xl, support, space };
    let prof = profile(&target, None)?;
    let levels = perturbation_levels(&target, &e)?;
    Ok(GeneratedInstance { spec: *spec, y, target, e, profile: prof, levels })
}
