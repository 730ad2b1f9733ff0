//! Seeded, platform-independent random streams.
//!
//! The bit generator is ChaCha20 (`rand_chacha`, seeded through
//! `SeedableRng::seed_from_u64`). On top of it:
//!
//! * uniform `[0, 1)`: the top 53 bits of a `u64`, times `2^-53`;
//! * uniform index below `n`: rejection sampling on the top bits, unbiased;
//! * standard normal: Box–Muller, `sqrt(-2 ln(1 - u1)) · cos(2π u2)` and the
//!   matching `sin` for the spare, evaluated with `libm` so results do not
//!   depend on the platform math library.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Seed of a random stream. Equal seeds give bit-identical streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Seed(pub u64);

impl Seed {
    /// Derive an independent child seed for a labelled sub-stream.
    pub fn derive(self, label: u64) -> Seed {
        Seed(splitmix64(self.0 ^ splitmix64(label.wrapping_add(0x5851_f42d_4c95_7f2d))))
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

/// SplitMix64 finalizer; a fixed, documented 64-bit mixing function.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub struct SeededRng {
    inner: ChaCha20Rng,
    spare_normal: Option<f64>,
}

impl SeededRng {
    pub fn new(seed: Seed) -> Self {
        Self { inner: ChaCha20Rng::seed_from_u64(seed.0), spare_normal: None }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `0..n`. Panics if `n == 0`.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0, "index range must be nonempty");
        let n = n as u64;
        let bits = 64 - (n - 1).leading_zeros();
        loop {
            let x = if bits == 0 { 0 } else { self.next_u64() >> (64 - bits) };
            if x < n {
                return x as usize;
            }
        }
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = libm::sqrt(-2.0 * libm::log(1.0 - u1));
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare_normal = Some(r * libm::sin(theta));
        r * libm::cos(theta)
    }

    /// `+1` or `-1` with equal probability.
    pub fn sign(&mut self) -> f64 {
        if self.next_u64() >> 63 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// `m × n` matrix of i.i.d. standard normal entries, filled row by row.
pub fn gaussian_matrix<T: Scalar>(m: usize, n: usize, seed: Seed) -> Matrix<T> {
    let mut rng = SeededRng::new(seed);
    Matrix::from_fn(m, n, |_, _| T::c(rng.normal()))
}
