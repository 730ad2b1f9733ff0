//! Proximal maps and Euclidean ball projections.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::svd::svd;

/// Entry-wise `sign(x)·max(|x| − t, 0)`; entries with `|x| = t` map to 0.
pub fn soft_threshold<T: Scalar>(m: &Matrix<T>, t: T) -> Result<Matrix<T>> {
    check_nonneg("t", t)?;
    Ok(m.map(|x| shrink(x, t)))
}

#[inline]
fn shrink<T: Scalar>(x: T, t: T) -> T {
    let a = x.abs() - t;
    if a > T::zero() {
        a.copysign(x)
    } else {
        T::zero()
    }
}

/// Singular value thresholding: the prox of `τ‖·‖_*`.
pub fn svt<T: Scalar>(m: &Matrix<T>, tau: T) -> Result<Matrix<T>> {
    check_nonneg("tau", tau)?;
    let f = svd(m)?;
    let s: Vec<T> = f.singular_values.iter().map(|&s| (s - tau).max(T::zero())).collect();
    Ok(f.reassemble(&s))
}

/// Per entry, `argmin ½(x − v)² + t|x|` over `x ∈ [c − b, c + b]`.
/// `b = ∞` disables the box.
pub fn prox_l1_box<T: Scalar>(v: &Matrix<T>, center: &Matrix<T>, t: T, b: T) -> Result<Matrix<T>> {
    check_nonneg("t", t)?;
    if !(b > T::zero()) {
        return Err(Error::Parameter(format!("box radius must be positive, got {b}")));
    }
    v.zip_map(center, |x, c| {
        let s = shrink(x, t);
        if b.is_infinite() {
            s
        } else {
            s.max(c - b).min(c + b)
        }
    })
}

/// Entry-wise `min(max(x, −b), b)`.
pub fn clip_entries<T: Scalar>(m: &Matrix<T>, b: T) -> Result<Matrix<T>> {
    if !(b > T::zero()) {
        return Err(Error::Parameter(format!("clip bound must be positive, got {b}")));
    }
    Ok(m.map(|x| x.max(-b).min(b)))
}

/// Euclidean projection onto `{X : ‖X‖_v1 ≤ eps}`.
pub fn project_l1_ball<T: Scalar>(m: &Matrix<T>, eps: T) -> Result<Matrix<T>> {
    check_nonneg("eps", eps)?;
    let theta = l1_threshold(m.as_slice(), eps);
    Ok(m.map(|x| shrink(x, theta)))
}

/// Euclidean projection onto `{X : ‖X‖_* ≤ eps}`.
pub fn project_nuclear_ball<T: Scalar>(m: &Matrix<T>, eps: T) -> Result<Matrix<T>> {
    check_nonneg("eps", eps)?;
    let f = svd(m)?;
    let total: T = f.singular_values.iter().copied().sum();
    if total <= eps {
        return Ok(m.clone());
    }
    let theta = l1_threshold(&f.singular_values, eps);
    let s: Vec<T> = f.singular_values.iter().map(|&s| (s - theta).max(T::zero())).collect();
    Ok(f.reassemble(&s))
}

/// Smallest `θ ≥ 0` with `Σ max(|x_i| − θ, 0) ≤ eps`, by sorting.
fn l1_threshold<T: Scalar>(xs: &[T], eps: T) -> T {
    let mut a: Vec<T> = xs.iter().map(|x| x.abs()).collect();
    let total: T = a.iter().copied().sum();
    if total <= eps {
        return T::zero();
    }
    if eps.is_zero() {
        return a.iter().copied().fold(T::zero(), T::max);
    }
    a.sort_by(|x, y| y.partial_cmp(x).expect("finite entries"));
    let mut cum = T::zero();
    let mut theta = T::zero();
    for (k, &x) in a.iter().enumerate() {
        cum += x;
        let cand = (cum - eps) / T::from_usize_lossy(k + 1);
        if cand < x {
            theta = cand;
        } else {
            break;
        }
    }
    theta.max(T::zero())
}

fn check_nonneg<T: Scalar>(name: &str, x: T) -> Result<()> {
    if !(x >= T::zero()) {
        return Err(Error::Parameter(format!("{name} must be nonnegative, got {x}")));
    }
    Ok(())
}
