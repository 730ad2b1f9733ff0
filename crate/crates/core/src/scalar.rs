use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real floating-point scalar the decomposition routines are generic over.
///
/// Implemented for `f32` and `f64`. Tolerances quoted throughout the crate
/// assume `f64`; with `f32` they are floored at a small multiple of machine
/// epsilon (see [`Scalar::floor_tol`]).
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Convert an `f64` constant. All constants used by the crate are
    /// representable (possibly rounded) in every implementor.
    #[inline]
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    /// `max(tol, 64·eps)`: a tolerance that is still meaningful at this precision.
    #[inline]
    fn floor_tol(tol: f64) -> Self {
        let t = Self::c(tol);
        let f = Self::epsilon() * Self::c(64.0);
        if t > f {
            t
        } else {
            f
        }
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
