//! Coefficient arithmetic shared by every other module.
//!
//! Three coefficient kinds are used: exact [`Rational`]s, the quadratic
//! extension [`QuadExt`] that adjoins a square root `mu` of a fixed value `d`,
//! and the arbitrary-precision binary float [`BigFloat`]. Plain `f64` also
//! implements [`Scalar`] so quick numerical experiments and the browser demo
//! can reuse the generic code paths.

mod bigfloat;
mod quadext;
mod rational;

pub use bigfloat::{BigFloat, GUARD_DIGITS};
pub use quadext::QuadExt;
pub use rational::Rational;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// A commutative coefficient ring with enough structure for truncated series.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    /// True when arithmetic is exact and residuals must vanish identically.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;

    /// Converts an exact rational, borrowing any precision or context from `like`.
    fn from_rational_like(q: &Rational, like: &Self) -> Self;

    /// `self * num / den`.
    fn scale_ratio(&self, num: i64, den: i64) -> Self;

    /// Multiplicative inverse, `None` for zero (or a non-invertible element).
    fn inverse(&self) -> Option<Self>;

    /// Absolute size used by tolerance checks.
    fn magnitude(&self) -> f64;

    fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            e >>= 1;
            if e > 0 {
                let b2 = base.clone() * &base;
                base = b2;
            }
        }
        acc
    }

    /// True if the value is zero exactly, or below `tol` for approximate kinds.
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= tol
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_rational_like(q: &Rational, _like: &Self) -> Self {
        q.to_f64()
    }
    fn scale_ratio(&self, num: i64, den: i64) -> Self {
        self * num as f64 / den as f64
    }
    fn inverse(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}
