use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use super::{Rational, Scalar};
use crate::error::{Error, Result};

/// `a + b*mu` with `mu^2 = d`.
///
/// The defining value `d` travels with each element. An element without a
/// context (`d = None`) is a plain base-field value and combines with any
/// context; combining two different contexts is an error.
#[derive(Clone)]
pub struct QuadExt<F: Scalar> {
    pub a: F,
    pub b: F,
    d: Option<Arc<F>>,
}

impl<F: Scalar> QuadExt<F> {
    pub fn new(a: F, b: F, d: Arc<F>) -> Self {
        QuadExt { a, b, d: Some(d) }
    }

    /// A base-field value, compatible with every context.
    pub fn base(a: F) -> Self {
        QuadExt { a, b: F::zero(), d: None }
    }

    /// The generator `mu` of the extension defined by `d`.
    pub fn mu(d: Arc<F>) -> Self {
        QuadExt { a: F::zero(), b: F::one(), d: Some(d) }
    }

    pub fn context(&self) -> Option<&Arc<F>> {
        self.d.as_ref()
    }

    pub fn conjugate(&self) -> Self {
        QuadExt { a: self.a.clone(), b: -self.b.clone(), d: self.d.clone() }
    }

    fn join(&self, other: &Self) -> Result<Option<Arc<F>>> {
        match (&self.d, &other.d) {
            (None, d) | (d, None) => Ok(d.clone()),
            (Some(x), Some(y)) if Arc::ptr_eq(x, y) || x == y => Ok(Some(x.clone())),
            _ => Err(Error::ContextMismatch),
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        let d = self.join(o)?;
        Ok(QuadExt { a: self.a.clone() + o.a.clone(), b: self.b.clone() + o.b.clone(), d })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        let d = self.join(o)?;
        Ok(QuadExt { a: self.a.clone() - o.a.clone(), b: self.b.clone() - o.b.clone(), d })
    }

    /// `(a1 + b1 mu)(a2 + b2 mu) = (a1 a2 + d b1 b2) + (a1 b2 + a2 b1) mu`.
    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        let d = self.join(o)?;
        let mut a = self.a.clone() * &o.a;
        let b = self.a.clone() * &o.b + self.b.clone() * &o.a;
        if !self.b.is_zero() && !o.b.is_zero() {
            let dv = d.as_ref().ok_or(Error::ContextMismatch)?;
            a += &(self.b.clone() * &o.b * dv.as_ref());
        }
        Ok(QuadExt { a, b, d })
    }

    /// The norm `a^2 - d b^2`.
    pub fn norm(&self) -> F {
        match &self.d {
            Some(d) => self.a.clone() * &self.a - self.b.clone() * &self.b * d.as_ref(),
            None => self.a.clone() * &self.a,
        }
    }
}

impl QuadExt<Rational> {
    pub fn rational(q: Rational) -> Self {
        QuadExt::base(q)
    }
}

impl<F: Scalar> PartialEq for QuadExt<F> {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b && self.join(o).is_ok()
    }
}

impl<F: Scalar> fmt::Debug for QuadExt<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<F: Scalar> fmt::Display for QuadExt<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + ({})*mu", self.a, self.b)
        }
    }
}

impl<F: Scalar> Add for QuadExt<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.try_add(&o).expect("quadratic extension context mismatch")
    }
}

impl<F: Scalar> Sub for QuadExt<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.try_sub(&o).expect("quadratic extension context mismatch")
    }
}

impl<F: Scalar> Mul for QuadExt<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.try_mul(&o).expect("quadratic extension context mismatch")
    }
}

impl<'a, F: Scalar> Mul<&'a QuadExt<F>> for QuadExt<F> {
    type Output = Self;
    fn mul(self, o: &'a Self) -> Self {
        self.try_mul(o).expect("quadratic extension context mismatch")
    }
}

impl<F: Scalar> Neg for QuadExt<F> {
    type Output = Self;
    fn neg(self) -> Self {
        QuadExt { a: -self.a, b: -self.b, d: self.d }
    }
}

impl<'a, F: Scalar> AddAssign<&'a QuadExt<F>> for QuadExt<F> {
    fn add_assign(&mut self, o: &'a Self) {
        self.d = self.join(o).expect("quadratic extension context mismatch");
        self.a += &o.a;
        self.b += &o.b;
    }
}

impl<'a, F: Scalar> SubAssign<&'a QuadExt<F>> for QuadExt<F> {
    fn sub_assign(&mut self, o: &'a Self) {
        self.d = self.join(o).expect("quadratic extension context mismatch");
        self.a -= &o.a;
        self.b -= &o.b;
    }
}

impl<'a, F: Scalar> MulAssign<&'a QuadExt<F>> for QuadExt<F> {
    fn mul_assign(&mut self, o: &'a Self) {
        *self = self.try_mul(o).expect("quadratic extension context mismatch");
    }
}

impl<F: Scalar> Scalar for QuadExt<F> {
    const EXACT: bool = F::EXACT;

    fn zero() -> Self {
        QuadExt::base(F::zero())
    }
    fn one() -> Self {
        QuadExt::base(F::one())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn from_i64(n: i64) -> Self {
        QuadExt::base(F::from_i64(n))
    }
    fn from_rational_like(q: &Rational, like: &Self) -> Self {
        // the defining value carries the working precision even when `a` is a bare constant
        let reference = like.d.as_deref().unwrap_or(&like.a);
        QuadExt::base(F::from_rational_like(q, reference))
    }
    fn scale_ratio(&self, num: i64, den: i64) -> Self {
        QuadExt { a: self.a.scale_ratio(num, den), b: self.b.scale_ratio(num, den), d: self.d.clone() }
    }
    fn inverse(&self) -> Option<Self> {
        let n = self.norm().inverse()?;
        let c = self.conjugate();
        Some(QuadExt { a: c.a * &n, b: c.b * &n, d: c.d })
    }
    fn magnitude(&self) -> f64 {
        let scale = self.d.as_ref().map(|d| d.magnitude().sqrt()).unwrap_or(0.0);
        self.a.magnitude() + self.b.magnitude() * scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(d: i64) -> Arc<Rational> {
        Arc::new(Rational::from_int(d))
    }

    fn q(a: i64, b: i64, d: &Arc<Rational>) -> QuadExt<Rational> {
        QuadExt::new(Rational::from_int(a), Rational::from_int(b), d.clone())
    }

    #[test]
    fn multiplication_examples() {
        let d = ctx(-4);
        let mu = QuadExt::mu(d.clone());
        assert_eq!(mu.clone() * mu.clone(), q(-4, 0, &d));
        assert_eq!(q(1, 1, &d) * q(1, -1, &d), q(5, 0, &d));
        assert_eq!(mu.pow(3), q(0, -4, &d));
    }

    #[test]
    fn mismatched_contexts_are_rejected() {
        let x = QuadExt::mu(ctx(-4));
        let y = QuadExt::mu(ctx(3));
        assert!(matches!(x.try_mul(&y), Err(Error::ContextMismatch)));
        // equal values in different allocations are the same context
        assert!(x.try_mul(&QuadExt::mu(ctx(-4))).is_ok());
    }

    #[test]
    fn inverse_roundtrip() {
        let d = ctx(-3);
        let x = q(2, 5, &d);
        assert_eq!(x.clone() * x.inverse().unwrap(), QuadExt::one());
    }
}
