use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Scalar;
use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `n/d` in lowest terms.
    pub fn new(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self> {
        let d = d.into();
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(n.into(), d)))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    /// Small-integer ratio; panics on a zero denominator.
    pub fn ratio(n: i64, d: i64) -> Self {
        Rational::new(n, d).expect("nonzero denominator")
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn checked_div(&self, other: &Rational) -> Result<Rational> {
        if other.0.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(&self.0 / &other.0))
    }

    pub fn powi(&self, e: i32) -> Result<Rational> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            self.inverse()
                .map(|r| r.pow(e.unsigned_abs()))
                .ok_or(Error::ZeroDenominator)
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // very large numerator/denominator: go through logarithms of sizes
            let n = self.numer().bits() as i64;
            let d = self.denom().bits() as i64;
            let shift = (n - d).clamp(-1000, 1000);
            let scaled = if shift > 0 {
                BigRational::new(self.numer().clone(), self.denom().clone() << shift as usize)
            } else {
                BigRational::new(self.numer().clone() << (-shift) as usize, self.denom().clone())
            };
            scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
        })
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<BigRational> for Rational {
    fn from(q: BigRational) -> Self {
        Rational(q)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p`, `p/q`, or a plain decimal such as `-1.25`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            return Rational::new(n, d);
        }
        if let Some((int, frac)) = s.split_once('.') {
            let neg = int.starts_with('-');
            let int_digits = int.trim_start_matches(['-', '+']);
            if !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let digits = format!("{}{}", if int_digits.is_empty() { "0" } else { int_digits }, frac);
            let mut n: BigInt = digits.parse().map_err(|_| bad())?;
            if neg {
                n = -n;
            }
            let d = num_traits::pow(BigInt::from(10), frac.len());
            return Rational::new(n, d);
        }
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rational::from_int(n))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, o: Rational) -> Rational {
                Rational(self.0.$m(o.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, o: &'a Rational) -> Rational {
                Rational(self.0.$m(&o.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, o: &'b Rational) -> Rational {
                Rational((&self.0).$m(&o.0))
            }
        }
        impl<'a> $atr<&'a Rational> for Rational {
            fn $am(&mut self, o: &'a Rational) {
                self.0.$am(&o.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl Div for Rational {
    type Output = Rational;
    /// Panics on division by zero; use [`Rational::checked_div`] when the divisor may vanish.
    fn div(self, o: Rational) -> Rational {
        Rational(self.0 / o.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_int(n)
    }
    fn from_rational_like(q: &Rational, _like: &Self) -> Self {
        q.clone()
    }
    fn scale_ratio(&self, num: i64, den: i64) -> Self {
        Rational(&self.0 * BigRational::new(num.into(), den.into()))
    }
    fn inverse(&self) -> Option<Self> {
        (!self.0.is_zero()).then(|| Rational(self.0.recip()))
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_examples() {
        assert_eq!(Rational::new(2, 4).unwrap().to_string(), "1/2");
        assert_eq!(Rational::new(-3, -6).unwrap().to_string(), "1/2");
        assert_eq!(Rational::new(0, 7).unwrap().to_string(), "0/1");
        assert!(matches!(Rational::new(1, 0), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn parses_all_forms() {
        assert_eq!("3/-6".parse::<Rational>().unwrap(), Rational::ratio(-1, 2));
        assert_eq!("-1.25".parse::<Rational>().unwrap(), Rational::ratio(-5, 4));
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::from_int(7));
        assert!("x/2".parse::<Rational>().is_err());
    }

    #[test]
    fn negative_powers() {
        assert_eq!(Rational::ratio(2, 3).powi(-2).unwrap(), Rational::ratio(9, 4));
        assert!(Rational::zero().powi(-1).is_err());
    }
}
