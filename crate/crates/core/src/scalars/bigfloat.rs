use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use astro_float::{BigFloat as Astro, RoundingMode, Sign, Word, WORD_BIT_SIZE};
use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_integer::Integer;
use num_traits::{One, Signed};

use super::{Rational, Scalar};
use crate::error::{Error, Result};

/// Extra decimal digits carried beyond the requested precision.
pub const GUARD_DIGITS: u32 = 10;

const RM: RoundingMode = RoundingMode::ToEven;
const CONST_BITS: usize = 128;

/// Binary floating point number with a target decimal precision.
///
/// `digits` is the number of decimal places the value is meant to be good
/// for; the working precision is `digits + GUARD_DIGITS` decimal digits
/// rounded up to whole machine words. Integer constants built with
/// [`Scalar::from_i64`] carry `digits = 0` and adopt the precision of
/// whatever they are combined with.
#[derive(Clone)]
pub struct BigFloat {
    v: Astro,
    digits: u32,
}

/// Working precision in bits for `digits` decimal places.
pub fn bits_for_digits(digits: u32) -> usize {
    let raw = ((digits + GUARD_DIGITS) as f64 * std::f64::consts::LOG2_10).ceil() as usize;
    raw.div_ceil(WORD_BIT_SIZE).max(2) * WORD_BIT_SIZE
}

impl BigFloat {
    pub fn zero_with(digits: u32) -> Self {
        BigFloat { v: Astro::from_word(0, bits_for_digits(digits)), digits }
    }

    pub fn from_int_with(n: i64, digits: u32) -> Self {
        BigFloat { v: Astro::from_i64(n, bits_for_digits(digits)), digits }
    }

    pub fn from_rational(q: &Rational, digits: u32) -> Self {
        let p = bits_for_digits(digits);
        let n = int_to_astro(q.numer());
        let d = int_to_astro(q.denom());
        BigFloat { v: n.div(&d, p, RM), digits }
    }

    /// Parses a decimal (or `p/q`) string at the given precision.
    pub fn parse_with(s: &str, digits: u32) -> Result<Self> {
        Ok(Self::from_rational(&s.parse::<Rational>()?, digits))
    }

    /// `pi` at the working precision for `digits`.
    pub fn pi(digits: u32) -> Self {
        let mut cc = astro_float::Consts::new().expect("constant cache allocation");
        BigFloat { v: cc.pi(bits_for_digits(digits), RM), digits }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> usize {
        self.v.mantissa_max_bit_len().unwrap_or(CONST_BITS)
    }

    /// Returns the same value re-rounded to a new target precision.
    pub fn with_digits(&self, digits: u32) -> Self {
        let mut v = self.v.clone();
        // set_precision only fails on allocation errors
        let _ = v.set_precision(bits_for_digits(digits), RM);
        BigFloat { v, digits }
    }

    fn prec_with(&self, o: &Self) -> (usize, u32) {
        (self.bits().max(o.bits()), self.digits.max(o.digits))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.v.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let (p, digits) = self.prec_with(o);
        Ok(BigFloat { v: self.v.div(&o.v, p, RM), digits })
    }

    pub fn abs(&self) -> Self {
        let mut v = self.v.clone();
        if v.is_negative() {
            v.inv_sign();
        }
        BigFloat { v, digits: self.digits }
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative()
    }

    /// The exact binary value as a rational number.
    pub fn to_rational(&self) -> Rational {
        let Some((words, _bits, sign, exp, _)) = self.v.as_raw_parts() else {
            return Rational::zero();
        };
        if words.iter().all(|w| *w == 0) {
            return Rational::zero();
        }
        let m = words_to_biguint(words);
        // value = 0.m * 2^exp with m spanning all mantissa words
        let shift = exp as i64 - (words.len() * WORD_BIT_SIZE) as i64;
        let mut num = BigInt::from_biguint(BigSign::Plus, m);
        let mut den = BigInt::one();
        if shift >= 0 {
            num <<= shift as usize;
        } else {
            den <<= (-shift) as usize;
        }
        if sign == Sign::Neg {
            num = -num;
        }
        Rational::new(num, den).expect("power of two is nonzero")
    }

    /// Decimal expansion with exactly `places` fractional digits, correctly
    /// rounded (half to even) from the stored binary value.
    pub fn to_decimal(&self, places: usize) -> String {
        let q = self.to_rational();
        let scale = num_traits::pow(BigInt::from(10), places);
        let scaled = q.numer() * &scale;
        let (mut int, rem) = scaled.div_mod_floor(q.denom());
        let twice: BigInt = rem * 2;
        match twice.cmp(q.denom()) {
            Ordering::Greater => int += 1,
            Ordering::Equal if int.is_odd() => int += 1,
            _ => {}
        }
        let neg = int.is_negative();
        let digits = int.abs().to_string();
        let body = if places == 0 {
            digits
        } else {
            let padded = format!("{:0>width$}", digits, width = places + 1);
            let (a, b) = padded.split_at(padded.len() - places);
            format!("{a}.{b}")
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }

    /// Like [`BigFloat::to_decimal`] but refuses more places than the value carries.
    pub fn to_decimal_checked(&self, places: usize) -> Result<String> {
        if places > self.digits as usize {
            return Err(Error::PrecisionExceeded { requested: places, available: self.digits as usize });
        }
        Ok(self.to_decimal(places))
    }

    /// `10^-digits`, the absolute tolerance matching the target precision.
    pub fn epsilon(digits: u32) -> f64 {
        10f64.powi(-(digits as i32))
    }

    pub fn to_f64(&self) -> f64 {
        let Some((words, _, sign, exp, _)) = self.v.as_raw_parts() else {
            return f64::NAN;
        };
        let Some(top) = words.last() else { return 0.0 };
        if *top == 0 {
            return 0.0;
        }
        let lead = *top as f64 / 2f64.powi(WORD_BIT_SIZE as i32);
        let next = if words.len() > 1 {
            words[words.len() - 2] as f64 / 2f64.powi(2 * WORD_BIT_SIZE as i32)
        } else {
            0.0
        };
        let mag = (lead + next) * 2f64.powi(exp.clamp(-1100, 1100));
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    pub fn inner(&self) -> &Astro {
        &self.v
    }
}

// Words are 64 bits on 64-bit targets and 32 bits on wasm32.
fn words_to_biguint(words: &[Word]) -> BigUint {
    let mut digits = Vec::with_capacity(words.len() * 2);
    for w in words {
        #[allow(clippy::unnecessary_cast)]
        let w = *w as u64;
        digits.push(w as u32);
        if WORD_BIT_SIZE == 64 {
            digits.push((w >> 32) as u32);
        }
    }
    BigUint::new(digits)
}

fn int_to_astro(n: &BigInt) -> Astro {
    let (sign, words): (BigSign, Vec<Word>) = if WORD_BIT_SIZE == 64 {
        let (s, d) = n.to_u64_digits();
        (s, d.into_iter().map(|x| x as Word).collect())
    } else {
        let (s, d) = n.to_u32_digits();
        (s, d.into_iter().map(|x| x as Word).collect())
    };
    if words.is_empty() {
        return Astro::from_word(0, CONST_BITS);
    }
    let s = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
    Astro::from_words(&words, s, (words.len() * WORD_BIT_SIZE) as i32)
}

impl PartialEq for BigFloat {
    fn eq(&self, o: &Self) -> bool {
        self.v.cmp(&o.v) == Some(0)
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        self.v.cmp(&o.v).map(|c| c.cmp(&0))
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({}, {} digits)", self, self.digits)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let places = match f.precision() {
            Some(p) => p,
            None if self.digits == 0 => 20,
            None => self.digits as usize,
        };
        f.write_str(&self.to_decimal(places))
    }
}

impl FromStr for BigFloat {
    type Err = Error;

    /// Parses at a precision matching the number of digits written (at least 30).
    fn from_str(s: &str) -> Result<Self> {
        let written = s.chars().filter(|c| c.is_ascii_digit()).count() as u32;
        Self::parse_with(s, written.max(30))
    }
}

macro_rules! arith {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $m(self, o: BigFloat) -> BigFloat {
                let (p, digits) = self.prec_with(&o);
                BigFloat { v: self.v.$m(&o.v, p, RM), digits }
            }
        }
        impl<'a> $tr<&'a BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, o: &'a BigFloat) -> BigFloat {
                let (p, digits) = self.prec_with(o);
                BigFloat { v: self.v.$m(&o.v, p, RM), digits }
            }
        }
        impl<'a> $atr<&'a BigFloat> for BigFloat {
            fn $am(&mut self, o: &'a BigFloat) {
                let (p, digits) = self.prec_with(o);
                self.v = self.v.$m(&o.v, p, RM);
                self.digits = digits;
            }
        }
    };
}

arith!(Add, add, AddAssign, add_assign);
arith!(Sub, sub, SubAssign, sub_assign);
arith!(Mul, mul, MulAssign, mul_assign);

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(mut self) -> BigFloat {
        self.v.inv_sign();
        self
    }
}

impl Scalar for BigFloat {
    const EXACT: bool = false;

    fn zero() -> Self {
        BigFloat { v: Astro::from_word(0, CONST_BITS), digits: 0 }
    }
    fn one() -> Self {
        BigFloat { v: Astro::from_word(1, CONST_BITS), digits: 0 }
    }
    fn is_zero(&self) -> bool {
        self.v.is_zero()
    }
    fn from_i64(n: i64) -> Self {
        BigFloat { v: Astro::from_i64(n, CONST_BITS), digits: 0 }
    }
    fn from_rational_like(q: &Rational, like: &Self) -> Self {
        Self::from_rational(q, like.digits)
    }
    fn scale_ratio(&self, num: i64, den: i64) -> Self {
        let p = self.bits();
        let n = Astro::from_i64(num, CONST_BITS);
        let d = Astro::from_i64(den, CONST_BITS);
        BigFloat { v: self.v.mul(&n, p, RM).div(&d, p, RM), digits: self.digits }
    }
    fn inverse(&self) -> Option<Self> {
        (!self.v.is_zero()).then(|| BigFloat { v: self.v.reciprocal(self.bits(), RM), digits: self.digits })
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mantissa_layout_matches_exact_value() {
        for n in [1i64, -3, 7, 1 << 40, -(1 << 62)] {
            let x = BigFloat::from_int_with(n, 40);
            assert_eq!(x.to_rational(), Rational::from_int(n));
        }
        let half = BigFloat::from_rational(&Rational::ratio(-1, 2), 30);
        assert_eq!(half.to_rational(), Rational::ratio(-1, 2));
    }

    #[test]
    fn decimal_output_is_rounded() {
        let third = BigFloat::from_rational(&Rational::ratio(1, 3), 50);
        assert_eq!(third.to_decimal(5), "0.33333");
        let two_thirds = BigFloat::from_rational(&Rational::ratio(-2, 3), 50);
        assert_eq!(two_thirds.to_decimal(4), "-0.6667");
        assert_eq!(BigFloat::from_int_with(12, 10).to_decimal(0), "12");
        // exact binary halfway cases round to even
        assert_eq!(BigFloat::parse_with("0.125", 20).unwrap().to_decimal(2), "0.12");
        assert_eq!(BigFloat::parse_with("0.375", 20).unwrap().to_decimal(2), "0.38");
        assert_eq!(BigFloat::parse_with("-0.0625", 20).unwrap().to_decimal(1), "-0.1");
    }

    #[test]
    fn precision_guard() {
        let x = BigFloat::from_int_with(1, 20);
        assert!(x.to_decimal_checked(20).is_ok());
        assert!(matches!(x.to_decimal_checked(21), Err(Error::PrecisionExceeded { .. })));
    }

    #[test]
    fn constants_adopt_precision() {
        let x = BigFloat::from_rational(&Rational::ratio(1, 7), 100);
        let y = x.clone() * &BigFloat::from_i64(7);
        assert_eq!(y.digits(), 100);
        assert!((y - BigFloat::one()).magnitude() < 1e-105);
    }

    #[test]
    fn f64_view() {
        let x = BigFloat::parse_with("-1234.5", 20).unwrap();
        assert!((x.to_f64() + 1234.5).abs() < 1e-12);
        assert_eq!(BigFloat::zero().to_f64(), 0.0);
    }

    #[test]
    fn pi_digits() {
        assert_eq!(BigFloat::pi(50).to_decimal(10), "3.1415926536");
        assert_eq!(
            BigFloat::pi(60).to_decimal(50),
            "3.14159265358979323846264338327950288419716939937511"
        );
    }
}
