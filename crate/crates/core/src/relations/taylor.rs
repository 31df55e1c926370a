use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::{Rational, Scalar};

/// Power series in `h` truncated after `h^order`.
#[derive(Clone, PartialEq)]
pub struct TaylorH<S: Scalar> {
    coeffs: Vec<S>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elementary {
    Sinh,
    Cosh,
    Exp,
}

impl<S: Scalar> TaylorH<S> {
    pub fn zero(order: usize) -> Self {
        TaylorH { coeffs: vec![S::zero(); order + 1] }
    }

    pub fn constant(c: S, order: usize) -> Self {
        let mut t = Self::zero(order);
        t.coeffs[0] = c;
        t
    }

    pub fn from_coeffs(mut coeffs: Vec<S>, order: usize) -> Self {
        coeffs.resize(order + 1, S::zero());
        TaylorH { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// `sinh(a h)`, `cosh(a h)` or `exp(a h)`.
    pub fn elementary(kind: Elementary, a: &S, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = S::one();
        for i in 0..=order {
            let keep = match kind {
                Elementary::Sinh => i % 2 == 1,
                Elementary::Cosh => i % 2 == 0,
                Elementary::Exp => true,
            };
            coeffs.push(if keep { term.clone() } else { S::zero() });
            term = (term * a).scale_ratio(1, i as i64 + 1);
        }
        TaylorH { coeffs }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().take(order + 1).cloned().collect(), order)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        TaylorH { coeffs: (0..=n).map(|i| self.coeffs[i].clone() + o.coeffs[i].clone()).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        TaylorH { coeffs: (0..=n).map(|i| self.coeffs[i].clone() - o.coeffs[i].clone()).collect() }
    }

    pub fn scale(&self, c: &S) -> Self {
        TaylorH { coeffs: self.coeffs.iter().map(|x| x.clone() * c).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let mut out = vec![S::zero(); n + 1];
        for i in 0..=n {
            for j in 0..=n - i {
                out[i + j] += &(self.coeffs[i].clone() * &o.coeffs[j]);
            }
        }
        TaylorH { coeffs: out }
    }

    fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// `self / o`. A common factor `h^v` is cancelled first, which lowers the
    /// order of the result by `v`.
    pub fn div(&self, o: &Self) -> Result<Self> {
        let v = o.valuation().ok_or(Error::ZeroDenominator)?;
        if self.coeffs.iter().take(v).any(|c| !c.is_zero()) {
            return Err(Error::ZeroDenominator);
        }
        let n = self.order().min(o.order()) - v;
        let num: Vec<S> = self.coeffs[v..=v + n].to_vec();
        let den: Vec<S> = o.coeffs[v..=v + n].to_vec();
        let inv0 = den[0].inverse().ok_or(Error::ZeroDenominator)?;
        let mut out: Vec<S> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut acc = num[i].clone();
            for j in 1..=i {
                acc -= &(den[j].clone() * &out[i - j]);
            }
            out.push(acc * &inv0);
        }
        Ok(TaylorH { coeffs: out })
    }
}

impl TaylorH<Rational> {
    /// `[n]_q = sinh(n h / 2) / sinh(h / 2)` with `q = e^h`.
    pub fn qint(n: u32, order: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("quantum integers start at 1".into()));
        }
        let num = Self::elementary(Elementary::Sinh, &Rational::ratio(n as i64, 2), order + 1);
        let den = Self::elementary(Elementary::Sinh, &Rational::ratio(1, 2), order + 1);
        num.div(&den)
    }
}

impl<S: Scalar> fmt::Debug for TaylorH<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| format!("({c}) h^{i}")).collect();
        if parts.is_empty() {
            write!(f, "0 + O(h^{})", self.order() + 1)
        } else {
            write!(f, "{} + O(h^{})", parts.join(" + "), self.order() + 1)
        }
    }
}
