//! Truncated noncommutative power series in `X0`, `X1`.
//!
//! Coefficients live in a sparse map keyed by packed [`Word`]s; every stored
//! word has length at most the truncation order. The index/word convention
//! lives in [`word`] and nowhere else.

mod io;
mod lie;
mod shuffle;
mod subst;
pub mod word;

pub use io::TextScalar;
pub use lie::{lyndon_words, random_grouplike, random_grouplike_no_linear, random_lie};
pub use shuffle::{
    duality_partner, is_grouplike, max_grouplike_defect, regularized_coeff, series_from_admissible, shuffle_words,
    tau, tau_decompose, ZetaMap, ZetaProvider,
};
pub use subst::{grt_mul, substitute, substitute_apply, GradedAlgebra, SeriesAlgebra};
pub use word::{index_to_word, word_to_index, Index, Word};

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::Scalar;

#[derive(Clone, PartialEq)]
pub struct NCSeries<S: Scalar> {
    order: usize,
    terms: BTreeMap<Word, S>,
}

impl<S: Scalar> NCSeries<S> {
    pub fn zero(order: usize) -> Self {
        NCSeries { order, terms: BTreeMap::new() }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, Word::EMPTY, S::one())
    }

    /// `c * w`, or zero when `w` is longer than the order.
    pub fn monomial(order: usize, w: Word, c: S) -> Self {
        let mut s = Self::zero(order);
        s.add_term(w, &c);
        s
    }

    /// `a*X0 + b*X1`.
    pub fn linear(order: usize, a: S, b: S) -> Self {
        let mut s = Self::zero(order);
        s.add_term(Word::X0, &a);
        s.add_term(Word::X1, &b);
        s
    }

    pub fn from_terms(order: usize, terms: impl IntoIterator<Item = (Word, S)>) -> Self {
        let mut s = Self::zero(order);
        for (w, c) in terms {
            s.add_term(w, &c);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, w: Word) -> S {
        self.terms.get(&w).cloned().unwrap_or_else(S::zero)
    }

    pub fn get(&self, w: Word) -> Option<&S> {
        self.terms.get(&w)
    }

    pub fn constant_term(&self) -> S {
        self.coeff(Word::EMPTY)
    }

    /// Overwrites one coefficient; words beyond the order are dropped.
    pub fn set(&mut self, w: Word, c: S) {
        if w.len() > self.order {
            return;
        }
        if c.is_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, c);
        }
    }

    /// Adds `c` to the coefficient of `w`; words beyond the order are dropped.
    pub fn add_term(&mut self, w: Word, c: &S) {
        if w.len() > self.order || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient magnitude (0 for the zero series).
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// True when every coefficient is zero (exact) or below `tol`.
    pub fn is_negligible(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.is_negligible(tol))
    }

    pub fn with_order(&self, order: usize) -> Self {
        NCSeries { order, terms: self.terms.iter().filter(|(w, _)| w.len() <= order).map(|(w, c)| (*w, c.clone())).collect() }
    }

    /// The homogeneous part of degree `n`.
    pub fn degree_part(&self, n: usize) -> Self {
        NCSeries { order: self.order, terms: self.terms.iter().filter(|(w, _)| w.len() == n).map(|(w, c)| (*w, c.clone())).collect() }
    }

    /// Lowest degree carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).min()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> NCSeries<T> {
        let mut out = NCSeries::zero(self.order);
        for (w, c) in &self.terms {
            out.add_term(*w, &f(c));
        }
        out
    }

    pub fn map_words(&self, f: impl Fn(Word) -> Word) -> Self {
        let mut out = Self::zero(self.order);
        for (w, c) in &self.terms {
            out.add_term(f(*w), c);
        }
        out
    }

    fn check_order(&self, o: &Self) -> Result<()> {
        if self.order != o.order {
            return Err(Error::OrderMismatch(self.order, o.order));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_order(o)?;
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(*w, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.check_order(o)?;
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(*w, &(-c.clone()));
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.order);
        for (w, v) in &self.terms {
            out.add_term(*w, &(v.clone() * c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    /// Concatenation product truncated at the common order.
    pub fn concat_mul(&self, o: &Self) -> Result<Self> {
        self.check_order(o)?;
        Ok(self.mul_unchecked(o))
    }

    fn mul_unchecked(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.order);
        for (w1, c1) in &self.terms {
            let room = self.order - w1.len();
            for (w2, c2) in o.terms.range(..Word::from_bits(0, room + 1)) {
                out.add_term(w1.concat(*w2), &(c1.clone() * c2));
            }
        }
        out
    }

    /// Each word reversed with sign `(-1)^len`.
    pub fn antipode(&self) -> Self {
        let mut out = Self::zero(self.order);
        for (w, c) in &self.terms {
            let c = if w.len() % 2 == 1 { -c.clone() } else { c.clone() };
            out.add_term(w.reversed(), &c);
        }
        out
    }

    /// `f(X1, X0)`.
    pub fn swap_letters(&self) -> Self {
        self.map_words(Word::swapped)
    }

    /// Multiplicative inverse via the geometric series.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let inv0 = c0.inverse().ok_or(Error::NotInvertible)?;
        // f = c0 (1 + g), f^-1 = (1 - g + g^2 - ...) / c0
        let mut g = self.scale(&inv0);
        g.set(Word::EMPTY, S::zero());
        let neg_g = g.neg();
        let mut acc = Self::one(self.order);
        let mut power = Self::one(self.order);
        for _ in 0..self.order {
            power = power.mul_unchecked(&neg_g);
            if power.is_zero() {
                break;
            }
            acc = acc.try_add(&power)?;
        }
        Ok(acc.scale(&inv0))
    }

    /// `exp(f)` for `f` without constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Precondition("exp needs a series without constant term".into()));
        }
        let mut acc = Self::one(self.order);
        let mut term = Self::one(self.order);
        for n in 1..=self.order {
            term = term.mul_unchecked(self).map(|c| c.scale_ratio(1, n as i64));
            if term.is_zero() {
                break;
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }

    /// `log(f)` for `f` with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if self.constant_term() != S::one() {
            return Err(Error::Precondition("log needs constant term 1".into()));
        }
        let mut g = self.clone();
        g.set(Word::EMPTY, S::zero());
        let mut acc = Self::zero(self.order);
        let mut power = Self::one(self.order);
        for n in 1..=self.order {
            power = power.mul_unchecked(&g);
            if power.is_zero() {
                break;
            }
            let sign = if n % 2 == 1 { 1 } else { -1 };
            acc = acc.try_add(&power.map(|c| c.scale_ratio(sign, n as i64)))?;
        }
        Ok(acc)
    }

    /// Keeps the constant term and the words starting with `X0` and ending with `X1`.
    pub fn pi_project(&self) -> Self {
        NCSeries {
            order: self.order,
            terms: self.terms.iter().filter(|(w, _)| w.is_empty() || w.is_convergent()).map(|(w, c)| (*w, c.clone())).collect(),
        }
    }

    /// `(-1)^dp(k)` times the coefficient of the word of `k`.
    pub fn zeta_of(&self, k: &Index) -> Result<S> {
        if k.wt() > self.order {
            return Err(Error::Truncation { weight: k.wt(), order: self.order });
        }
        let c = self.coeff(index_to_word(k));
        Ok(if k.dp() % 2 == 1 { -c } else { c })
    }

    /// `f(X0,X1) f(X1,X0) - 1`.
    pub fn two_cycle_residual(&self) -> Self {
        let prod = self.mul_unchecked(&self.swap_letters());
        let mut out = prod;
        out.add_term(Word::EMPTY, &(-S::one()));
        out
    }
}

impl<S: Scalar> fmt::Debug for NCSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCSeries(order {}", self.order)?;
        for (w, c) in &self.terms {
            write!(f, ", {w}: {c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rational;

    type Q = Rational;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    fn series(order: usize, terms: &[(&str, i64, i64)]) -> NCSeries<Q> {
        NCSeries::from_terms(order, terms.iter().map(|(s, n, d)| (w(s), q(*n, *d))))
    }

    #[test]
    fn products() {
        let a = series(4, &[("-", 1, 1), ("0", 1, 1)]);
        let b = series(4, &[("-", 1, 1), ("1", 1, 1)]);
        assert_eq!(a.concat_mul(&b).unwrap(), series(4, &[("-", 1, 1), ("0", 1, 1), ("1", 1, 1), ("01", 1, 1)]));
        assert_eq!(a.concat_mul(&NCSeries::one(4)).unwrap(), a);
        let x0 = series(4, &[("0", 1, 1)]);
        let x1 = series(4, &[("1", 1, 1)]);
        assert_ne!(x0.concat_mul(&x1).unwrap(), x1.concat_mul(&x0).unwrap());
        assert!(matches!(a.concat_mul(&NCSeries::one(3)), Err(Error::OrderMismatch(4, 3))));
    }

    #[test]
    fn zeta_sign_convention() {
        let f = series(3, &[("-", 1, 1), ("01", -3, 2), ("011", 5, 7)]);
        assert_eq!(f.zeta_of(&"2".parse().unwrap()).unwrap(), q(3, 2));
        assert_eq!(f.zeta_of(&"1,2".parse().unwrap()).unwrap(), q(5, 7));
        assert_eq!(NCSeries::<Q>::one(3).zeta_of(&"3".parse().unwrap()).unwrap(), q(0, 1));
        assert!(matches!(f.zeta_of(&"4".parse().unwrap()), Err(Error::Truncation { .. })));
    }

    #[test]
    fn inverse_and_antipode() {
        let f = series(5, &[("-", 1, 1), ("0", 1, 1)]);
        let inv = f.inverse().unwrap();
        let expect: Vec<(String, i64, i64)> =
            (0..=5).map(|n| (if n == 0 { "-".to_string() } else { "0".repeat(n) }, if n % 2 == 0 { 1 } else { -1 }, 1)).collect();
        let expect = NCSeries::from_terms(5, expect.iter().map(|(s, a, b)| (w(s), q(*a, *b))));
        assert_eq!(inv, expect);
        assert!(matches!(series(3, &[("0", 1, 1)]).inverse(), Err(Error::NotInvertible)));
        assert_eq!(series(3, &[("01", 1, 1)]).antipode(), series(3, &[("10", 1, 1)]));
        assert_eq!(series(3, &[("0", 1, 1)]).antipode(), series(3, &[("0", -1, 1)]));
    }

    #[test]
    fn exp_log() {
        assert_eq!(NCSeries::<Q>::zero(4).exp().unwrap(), NCSeries::one(4));
        let e = series(5, &[("0", 1, 1)]).exp().unwrap();
        assert_eq!(e.coeff(w("0000")), q(1, 24));
        let x = series(6, &[("0", 1, 1), ("1", 1, 1)]);
        assert_eq!(x.exp().unwrap().log().unwrap(), x);
        assert!(NCSeries::<Q>::one(3).exp().is_err());
        assert!(x.log().is_err());
    }

    #[test]
    fn projection() {
        assert!(series(3, &[("10", 1, 1)]).pi_project().is_zero());
        let f = series(3, &[("-", 1, 1), ("001", 1, 1), ("010", 1, 1)]);
        assert_eq!(f.pi_project(), series(3, &[("-", 1, 1), ("001", 1, 1)]));
    }

    #[test]
    fn two_cycle_example() {
        let f = series(4, &[("-", 1, 1), ("01", 1, 1)]);
        let r = f.two_cycle_residual();
        assert_eq!(r.coeff(w("01")), q(1, 1));
        assert_eq!(r.coeff(w("10")), q(1, 1));
        assert_eq!(r.coeff(w("0110")), q(1, 1));
        assert!(NCSeries::<Q>::one(4).two_cycle_residual().is_zero());
    }
}
