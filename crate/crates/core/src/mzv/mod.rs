//! Multiple zeta values `zeta(k1, ..., km) = sum_{0 < n1 < ... < nm} 1 / (n1^k1 ... nm^km)`.
//!
//! [`eval`] splits the iterated integral at 1/2: with `w` the word of `k`,
//! `zeta(k) = sum_j L(dual(w[..j])) L(w[j..])` where `L` is a multiple
//! polylogarithm at 1/2 and `dual` reverses a word and swaps its letters.
//! Each factor is a nested sum whose outer terms carry `2^-n`, so `M` terms
//! give about `M` bits. [`partial_sum`] is the slow, method-independent oracle.

mod cache;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use cache::{MzvCache, Record};

use crate::error::{Error, Result};
use crate::ncseries::{index_to_word, Index, Word, ZetaMap, ZetaProvider};
use crate::par;
use crate::scalars::{BigFloat, Scalar, GUARD_DIGITS};

/// Largest supported precision in decimal digits.
pub const MAX_DIGITS: u32 = 5000;

/// Default working precision.
pub const DEFAULT_DIGITS: u32 = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Accelerated,
    PartialSum,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Accelerated => "accelerated",
            Method::PartialSum => "partial-sum",
        }
    }

    pub fn from_tag(s: &str) -> Result<Self> {
        match s {
            "accelerated" => Ok(Method::Accelerated),
            "partial-sum" => Ok(Method::PartialSum),
            _ => Err(Error::Parse(format!("unknown method tag {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MzvResult {
    pub index: Index,
    pub digits: u32,
    pub value: BigFloat,
    pub method: Method,
}

fn check_admissible(k: &Index) -> Result<()> {
    if k.is_admissible() {
        Ok(())
    } else {
        Err(Error::NotAdmissible(k.to_string()))
    }
}

fn check_digits(digits: u32) -> Result<()> {
    if digits == 0 || digits > MAX_DIGITS {
        return Err(Error::PrecisionExceeded { requested: digits as usize, available: MAX_DIGITS as usize });
    }
    Ok(())
}

/// Finite sum over `0 < n1 < ... < nm <= cutoff`.
pub fn partial_sum(k: &Index, cutoff: usize, digits: u32) -> Result<BigFloat> {
    check_admissible(k)?;
    let parts = k.parts();
    if cutoff < parts.len() {
        return Err(Error::Invalid(format!("cutoff {cutoff} is below the depth of {k}")));
    }
    let inv = InversePowers::new(cutoff, *parts.iter().max().unwrap_or(&1) as usize, digits);
    // acc[n] = sum over chains of the first j parts ending at or below n
    let mut acc = vec![BigFloat::from_int_with(1, digits); cutoff + 1];
    for &s in parts {
        let mut next = vec![BigFloat::zero_with(digits); cutoff + 1];
        for n in 1..=cutoff {
            let term = acc[n - 1].clone() * inv.get(s as usize, n);
            next[n] = next[n - 1].clone() + &term;
        }
        acc = next;
    }
    Ok(acc[cutoff].clone())
}

/// Upper bound on `zeta(k) - partial_sum(k, cutoff)`, when the bound applies.
///
/// Chains below `n` contribute at most `(1 + ln n)^(m-1)`, so the tail is at
/// most `int_M^inf (1 + ln x)^(m-1) / x^2 dx`, valid once the integrand is
/// decreasing on `[M, inf)`.
pub fn tail_bound(k: &Index, cutoff: usize) -> Option<f64> {
    if !k.is_admissible() || cutoff == 0 {
        return None;
    }
    let j = k.dp() - 1;
    let l = 1.0 + (cutoff as f64).ln();
    if (j as f64) > 2.0 * l {
        return None;
    }
    let mut total = 0.0;
    let mut fall = 1.0;
    for i in 0..=j {
        total += fall * l.powi((j - i) as i32);
        fall *= (j - i) as f64;
    }
    Some(total / cutoff as f64)
}

/// `1 / n^s` and `2^-n` at a fixed precision.
struct InversePowers {
    inv: Vec<Vec<BigFloat>>,
}

impl InversePowers {
    fn new(cutoff: usize, max_s: usize, digits: u32) -> Self {
        let one = BigFloat::from_int_with(1, digits);
        let first: Vec<BigFloat> =
            (0..=cutoff).map(|n| if n == 0 { one.clone() } else { one.div(&BigFloat::from_int_with(n as i64, digits)).unwrap() }).collect();
        let mut inv = vec![first.clone()];
        for _ in 1..max_s.max(1) {
            let prev = inv.last().unwrap();
            inv.push(prev.iter().zip(&first).map(|(a, b)| a.clone() * b).collect());
        }
        InversePowers { inv }
    }

    fn get(&self, s: usize, n: usize) -> &BigFloat {
        &self.inv[s - 1][n]
    }
}

/// Multiple polylogarithms at 1/2 for a set of words, at one precision.
struct HalfPolylogs {
    digits: u32,
    terms: usize,
    powers: InversePowers,
    halves: Vec<BigFloat>,
}

impl HalfPolylogs {
    fn new(digits: u32, max_weight: usize) -> Self {
        let bits = (digits + GUARD_DIGITS) as f64 * std::f64::consts::LOG2_10;
        let terms = bits.ceil() as usize + 60;
        let powers = InversePowers::new(terms, max_weight.max(1), digits);
        let half = BigFloat::from_int_with(1, digits).scale_ratio(1, 2);
        let mut halves = vec![BigFloat::from_int_with(1, digits)];
        for n in 1..=terms {
            halves.push(halves[n - 1].clone() * &half);
        }
        HalfPolylogs { digits, terms, powers, halves }
    }

    /// `sum_{n1 > ... > nk >= 1} 2^-n1 / (n1^s1 ... nk^sk)` for the word
    /// `X0^(s1-1) X1 ... X0^(sk-1) X1`; the empty word gives 1.
    fn li(&self, w: Word) -> BigFloat {
        let mut comp = Vec::new();
        let mut run = 0;
        for l in w.letters() {
            run += 1;
            if l == 1 {
                comp.push(run);
                run = 0;
            }
        }
        debug_assert_eq!(run, 0, "word must end in X1");
        let m = self.terms;
        let mut prev = vec![BigFloat::from_int_with(1, self.digits); m + 1];
        for (j, &s) in comp.iter().enumerate().rev() {
            let mut cur = vec![BigFloat::zero_with(self.digits); m + 1];
            for n in 1..=m {
                let mut term = prev[n - 1].clone() * self.powers.get(s, n);
                if j == 0 {
                    term *= &self.halves[n];
                }
                cur[n] = cur[n - 1].clone() + &term;
            }
            prev = cur;
        }
        prev.swap_remove(m)
    }
}

fn split_words(w: Word) -> impl Iterator<Item = (Word, Word)> {
    (0..=w.len()).map(move |j| (w.prefix(j).reversed().swapped(), w.suffix_from(j)))
}

/// Evaluates several indices, sharing polylogarithm values between them.
pub fn eval_many(ks: &[Index], digits: u32) -> Result<Vec<MzvResult>> {
    check_digits(digits)?;
    for k in ks {
        check_admissible(k)?;
    }
    let max_w = ks.iter().map(Index::wt).max().unwrap_or(0);
    let hp = HalfPolylogs::new(digits, max_w);
    let mut needed: Vec<Word> = ks.iter().flat_map(|k| split_words(index_to_word(k)).flat_map(|(a, b)| [a, b])).collect();
    needed.sort();
    needed.dedup();
    let values = par::map(needed.clone(), |w| hp.li(w));
    let li: BTreeMap<Word, BigFloat> = needed.into_iter().zip(values).collect();
    Ok(ks
        .iter()
        .map(|k| {
            let mut acc = BigFloat::zero_with(digits);
            for (a, b) in split_words(index_to_word(k)) {
                acc += &(li[&a].clone() * &li[&b]);
            }
            MzvResult { index: k.clone(), digits, value: acc, method: Method::Accelerated }
        })
        .collect())
}

pub fn eval(k: &Index, digits: u32) -> Result<MzvResult> {
    Ok(eval_many(std::slice::from_ref(k), digits)?.remove(0))
}

/// All admissible indices of weight `2..=max_w`, served from the cache when
/// it holds enough digits and evaluated (then appended) otherwise.
pub fn table(max_w: usize, digits: u32, cache: &MzvCache) -> Result<BTreeMap<Index, BigFloat>> {
    if max_w < 2 {
        return Err(Error::Invalid(format!("maximum weight {max_w} is below 2")));
    }
    check_digits(digits)?;
    let all = Index::admissible_up_to(max_w);
    let missing: Vec<Index> = all.iter().filter(|k| cache.get(k, digits).is_none()).cloned().collect();
    if !missing.is_empty() {
        cache.insert_all(&eval_many(&missing, digits)?)?;
    }
    all.into_iter()
        .map(|k| {
            let v = cache.get(&k, digits).ok_or_else(|| Error::MissingZeta(k.to_string()))?;
            Ok((k, v))
        })
        .collect()
}

/// [`table`] wrapped as a provider.
pub fn zeta_map(max_w: usize, digits: u32, cache: &MzvCache) -> Result<ZetaMap<BigFloat>> {
    Ok(ZetaMap(table(max_w, digits, cache)?))
}

/// Evaluates on demand, without a cache.
#[derive(Clone, Copy, Debug)]
pub struct Numeric {
    pub digits: u32,
}

impl ZetaProvider<BigFloat> for Numeric {
    fn zeta(&self, k: &Index) -> Result<BigFloat> {
        Ok(eval(k, self.digits)?.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncseries::duality_partner;

    fn idx(s: &str) -> Index {
        s.parse().unwrap()
    }

    fn close(a: &BigFloat, b: &BigFloat, tol: f64) -> bool {
        (a.clone() - b).magnitude() <= tol
    }

    #[test]
    fn partial_sums() {
        let s = partial_sum(&idx("2"), 10, 30).unwrap();
        assert_eq!(s.to_decimal(6), "1.549768");
        assert_eq!(partial_sum(&idx("2"), 1, 30).unwrap().to_decimal(10), "1.0000000000");
        assert!(partial_sum(&idx("2,1"), 10, 30).is_err());
        assert!(partial_sum(&idx("1,2"), 1, 30).is_err());
    }

    #[test]
    fn partial_sums_increase_toward_value_within_tail_bound() {
        for k in ["2", "1,2", "3", "1,1,2", "2,2"] {
            let k = idx(k);
            let exact = eval(&k, 30).unwrap().value;
            let mut last = BigFloat::zero();
            for m in [k.dp(), 20, 100, 400] {
                let s = partial_sum(&k, m, 30).unwrap();
                assert!(s > last);
                assert!(s < exact);
                if let Some(b) = tail_bound(&k, m) {
                    assert!((exact.clone() - &s).to_f64() <= b, "{k} at {m}");
                }
                last = s;
            }
        }
    }

    #[test]
    fn classical_values() {
        let pi = BigFloat::pi(60);
        let pi2 = pi.clone() * &pi;
        let z2 = pi2.clone().scale_ratio(1, 6);
        let z4 = (pi2.clone() * &pi2).scale_ratio(1, 90);
        assert!(close(&eval(&idx("2"), 50).unwrap().value, &z2, 1e-50));
        assert!(close(&eval(&idx("4"), 50).unwrap().value, &z4, 1e-50));
        let z3 = eval(&idx("3"), 50).unwrap().value;
        assert!(close(&eval(&idx("1,2"), 50).unwrap().value, &z3, 1e-50));
    }

    #[test]
    fn stuffle_and_duality() {
        let v = eval_many(&[idx("2"), idx("2,2"), idx("4")], 60).unwrap();
        let lhs = v[0].value.clone() * &v[0].value;
        let rhs = v[1].value.clone().scale_ratio(2, 1) + &v[2].value;
        assert!(close(&lhs, &rhs, 1e-55));
        let ks = Index::admissible_up_to(8);
        let vals = eval_many(&ks, 45).unwrap();
        let by: BTreeMap<_, _> = vals.into_iter().map(|r| (r.index, r.value)).collect();
        for k in &ks {
            assert!(close(&by[k], &by[&duality_partner(k).unwrap()], 1e-42), "{k}");
        }
    }

    #[test]
    fn precision_doubling_keeps_digits() {
        for k in ["2", "1,3", "2,1,2"] {
            let a = eval(&idx(k), 30).unwrap().value.to_decimal(30);
            let b = eval(&idx(k), 60).unwrap().value.to_decimal(30);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(matches!(eval(&idx("2,1"), 30), Err(Error::NotAdmissible(_))));
        assert!(eval(&idx("2"), MAX_DIGITS + 1).is_err());
    }
}
