use std::collections::BTreeMap;

use super::word::{word_to_index, Index, Word};
use super::NCSeries;
use crate::error::{Error, Result};
use crate::par;
use crate::scalars::Scalar;

/// All interleavings of `u` and `v` with multiplicity.
pub fn shuffle_words(u: Word, v: Word) -> BTreeMap<Word, u64> {
    let mut out = BTreeMap::new();
    fn rec(u: Word, i: usize, v: Word, j: usize, acc: Word, out: &mut BTreeMap<Word, u64>) {
        if i == u.len() {
            *out.entry(acc.concat(v.suffix_from(j))).or_insert(0) += 1;
            return;
        }
        if j == v.len() {
            *out.entry(acc.concat(u.suffix_from(i))).or_insert(0) += 1;
            return;
        }
        rec(u, i + 1, v, j, acc.push(u.get(i)), out);
        rec(u, i, v, j + 1, acc.push(v.get(j)), out);
    }
    rec(u, 0, v, 0, Word::EMPTY, &mut out);
    out
}

fn shuffle_into(acc: &BTreeMap<Word, i64>, v: Word) -> BTreeMap<Word, i64> {
    let mut out = BTreeMap::new();
    for (w, m) in acc {
        for (x, n) in shuffle_words(*w, v) {
            *out.entry(x).or_insert(0) += m * n as i64;
        }
    }
    out
}

/// A map from admissible indices to values: the `zeta_phi` of a candidate.
pub trait ZetaProvider<S: Scalar>: Sync {
    fn zeta(&self, k: &Index) -> Result<S>;
}

impl<S: Scalar> ZetaProvider<S> for NCSeries<S> {
    fn zeta(&self, k: &Index) -> Result<S> {
        self.zeta_of(k)
    }
}

/// Table-backed provider.
#[derive(Clone, Debug, Default)]
pub struct ZetaMap<S: Scalar>(pub BTreeMap<Index, S>);

impl<S: Scalar> ZetaMap<S> {
    /// Pulls every admissible value of weight `<= max_w` out of `z`.
    pub fn collect(z: &dyn ZetaProvider<S>, max_w: usize) -> Result<Self> {
        let mut m = BTreeMap::new();
        for k in Index::admissible_up_to(max_w) {
            let v = z.zeta(&k)?;
            m.insert(k, v);
        }
        Ok(ZetaMap(m))
    }
}

impl<S: Scalar> ZetaProvider<S> for ZetaMap<S> {
    fn zeta(&self, k: &Index) -> Result<S> {
        self.0.get(k).cloned().ok_or_else(|| Error::MissingZeta(k.to_string()))
    }
}

/// Coefficient of a word that starts with `X0` and ends with `X1` (or is empty).
fn convergent_coeff<S: Scalar>(z: &dyn ZetaProvider<S>, w: Word) -> Result<S> {
    if w.is_empty() {
        return Ok(S::one());
    }
    let k = word_to_index(w).expect("convergent word ends in X1");
    let v = z.zeta(&k)?;
    Ok(if k.dp() % 2 == 1 { -v } else { v })
}

/// Coefficient of an arbitrary word of a group-like series without linear
/// terms, computed from its admissible coefficients.
///
/// Writing `w = X1^r V X0^s`, the value is
/// `sum_{a,b} (-1)^{a+b} I(pi(X1^a sh X1^{r-a} V X0^{s-b} sh X0^b))`.
pub fn regularized_coeff<S: Scalar>(z: &dyn ZetaProvider<S>, w: Word) -> Result<S> {
    if w.is_empty() || w.is_convergent() {
        return convergent_coeff(z, w);
    }
    let n = w.len();
    let r = w.letters().take_while(|&l| l == 1).count();
    let s = (w.bits().trailing_zeros() as usize).min(n - r);
    let v = w.suffix_from(r).prefix(n - r - s);

    // combined multiplicity of every projected word
    let mut total: BTreeMap<Word, i64> = BTreeMap::new();
    for a in 0..=r {
        for b in 0..=s {
            let mid = Word::power(1, r - a).concat(v).concat(Word::power(0, s - b));
            let mut acc = BTreeMap::from([(Word::power(1, a), 1i64)]);
            acc = shuffle_into(&acc, mid);
            acc = shuffle_into(&acc, Word::power(0, b));
            let sign = if (a + b) % 2 == 0 { 1 } else { -1 };
            for (x, m) in acc {
                if x.is_empty() || x.is_convergent() {
                    *total.entry(x).or_insert(0) += sign * m;
                }
            }
        }
    }
    let mut out = S::zero();
    for (x, m) in total {
        if m != 0 {
            out += &(convergent_coeff(z, x)?.scale_ratio(m, 1));
        }
    }
    Ok(out)
}

/// Rebuilds the whole group-like series without linear terms from its
/// admissible coefficients.
pub fn series_from_admissible<S: Scalar>(z: &dyn ZetaProvider<S>, order: usize) -> Result<NCSeries<S>> {
    let table = ZetaMap::collect(z, order)?;
    let words: Vec<Word> = Word::all_up_to(order).collect();
    let coeffs = par::map(words, |w| regularized_coeff(&table, w).map(|c| (w, c)));
    let mut out = NCSeries::zero(order);
    for r in coeffs {
        let (w, c) = r?;
        out.set(w, c);
    }
    Ok(out)
}

fn shuffle_defects<S: Scalar>(f: &NCSeries<S>, tol: f64) -> (f64, bool) {
    let order = f.order();
    let one_defect = f.constant_term() - S::one();
    let mut worst = one_defect.magnitude();
    let mut ok = one_defect.is_negligible(tol);
    let firsts: Vec<Word> = Word::all_up_to(order / 2).filter(|w| !w.is_empty()).collect();
    let results = par::map(firsts, |u| {
        let mut worst = 0.0f64;
        let mut ok = true;
        let cu = f.coeff(u);
        for v in Word::all_up_to(order - u.len()) {
            // each unordered pair once
            if v < u {
                continue;
            }
            let lhs = cu.clone() * &f.coeff(v);
            let mut rhs = S::zero();
            for (x, m) in shuffle_words(u, v) {
                if let Some(c) = f.get(x) {
                    rhs += &c.scale_ratio(m as i64, 1);
                }
            }
            let d = lhs - rhs;
            worst = worst.max(d.magnitude());
            ok &= d.is_negligible(tol);
        }
        (worst, ok)
    });
    for (w, o) in results {
        worst = worst.max(w);
        ok &= o;
    }
    (worst, ok)
}

/// Whether the coefficient functional is a shuffle character up to the
/// truncation order. `tol` is ignored for exact scalars.
pub fn is_grouplike<S: Scalar>(f: &NCSeries<S>, tol: f64) -> bool {
    shuffle_defects(f, tol).1
}

/// Largest `|I(u)I(v) - I(u sh v)|` over all word pairs (and `|I(1) - 1|`).
pub fn max_grouplike_defect<S: Scalar>(f: &NCSeries<S>) -> f64 {
    shuffle_defects(f, 0.0).0
}

/// `tau(p, q) = (1^{p1-1}, q1+1, ..., 1^{pk-1}, qk+1)`.
pub fn tau(p: &[u32], q: &[u32]) -> Result<Index> {
    if p.len() != q.len() || p.is_empty() || p.iter().chain(q).any(|&x| x == 0) {
        return Err(Error::Invalid(format!("tau needs equal-length positive sequences, got {p:?}, {q:?}")));
    }
    let mut parts = Vec::new();
    for (&a, &b) in p.iter().zip(q) {
        parts.extend(std::iter::repeat_n(1, a as usize - 1));
        parts.push(b + 1);
    }
    Index::new(parts)
}

/// Unique `(p, q)` with `tau(p, q) = k`.
pub fn tau_decompose(k: &Index) -> Result<(Vec<u32>, Vec<u32>)> {
    if !k.is_admissible() {
        return Err(Error::NotAdmissible(k.to_string()));
    }
    let (mut p, mut q) = (Vec::new(), Vec::new());
    let mut ones = 0;
    for &part in k.parts() {
        if part == 1 {
            ones += 1;
        } else {
            p.push(ones + 1);
            q.push(part - 1);
            ones = 0;
        }
    }
    Ok((p, q))
}

/// `tau(p, q) -> tau(q*, p*)` where `*` reverses a sequence.
pub fn duality_partner(k: &Index) -> Result<Index> {
    let (mut p, mut q) = tau_decompose(k)?;
    p.reverse();
    q.reverse();
    tau(&q, &p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rational;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn shuffle_examples() {
        let s = shuffle_words(Word::X0, Word::X1);
        assert_eq!(s, BTreeMap::from([(w("01"), 1), (w("10"), 1)]));
        assert_eq!(shuffle_words(w("0110"), Word::EMPTY), BTreeMap::from([(w("0110"), 1)]));
        let s = shuffle_words(w("01"), w("0"));
        assert_eq!(s, BTreeMap::from([(w("001"), 2), (w("010"), 1)]));
        let total: u64 = shuffle_words(w("0110"), w("101")).values().sum();
        assert_eq!(total, 35);
    }

    #[test]
    fn regularization_examples() {
        let mut m = BTreeMap::new();
        m.insert("2".parse().unwrap(), Rational::ratio(1, 24));
        let z = ZetaMap(m);
        // I(X0X1) = -zeta(2)
        assert_eq!(regularized_coeff(&z, w("01")).unwrap(), Rational::ratio(-1, 24));
        assert_eq!(regularized_coeff(&z, w("1")).unwrap(), Rational::ratio(0, 1));
        assert_eq!(regularized_coeff(&z, w("0")).unwrap(), Rational::ratio(0, 1));
        assert_eq!(regularized_coeff(&z, w("10")).unwrap(), Rational::ratio(1, 24));
    }

    #[test]
    fn tau_and_duality() {
        let k = tau(&[2, 1], &[1, 3]).unwrap();
        assert_eq!(k, "1,2,4".parse().unwrap());
        assert_eq!(tau(&[1], &[1]).unwrap(), "2".parse().unwrap());
        assert_eq!(tau_decompose(&k).unwrap(), (vec![2, 1], vec![1, 3]));
        assert_eq!(duality_partner(&"3".parse().unwrap()).unwrap(), "1,2".parse().unwrap());
        assert_eq!(duality_partner(&"2".parse().unwrap()).unwrap(), "2".parse().unwrap());
        assert!(duality_partner(&"2,1".parse().unwrap()).is_err());
        for k in Index::admissible_up_to(10) {
            let d = duality_partner(&k).unwrap();
            assert_eq!(d.wt(), k.wt());
            assert_eq!(duality_partner(&d).unwrap(), k);
        }
    }

    #[test]
    fn grouplike_examples() {
        type Q = Rational;
        assert!(is_grouplike(&NCSeries::<Q>::one(4), 0.0));
        let f = NCSeries::from_terms(4, [(Word::EMPTY, Q::ratio(1, 1)), (w("01"), Q::ratio(1, 1))]);
        assert!(!is_grouplike(&f, 0.0));
        let e = NCSeries::monomial(6, Word::X0, Q::ratio(1, 1)).exp().unwrap();
        assert!(is_grouplike(&e, 0.0));
        assert_eq!(max_grouplike_defect(&e), 0.0);
    }
}
