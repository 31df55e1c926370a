use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::word::Word;
use super::NCSeries;
use crate::scalars::{Rational, Scalar};

/// Lyndon words over `X0 < X1` of length `1..=n`, by Duval's algorithm.
pub fn lyndon_words(n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    while !w.is_empty() {
        out.push(Word::from_letters(&w));
        let m = w.len();
        while w.len() < n {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&1) {
            w.pop();
        }
        if let Some(last) = w.last_mut() {
            *last = 1;
        }
    }
    out.sort();
    out
}

fn is_lyndon(w: Word) -> bool {
    // strictly smaller than every proper rotation
    let n = w.len();
    (1..n).all(|i| {
        let rot = w.suffix_from(i).concat(w.prefix(i));
        lex_less(w, rot)
    })
}

fn lex_less(a: Word, b: Word) -> bool {
    a.letters().lt(b.letters())
}

/// Bracketed Lie polynomial of a Lyndon word under its standard factorization.
fn lie_bracket(w: Word, order: usize) -> NCSeries<Rational> {
    if w.len() == 1 {
        return NCSeries::monomial(order, w, Rational::one());
    }
    // longest proper Lyndon suffix
    let split = (1..w.len()).find(|&i| is_lyndon(w.suffix_from(i))).expect("length-1 suffix is Lyndon");
    let u = lie_bracket(w.prefix(split), order);
    let v = lie_bracket(w.suffix_from(split), order);
    let uv = u.concat_mul(&v).expect("same order");
    let vu = v.concat_mul(&u).expect("same order");
    uv.try_sub(&vu).expect("same order")
}

fn random_coeff(rng: &mut ChaCha8Rng) -> Rational {
    let den = rng.gen_range(1..=10i64);
    let num = rng.gen_range(-10 * den..=10 * den);
    Rational::ratio(num, den)
}

/// A random Lie element on the Lyndon basis, deterministic in `seed`.
pub fn random_lie(seed: u64, order: usize, skip_linear: bool) -> NCSeries<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = NCSeries::zero(order);
    for w in lyndon_words(order) {
        let c = random_coeff(&mut rng);
        if skip_linear && w.len() == 1 {
            continue;
        }
        out = out.try_add(&lie_bracket(w, order).scale(&c)).expect("same order");
    }
    out
}

/// `exp` of a random Lie element; group-like by construction.
pub fn random_grouplike(seed: u64, order: usize) -> NCSeries<Rational> {
    random_lie(seed, order, false).exp().expect("Lie element has no constant term")
}

/// Same as [`random_grouplike`] but with the degree-one part of the Lie
/// element removed, so the result has no linear terms.
pub fn random_grouplike_no_linear(seed: u64, order: usize) -> NCSeries<Rational> {
    random_lie(seed, order, true).exp().expect("Lie element has no constant term")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncseries::is_grouplike;

    #[test]
    fn lyndon_counts() {
        // necklace counts for binary Lyndon words: 2,1,2,3,6,9,18,30
        let counts: Vec<usize> = (1..=8).map(|n| lyndon_words(8).iter().filter(|w| w.len() == n).count()).collect();
        assert_eq!(counts, vec![2, 1, 2, 3, 6, 9, 18, 30]);
        assert!(lyndon_words(8).into_iter().all(is_lyndon));
    }

    #[test]
    fn random_fixtures() {
        assert_eq!(random_grouplike(3, 0), NCSeries::one(0));
        let a = random_grouplike(11, 5);
        assert_eq!(a, random_grouplike(11, 5));
        assert_ne!(a, random_grouplike(12, 5));
        assert!(is_grouplike(&a, 0.0));
        let b = random_grouplike_no_linear(5, 6);
        assert!(is_grouplike(&b, 0.0));
        assert!(b.coeff(Word::X0).is_zero() && b.coeff(Word::X1).is_zero());
    }
}
