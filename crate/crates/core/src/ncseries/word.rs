use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Longest word representable in the packed form.
pub const MAX_WORD_LEN: usize = 63;

/// A word in the letters `X0` (bit 0) and `X1` (bit 1).
///
/// Letters are packed into the low `len` bits of a `u64` with the first letter
/// in the most significant position, so numeric order of `bits` is
/// lexicographic order among words of equal length. Words order first by
/// length, then lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Word {
    bits: u64,
    len: u8,
}

impl Word {
    pub const EMPTY: Word = Word { bits: 0, len: 0 };
    pub const X0: Word = Word { bits: 0, len: 1 };
    pub const X1: Word = Word { bits: 1, len: 1 };

    pub fn from_bits(bits: u64, len: usize) -> Word {
        assert!(len <= MAX_WORD_LEN, "word too long");
        let mask = if len == 0 { 0 } else { u64::MAX >> (64 - len) };
        Word { bits: bits & mask, len: len as u8 }
    }

    pub fn from_letters(letters: &[u8]) -> Word {
        let mut w = Word::EMPTY;
        for &l in letters {
            w = w.push(l);
        }
        w
    }

    /// `letter` repeated `n` times.
    pub fn power(letter: u8, n: usize) -> Word {
        if letter == 0 {
            Word::from_bits(0, n)
        } else {
            Word::from_bits(u64::MAX, n)
        }
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    /// Letter at position `i` (0-based from the left).
    pub fn get(self, i: usize) -> u8 {
        debug_assert!(i < self.len());
        ((self.bits >> (self.len() - 1 - i)) & 1) as u8
    }

    pub fn first(self) -> Option<u8> {
        (!self.is_empty()).then(|| self.get(0))
    }

    pub fn last(self) -> Option<u8> {
        (!self.is_empty()).then_some((self.bits & 1) as u8)
    }

    pub fn push(self, letter: u8) -> Word {
        assert!(self.len() < MAX_WORD_LEN, "word too long");
        Word { bits: (self.bits << 1) | letter as u64, len: self.len + 1 }
    }

    pub fn concat(self, o: Word) -> Word {
        assert!(self.len() + o.len() <= MAX_WORD_LEN, "word too long");
        Word { bits: (self.bits << o.len) | o.bits, len: self.len + o.len }
    }

    /// The first `n` letters.
    pub fn prefix(self, n: usize) -> Word {
        Word::from_bits(self.bits >> (self.len() - n), n)
    }

    /// Letters from position `n` onwards.
    pub fn suffix_from(self, n: usize) -> Word {
        Word::from_bits(self.bits, self.len() - n)
    }

    pub fn reversed(self) -> Word {
        let n = self.len();
        if n == 0 {
            return self;
        }
        Word { bits: self.bits.reverse_bits() >> (64 - n), len: self.len }
    }

    /// Exchanges `X0` and `X1`.
    pub fn swapped(self) -> Word {
        Word::from_bits(!self.bits, self.len())
    }

    pub fn count(self, letter: u8) -> usize {
        let ones = self.bits.count_ones() as usize;
        if letter == 1 {
            ones
        } else {
            self.len() - ones
        }
    }

    pub fn letters(self) -> impl Iterator<Item = u8> {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// All words of length `n` in increasing order.
    pub fn all_of_len(n: usize) -> impl Iterator<Item = Word> {
        (0..1u64 << n).map(move |b| Word::from_bits(b, n))
    }

    /// All words of length at most `n`, ordered by length.
    pub fn all_up_to(n: usize) -> impl Iterator<Item = Word> {
        (0..=n).flat_map(Word::all_of_len)
    }

    /// Starts with `X0` and ends with `X1`: the shape of words coming from
    /// admissible indices.
    pub fn is_convergent(self) -> bool {
        self.first() == Some(0) && self.last() == Some(1)
    }
}

impl Ord for Word {
    fn cmp(&self, o: &Self) -> Ordering {
        self.len.cmp(&o.len).then(self.bits.cmp(&o.bits))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Word {
    /// Letters as `0`/`1`; the empty word is written `-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        for l in self.letters() {
            f.write_str(if l == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let s = s.trim();
        if s == "-" || s.is_empty() {
            return Ok(Word::EMPTY);
        }
        if s.len() > MAX_WORD_LEN {
            return Err(Error::Parse(format!("word longer than {MAX_WORD_LEN} letters")));
        }
        let mut w = Word::EMPTY;
        for c in s.chars() {
            w = match c {
                '0' => w.push(0),
                '1' => w.push(1),
                _ => return Err(Error::Parse(format!("bad letter {c:?} in word {s:?}"))),
            };
        }
        Ok(w)
    }
}

/// A multi-index `(k1, ..., km)` of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Index(Vec<u32>);

impl Index {
    pub fn new(parts: Vec<u32>) -> Result<Index> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::Invalid(format!("index parts must be positive and nonempty: {parts:?}")));
        }
        Ok(Index(parts))
    }

    /// Like [`Index::new`] but additionally requires convergence.
    pub fn admissible(parts: Vec<u32>) -> Result<Index> {
        let k = Index::new(parts)?;
        if !k.is_admissible() {
            return Err(Error::NotAdmissible(k.to_string()));
        }
        Ok(k)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn wt(&self) -> usize {
        self.0.iter().map(|&k| k as usize).sum()
    }

    pub fn dp(&self) -> usize {
        self.0.len()
    }

    pub fn ht(&self) -> usize {
        self.0.iter().filter(|&&k| k > 1).count()
    }

    pub fn is_admissible(&self) -> bool {
        self.0.last().is_some_and(|&k| k > 1)
    }

    /// All compositions of `w`, in lexicographic order.
    pub fn compositions(w: usize) -> Vec<Index> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(rem: usize, cur: &mut Vec<u32>, out: &mut Vec<Index>) {
            if rem == 0 {
                if !cur.is_empty() {
                    out.push(Index(cur.clone()));
                }
                return;
            }
            for first in 1..=rem {
                cur.push(first as u32);
                rec(rem - first, cur, out);
                cur.pop();
            }
        }
        rec(w, &mut cur, &mut out);
        out
    }

    /// Admissible indices of weight exactly `w`; there are `2^(w-2)` of them.
    pub fn admissible_of_weight(w: usize) -> Vec<Index> {
        Index::compositions(w).into_iter().filter(Index::is_admissible).collect()
    }

    /// Admissible indices of weight `2..=max_w`.
    pub fn admissible_up_to(max_w: usize) -> Vec<Index> {
        (2..=max_w).flat_map(Index::admissible_of_weight).collect()
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Index {
    type Err = Error;

    /// Accepts `2`, `1,2` or `(1,2)`.
    fn from_str(s: &str) -> Result<Index> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad index {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Index::new(parts)
    }
}

/// `(k1..km) -> X0^{km-1} X1 ... X0^{k1-1} X1`. Note the reversed reading order.
pub fn index_to_word(k: &Index) -> Word {
    let mut w = Word::EMPTY;
    for &part in k.parts().iter().rev() {
        w = w.concat(Word::power(0, part as usize - 1)).push(1);
    }
    w
}

/// Inverse of [`index_to_word`]; `None` unless the word is nonempty and ends in `X1`.
pub fn word_to_index(w: Word) -> Option<Index> {
    if w.last() != Some(1) {
        return None;
    }
    let mut parts = Vec::new();
    let mut zeros = 0u32;
    for l in w.letters() {
        if l == 0 {
            zeros += 1;
        } else {
            parts.push(zeros + 1);
            zeros = 0;
        }
    }
    parts.reverse();
    Some(Index(parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(v: &[u32]) -> Index {
        Index::new(v.to_vec()).unwrap()
    }

    #[test]
    fn index_word_convention() {
        assert_eq!(index_to_word(&idx(&[2])).to_string(), "01");
        assert_eq!(index_to_word(&idx(&[1, 2])).to_string(), "011");
        assert_eq!(index_to_word(&idx(&[1])).to_string(), "1");
        assert_eq!(index_to_word(&idx(&[3, 1, 2])).to_string(), "011001");
        for k in Index::compositions(7) {
            assert_eq!(word_to_index(index_to_word(&k)), Some(k));
        }
        assert_eq!(word_to_index("10".parse().unwrap()), None);
        assert_eq!(word_to_index(Word::EMPTY), None);
    }

    #[test]
    fn stats() {
        let k = idx(&[1, 3, 1, 2]);
        assert_eq!((k.wt(), k.dp(), k.ht()), (7, 4, 2));
        assert!(k.is_admissible());
        assert!(!idx(&[2, 1]).is_admissible());
        for w in 2..=10 {
            assert_eq!(Index::admissible_of_weight(w).len(), 1 << (w - 2));
            for k in Index::admissible_of_weight(w) {
                assert!(k.wt() >= 2 * k.ht());
            }
        }
    }

    #[test]
    fn word_ops() {
        let w: Word = "0110".parse().unwrap();
        assert_eq!(w.reversed().to_string(), "0110");
        assert_eq!("001".parse::<Word>().unwrap().reversed().to_string(), "100");
        assert_eq!(w.swapped().to_string(), "1001");
        assert_eq!(w.prefix(2).to_string(), "01");
        assert_eq!(w.suffix_from(1).to_string(), "110");
        assert_eq!(w.concat(Word::X1).to_string(), "01101");
        assert_eq!(Word::EMPTY.to_string(), "-");
        assert!(Word::X0 < Word::X1 && Word::X1 < "00".parse().unwrap());
        assert!("x1".parse::<Word>().is_err());
    }

    #[test]
    fn index_parsing() {
        assert_eq!("1,2".parse::<Index>().unwrap(), idx(&[1, 2]));
        assert_eq!("(3)".parse::<Index>().unwrap(), idx(&[3]));
        assert!("0,2".parse::<Index>().is_err());
        assert!(matches!(Index::admissible(vec![2, 1]), Err(Error::NotAdmissible(_))));
    }
}
