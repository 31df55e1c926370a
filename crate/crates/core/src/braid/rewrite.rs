//! Normal forms by term rewriting on raw generator words.
//!
//! Independent of the eager multiplication in the parent module; used to
//! cross-check it and to test that the normal form does not depend on the
//! order in which rewrite rules fire.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Arena, BraidElement, Gen, PbwKey};
use crate::error::{Error, Result};
use crate::scalars::Scalar;

/// Letters of raw words: the six generators plus `c = t12 + t13 + t23`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum L {
    G(Gen),
    C,
}

/// A linear combination of raw generator words, not normalized.
#[derive(Clone, Debug)]
pub struct RawElement<S: Scalar> {
    pub arena: Arena,
    pub terms: Vec<(Vec<Gen>, S)>,
}

impl<S: Scalar> RawElement<S> {
    pub fn new(arena: Arena) -> Self {
        RawElement { arena, terms: Vec::new() }
    }

    pub fn push(&mut self, word: Vec<Gen>, c: S) -> &mut Self {
        self.terms.push((word, c));
        self
    }

    /// `[x, y]` as raw words.
    pub fn commutator(arena: Arena, x: &[Gen], y: &[Gen]) -> Self {
        let mut e = Self::new(arena);
        e.push([x, y].concat(), S::one());
        e.push([y, x].concat(), -S::one());
        e
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    Random(u64),
}

fn is_free(l: L) -> bool {
    matches!(l, L::G(g) if g.is_free())
}

/// Positions where a rule applies.
fn redexes(w: &[L]) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..w.len() {
        if w[i] == L::G(Gen::T12) {
            out.push(i);
            continue;
        }
        if i + 1 < w.len() {
            let (a, b) = (w[i], w[i + 1]);
            let inner = matches!(a, L::G(Gen::T13) | L::G(Gen::T23) | L::C);
            if (inner && is_free(b)) || (a == L::C && matches!(b, L::G(Gen::T13) | L::G(Gen::T23))) {
                out.push(i);
            }
        }
    }
    out
}

fn bracket(g: Gen, x: Gen) -> Vec<(Gen, Gen, i64)> {
    use Gen::*;
    match (g, x) {
        (T12, T14) => vec![(T14, T24, 1), (T24, T14, -1)],
        (T12, T24) => vec![(T24, T14, 1), (T14, T24, -1)],
        (T13, T14) => vec![(T14, T34, 1), (T34, T14, -1)],
        (T13, T34) => vec![(T34, T14, 1), (T14, T34, -1)],
        (T23, T24) => vec![(T24, T34, 1), (T34, T24, -1)],
        (T23, T34) => vec![(T34, T24, 1), (T24, T34, -1)],
        _ => vec![],
    }
}

/// Applies the rule at position `i`, returning the replacement terms.
fn rewrite_at(w: &[L], i: usize) -> Vec<(Vec<L>, i64)> {
    let splice = |mid: &[L], len: usize| [&w[..i], mid, &w[i + len..]].concat();
    if w[i] == L::G(Gen::T12) {
        return vec![(splice(&[L::C], 1), 1), (splice(&[L::G(Gen::T13)], 1), -1), (splice(&[L::G(Gen::T23)], 1), -1)];
    }
    let (a, b) = (w[i], w[i + 1]);
    let mut out = vec![(splice(&[b, a], 2), 1)];
    if let L::G(x) = b {
        if x.is_free() {
            let gens: Vec<Gen> = match a {
                L::C => vec![Gen::T12, Gen::T13, Gen::T23],
                L::G(g) => vec![g],
            };
            for g in gens {
                for (p, q, s) in bracket(g, x) {
                    out.push((splice(&[L::G(p), L::G(q)], 2), s));
                }
            }
        }
    }
    out
}

fn to_key(w: &[L]) -> PbwKey {
    let gens = w.iter().filter_map(|l| match l {
        L::G(g) => Some(*g),
        L::C => None,
    });
    let (free, inner): (Vec<Gen>, Vec<Gen>) = gens.partition(|g| g.is_free());
    let c = w.iter().filter(|l| **l == L::C).count();
    PbwKey::from_parts(&free, &inner, c)
}

/// Normalizes by repeated rule application until no redex remains.
pub fn normal_form<S: Scalar>(e: &RawElement<S>, strategy: Strategy) -> Result<BraidElement<S>> {
    if e.arena == Arena::A3 && e.terms.iter().any(|(w, _)| w.iter().any(|g| g.is_free())) {
        return Err(Error::WrongArena { expected: "a3", found: "a4" });
    }
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    // combine equal raw words as we go so the work list stays small
    let mut work: BTreeMap<Vec<L>, S> = BTreeMap::new();
    for (w, c) in &e.terms {
        let w: Vec<L> = w.iter().map(|g| L::G(*g)).collect();
        let entry = work.entry(w).or_insert_with(S::zero);
        *entry += c;
    }
    let mut out = BraidElement::zero(e.arena);
    while let Some((w, c)) = work.pop_last() {
        if c.is_zero() {
            continue;
        }
        let r = redexes(&w);
        if r.is_empty() {
            out.add_term(to_key(&w), &c);
            continue;
        }
        let i = match (&strategy, rng.as_mut()) {
            (Strategy::Leftmost, _) => r[0],
            (Strategy::Rightmost, _) => *r.last().unwrap(),
            (Strategy::Random(_), Some(rng)) => r[rng.gen_range(0..r.len())],
            _ => unreachable!(),
        };
        for (nw, m) in rewrite_at(&w, i) {
            let entry = work.entry(nw).or_insert_with(S::zero);
            *entry += &c.scale_ratio(m, 1);
        }
    }
    Ok(out)
}

pub fn a3_normal_form<S: Scalar>(e: &RawElement<S>) -> Result<BraidElement<S>> {
    if e.arena != Arena::A3 {
        return Err(Error::WrongArena { expected: "a3", found: e.arena.name() });
    }
    normal_form(e, Strategy::Leftmost)
}

pub fn a4_normal_form<S: Scalar>(e: &RawElement<S>) -> Result<BraidElement<S>> {
    if e.arena != Arena::A4 {
        return Err(Error::WrongArena { expected: "a4", found: e.arena.name() });
    }
    normal_form(e, Strategy::Leftmost)
}
