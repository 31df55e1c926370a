//! Enveloping algebras of the pure braid Lie algebras on three and four strands.
//!
//! Elements are kept in the PBW normal form `u ⊗ v ⊗ c^k`, where `u` is a
//! word in the free letters `t14, t24, t34`, `v` is a word in `t13, t23` and
//! `c = t12 + t13 + t23`, which is central in the three-strand algebra.
//! Products are normalized eagerly: left multiplication by a generator `g`
//! of the three-strand part acts by `g (u ⊗ w) = u ⊗ g w + D_g(u) ⊗ w`, where
//! `D_g = [g, -]` is a derivation of the free part.

mod associator;
mod rewrite;

pub use associator::{
    check_associator, hexagon_linear_parts, hexagon_residuals, is_degenerate_associator, pentagon_linear_part, pentagon_residual,
    two_cycle_residual, AssociatorCandidate, AssociatorCheck,
};
pub use rewrite::{a3_normal_form, a4_normal_form, normal_form, RawElement, Strategy};

use std::fmt;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::ncseries::GradedAlgebra;
use crate::scalars::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Arena {
    A3,
    A4,
}

impl Arena {
    pub fn name(self) -> &'static str {
        match self {
            Arena::A3 => "a3",
            Arena::A4 => "a4",
        }
    }

    pub fn generators(self) -> &'static [Gen] {
        match self {
            Arena::A3 => &[Gen::T12, Gen::T13, Gen::T23],
            Arena::A4 => &[Gen::T12, Gen::T13, Gen::T14, Gen::T23, Gen::T24, Gen::T34],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    T12,
    T13,
    T23,
    T14,
    T24,
    T34,
}

impl Gen {
    pub const ALL: [Gen; 6] = [Gen::T12, Gen::T13, Gen::T23, Gen::T14, Gen::T24, Gen::T34];

    pub fn is_free(self) -> bool {
        matches!(self, Gen::T14 | Gen::T24 | Gen::T34)
    }

    fn free_code(self) -> u8 {
        match self {
            Gen::T14 => 0,
            Gen::T24 => 1,
            Gen::T34 => 2,
            _ => unreachable!("not a free letter"),
        }
    }

    fn from_free_code(c: u8) -> Gen {
        [Gen::T14, Gen::T24, Gen::T34][c as usize]
    }

    pub fn name(self) -> &'static str {
        match self {
            Gen::T12 => "t12",
            Gen::T13 => "t13",
            Gen::T23 => "t23",
            Gen::T14 => "t14",
            Gen::T24 => "t24",
            Gen::T34 => "t34",
        }
    }
}

/// A PBW basis monomial `u ⊗ v ⊗ c^k`.
///
/// `free` packs `u` two bits per letter (first letter most significant),
/// `inner` packs `v` one bit per letter (`t13 = 0`, `t23 = 1`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PbwKey {
    free_len: u8,
    free: u32,
    inner_len: u8,
    inner: u32,
    c: u8,
}

impl PbwKey {
    pub const ONE: PbwKey = PbwKey { free_len: 0, free: 0, inner_len: 0, inner: 0, c: 0 };

    pub fn degree(self) -> usize {
        (self.free_len + self.inner_len + self.c) as usize
    }

    pub fn free_letters(self) -> Vec<Gen> {
        (0..self.free_len).map(|i| Gen::from_free_code(self.free_at(i))).collect()
    }

    pub fn inner_letters(self) -> Vec<Gen> {
        (0..self.inner_len)
            .map(|i| if (self.inner >> (self.inner_len - 1 - i)) & 1 == 0 { Gen::T13 } else { Gen::T23 })
            .collect()
    }

    pub fn c_power(self) -> usize {
        self.c as usize
    }

    fn free_at(self, i: u8) -> u8 {
        ((self.free >> (2 * (self.free_len - 1 - i))) & 3) as u8
    }

    fn with_free_prefix(self, code: u8) -> PbwKey {
        PbwKey { free: self.free | ((code as u32) << (2 * self.free_len)), free_len: self.free_len + 1, ..self }
    }

    fn with_inner_prefix(self, bit: u32) -> PbwKey {
        PbwKey { inner: self.inner | (bit << self.inner_len), inner_len: self.inner_len + 1, ..self }
    }

    fn with_c(self) -> PbwKey {
        PbwKey { c: self.c + 1, ..self }
    }

    /// Builds a key from explicit parts; `inner` letters must be `t13`/`t23`.
    pub fn from_parts(free: &[Gen], inner: &[Gen], c: usize) -> PbwKey {
        let mut k = PbwKey { c: c as u8, ..PbwKey::ONE };
        for g in inner.iter().rev() {
            k = k.with_inner_prefix(match g {
                Gen::T13 => 0,
                Gen::T23 => 1,
                _ => panic!("inner letters are t13 and t23"),
            });
        }
        for g in free.iter().rev() {
            k = k.with_free_prefix(g.free_code());
        }
        k
    }

    /// All basis monomials of the arena of exactly degree `n`.
    pub fn basis(arena: Arena, n: usize) -> Vec<PbwKey> {
        let mut out = Vec::new();
        let max_free = if arena == Arena::A4 { n } else { 0 };
        for fl in 0..=max_free {
            for il in 0..=(n - fl) {
                let c = n - fl - il;
                for f in 0..3u32.pow(fl as u32) {
                    let mut free = 0u32;
                    let mut x = f;
                    for i in 0..fl {
                        free |= (x % 3) << (2 * i);
                        x /= 3;
                    }
                    for inner in 0..(1u32 << il) {
                        out.push(PbwKey { free_len: fl as u8, free, inner_len: il as u8, inner, c: c as u8 });
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for PbwKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.free_letters().iter().chain(self.inner_letters().iter()).map(|g| g.name().to_string()).collect();
        if self.c > 0 {
            parts.push(format!("c^{}", self.c));
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

impl fmt::Debug for PbwKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `[g, x]` for `g` in `{t12, t13, t23}` and `x` a free letter, as free words of length 2.
fn commutator_table(g: Gen, x: u8) -> &'static [(u8, u8, i64)] {
    const T14: u8 = 0;
    const T24: u8 = 1;
    const T34: u8 = 2;
    match (g, x) {
        (Gen::T12, T14) => &[(T14, T24, 1), (T24, T14, -1)],
        (Gen::T12, T24) => &[(T24, T14, 1), (T14, T24, -1)],
        (Gen::T13, T14) => &[(T14, T34, 1), (T34, T14, -1)],
        (Gen::T13, T34) => &[(T34, T14, 1), (T14, T34, -1)],
        (Gen::T23, T24) => &[(T24, T34, 1), (T34, T24, -1)],
        (Gen::T23, T34) => &[(T34, T24, 1), (T24, T34, -1)],
        _ => &[],
    }
}

/// A sparse element in PBW normal form.
#[derive(Clone)]
pub struct BraidElement<S: Scalar> {
    arena: Arena,
    terms: FxHashMap<PbwKey, S>,
}

impl<S: Scalar> BraidElement<S> {
    pub fn zero(arena: Arena) -> Self {
        BraidElement { arena, terms: FxHashMap::default() }
    }

    pub fn one(arena: Arena) -> Self {
        let mut e = Self::zero(arena);
        e.add_term(PbwKey::ONE, &S::one());
        e
    }

    pub fn generator(arena: Arena, g: Gen) -> Result<Self> {
        Self::linear(arena, &[(g, S::one())])
    }

    /// `sum c_i g_i`.
    pub fn linear(arena: Arena, gens: &[(Gen, S)]) -> Result<Self> {
        let one = Self::one(arena);
        let mut out = Self::zero(arena);
        for (g, c) in gens {
            if arena == Arena::A3 && g.is_free() {
                return Err(Error::WrongArena { expected: "a4", found: "a3" });
            }
            out.add_scaled(&one.left_mul_gen(*g, usize::MAX), c);
        }
        Ok(out)
    }

    pub fn arena(&self) -> Arena {
        self.arena
    }

    pub fn coeff(&self, k: PbwKey) -> S {
        self.terms.get(&k).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwKey, &S)> {
        self.terms.iter()
    }

    /// Terms sorted by key, for deterministic output.
    pub fn sorted_terms(&self) -> Vec<(PbwKey, S)> {
        let mut v: Vec<_> = self.terms.iter().map(|(k, c)| (*k, c.clone())).collect();
        v.sort_by_key(|(k, _)| (k.degree(), *k));
        v
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.is_negligible(tol))
    }

    pub fn add_term(&mut self, k: PbwKey, c: &S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, o: &Self, c: &S) {
        for (k, v) in &o.terms {
            self.add_term(*k, &(v.clone() * c));
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_arena(o)?;
        let mut out = self.clone();
        out.add_scaled(o, &S::one());
        Ok(out)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.check_arena(o)?;
        let mut out = self.clone();
        out.add_scaled(o, &(-S::one()));
        Ok(out)
    }

    fn check_arena(&self, o: &Self) -> Result<()> {
        if self.arena != o.arena {
            return Err(Error::WrongArena { expected: self.arena.name(), found: o.arena.name() });
        }
        Ok(())
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.arena);
        out.add_scaled(self, c);
        out
    }

    pub fn truncated(&self, max_deg: usize) -> Self {
        BraidElement { arena: self.arena, terms: self.terms.iter().filter(|(k, _)| k.degree() <= max_deg).map(|(k, c)| (*k, c.clone())).collect() }
    }

    pub fn degree_part(&self, n: usize) -> Self {
        BraidElement { arena: self.arena, terms: self.terms.iter().filter(|(k, _)| k.degree() == n).map(|(k, c)| (*k, c.clone())).collect() }
    }

    /// `g * self`, dropping terms above `max_deg`.
    pub fn left_mul_gen(&self, g: Gen, max_deg: usize) -> Self {
        let mut out = Self::zero(self.arena);
        for (k, c) in &self.terms {
            left_mul_key_into(&mut out, g, *k, c, max_deg);
        }
        out
    }

    /// `(sum c_i g_i) * self`.
    pub fn left_mul_linear(&self, gens: &[(Gen, S)], max_deg: usize) -> Self {
        let mut out = Self::zero(self.arena);
        for (k, c) in &self.terms {
            if k.degree() + 1 > max_deg {
                continue;
            }
            for (g, cg) in gens {
                left_mul_key_into(&mut out, *g, *k, &(c.clone() * cg), max_deg);
            }
        }
        out
    }

    /// Left multiplication by the central-in-a3 element `c = t12 + t13 + t23`.
    fn left_mul_c(&self, max_deg: usize) -> Self {
        let mut out = Self::zero(self.arena);
        for (k, c) in &self.terms {
            if k.degree() < max_deg {
                out.add_term(k.with_c(), c);
                for g in [Gen::T12, Gen::T13, Gen::T23] {
                    derivation_into(&mut out, g, *k, c);
                }
            }
        }
        out
    }

    /// `self * o`, truncated at `max_deg`.
    pub fn mul(&self, o: &Self, max_deg: usize) -> Result<Self> {
        self.check_arena(o)?;
        let mut out = Self::zero(self.arena);
        for (k, c) in &self.terms {
            if k.degree() > max_deg {
                continue;
            }
            // k = u ⊗ v ⊗ c^j acts as u (v (c^j o))
            let mut acc = o.truncated(max_deg - k.degree());
            for _ in 0..k.c {
                acc = acc.left_mul_c(max_deg);
            }
            for g in k.inner_letters().into_iter().rev() {
                acc = acc.left_mul_gen(g, max_deg);
            }
            for g in k.free_letters().into_iter().rev() {
                acc = acc.left_mul_gen(g, max_deg);
            }
            out.add_scaled(&acc, c);
        }
        Ok(out)
    }

    /// `[self, o]` truncated at `max_deg`.
    pub fn commutator(&self, o: &Self, max_deg: usize) -> Result<Self> {
        self.mul(o, max_deg)?.try_sub(&o.mul(self, max_deg)?)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> BraidElement<T> {
        let mut out = BraidElement::zero(self.arena);
        for (k, c) in &self.terms {
            out.add_term(*k, &f(c));
        }
        out
    }
}

impl<S: Scalar> PartialEq for BraidElement<S> {
    fn eq(&self, o: &Self) -> bool {
        self.arena == o.arena && self.terms == o.terms
    }
}

impl<S: Scalar> fmt::Debug for BraidElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.arena.name())?;
        for (i, (k, c)) in self.sorted_terms().iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{k}")?;
        }
        write!(f, "]")
    }
}

/// Adds `coef * D_g(u) ⊗ v ⊗ c^k` for the key `u ⊗ v ⊗ c^k`.
fn derivation_into<S: Scalar>(out: &mut BraidElement<S>, g: Gen, k: PbwKey, coef: &S) {
    for i in 0..k.free_len {
        let x = k.free_at(i);
        for &(a, b, sign) in commutator_table(g, x) {
            // replace letter i by the pair a b
            let n = k.free_len as u32;
            let i = i as u32;
            let high = k.free >> (2 * (n - i));
            let low = k.free & ((1u32 << (2 * (n - 1 - i))) - 1);
            let mid = ((a as u32) << 2) | b as u32;
            let free = (((high << 4) | mid) << (2 * (n - 1 - i))) | low;
            let key = PbwKey { free, free_len: k.free_len + 1, ..k };
            let c = if sign > 0 { coef.clone() } else { -coef.clone() };
            out.add_term(key, &c);
        }
    }
}

fn left_mul_key_into<S: Scalar>(out: &mut BraidElement<S>, g: Gen, k: PbwKey, coef: &S, max_deg: usize) {
    if k.degree() + 1 > max_deg {
        return;
    }
    match g {
        Gen::T14 | Gen::T24 | Gen::T34 => out.add_term(k.with_free_prefix(g.free_code()), coef),
        Gen::T13 | Gen::T23 => {
            out.add_term(k.with_inner_prefix(if g == Gen::T13 { 0 } else { 1 }), coef);
            derivation_into(out, g, k, coef);
        }
        Gen::T12 => {
            // t12 = c - t13 - t23
            out.add_term(k.with_c(), coef);
            let neg = -coef.clone();
            out.add_term(k.with_inner_prefix(0), &neg);
            out.add_term(k.with_inner_prefix(1), &neg);
            derivation_into(out, g, k, coef);
        }
    }
}

/// [`BraidElement`]s of one arena, truncated at a fixed order, as a
/// substitution target for series.
pub struct BraidAlgebra {
    pub arena: Arena,
    pub order: usize,
}

impl<S: Scalar> GradedAlgebra<S> for BraidAlgebra {
    type Elem = BraidElement<S>;

    fn zero(&self) -> BraidElement<S> {
        BraidElement::zero(self.arena)
    }
    fn add_assign(&self, acc: &mut BraidElement<S>, x: &BraidElement<S>) {
        acc.add_scaled(x, &S::one());
    }
    fn scale(&self, x: &BraidElement<S>, c: &S) -> BraidElement<S> {
        x.scale(c)
    }
    fn mul_trunc(&self, a: &BraidElement<S>, x: &BraidElement<S>, max_deg: usize) -> BraidElement<S> {
        let max_deg = max_deg.min(self.order);
        // images are usually linear in the generators: take the fast path
        if let Some(gens) = as_linear(a) {
            return x.left_mul_linear(&gens, max_deg);
        }
        a.mul(x, max_deg).expect("same arena")
    }
    fn truncate(&self, x: &BraidElement<S>, max_deg: usize) -> BraidElement<S> {
        x.truncated(max_deg.min(self.order))
    }
    fn has_constant_term(&self, x: &BraidElement<S>) -> bool {
        !x.coeff(PbwKey::ONE).is_zero()
    }
}

/// Rewrites a degree-one element as a combination of generators.
fn as_linear<S: Scalar>(a: &BraidElement<S>) -> Option<Vec<(Gen, S)>> {
    let mut out = Vec::new();
    for (k, c) in &a.terms {
        if k.degree() != 1 {
            return None;
        }
        let g = if k.c == 1 {
            // c = t12 + t13 + t23; t13 and t23 terms are adjusted below
            Gen::T12
        } else if k.inner_len == 1 {
            if k.inner == 0 {
                Gen::T13
            } else {
                Gen::T23
            }
        } else {
            Gen::from_free_code(k.free_at(0))
        };
        out.push((g, c.clone()));
    }
    // in the basis, t13 means the basis letter t13, while Gen::T12 acts as
    // c - t13 - t23; compensate so the sum is unchanged
    let c_coef = a.coeff(PbwKey { c: 1, ..PbwKey::ONE });
    if !c_coef.is_zero() {
        out.push((Gen::T13, c_coef.clone()));
        out.push((Gen::T23, c_coef));
    }
    Some(out)
}

/// Number of PBW monomials of degree `n`.
pub fn basis_count(arena: Arena, n: usize) -> usize {
    PbwKey::basis(arena, n).len()
}
