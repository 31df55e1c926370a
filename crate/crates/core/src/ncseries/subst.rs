use rustc_hash::FxHashSet;

use super::word::Word;
use super::NCSeries;
use crate::error::{Error, Result};
use crate::par;
use crate::scalars::Scalar;

/// A graded algebra that series can be evaluated in.
pub trait GradedAlgebra<S: Scalar>: Sync {
    type Elem: Clone + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn add_assign(&self, acc: &mut Self::Elem, x: &Self::Elem);
    fn scale(&self, x: &Self::Elem, c: &S) -> Self::Elem;
    /// `a * x` with every term of degree above `max_deg` dropped.
    fn mul_trunc(&self, a: &Self::Elem, x: &Self::Elem, max_deg: usize) -> Self::Elem;
    fn truncate(&self, x: &Self::Elem, max_deg: usize) -> Self::Elem;
    fn has_constant_term(&self, x: &Self::Elem) -> bool;
}

/// `f(a, b) * y`, truncated at the order of `f`.
///
/// Evaluated on the prefix tree of the words of `f`:
/// `E(w) = c_w y + a E(w X0) + b E(w X1)`, where `E(w)` is only needed up to
/// degree `order - |w|`.
pub fn substitute_apply<S: Scalar, A: GradedAlgebra<S>>(
    f: &NCSeries<S>,
    alg: &A,
    a: &A::Elem,
    b: &A::Elem,
    y: &A::Elem,
) -> Result<A::Elem> {
    if alg.has_constant_term(a) || alg.has_constant_term(b) {
        return Err(Error::Precondition("substituted images must have no constant term".into()));
    }
    let mut prefixes: FxHashSet<Word> = FxHashSet::default();
    for (w, _) in f.iter() {
        for i in 0..=w.len() {
            prefixes.insert(w.prefix(i));
        }
    }
    let ctx = Ctx { f, alg, a, b, y, prefixes: &prefixes };
    Ok(ctx.eval(Word::EMPTY))
}

/// `f(a, b)` in the target algebra; `one` is the target's unit.
pub fn substitute<S: Scalar, A: GradedAlgebra<S>>(
    f: &NCSeries<S>,
    alg: &A,
    a: &A::Elem,
    b: &A::Elem,
    one: &A::Elem,
) -> Result<A::Elem> {
    substitute_apply(f, alg, a, b, one)
}

struct Ctx<'a, S: Scalar, A: GradedAlgebra<S>> {
    f: &'a NCSeries<S>,
    alg: &'a A,
    a: &'a A::Elem,
    b: &'a A::Elem,
    y: &'a A::Elem,
    prefixes: &'a FxHashSet<Word>,
}

impl<S: Scalar, A: GradedAlgebra<S>> Ctx<'_, S, A> {
    fn eval(&self, w: Word) -> A::Elem {
        let room = self.f.order() - w.len();
        let mut out = match self.f.get(w) {
            Some(c) => self.alg.scale(&self.alg.truncate(self.y, room), c),
            None => self.alg.zero(),
        };
        if room == 0 {
            return out;
        }
        let child = |letter: u8| {
            let cw = w.push(letter);
            if !self.prefixes.contains(&cw) {
                return None;
            }
            let inner = self.eval(cw);
            let img = if letter == 0 { self.a } else { self.b };
            Some(self.alg.mul_trunc(img, &inner, room))
        };
        let (x0, x1) = if w.len() < 3 { par::join(|| child(0), || child(1)) } else { (child(0), child(1)) };
        for part in [x0, x1].into_iter().flatten() {
            self.alg.add_assign(&mut out, &part);
        }
        out
    }
}

/// The free algebra itself as a substitution target.
pub struct SeriesAlgebra {
    pub order: usize,
}

impl<S: Scalar> GradedAlgebra<S> for SeriesAlgebra {
    type Elem = NCSeries<S>;

    fn zero(&self) -> NCSeries<S> {
        NCSeries::zero(self.order)
    }
    fn add_assign(&self, acc: &mut NCSeries<S>, x: &NCSeries<S>) {
        for (w, c) in x.iter() {
            acc.add_term(*w, c);
        }
    }
    fn scale(&self, x: &NCSeries<S>, c: &S) -> NCSeries<S> {
        x.scale(c)
    }
    fn mul_trunc(&self, a: &NCSeries<S>, x: &NCSeries<S>, max_deg: usize) -> NCSeries<S> {
        let mut out = NCSeries::zero(self.order);
        for (w1, c1) in a.iter() {
            for (w2, c2) in x.iter() {
                if w1.len() + w2.len() <= max_deg {
                    out.add_term(w1.concat(*w2), &(c1.clone() * c2));
                }
            }
        }
        out
    }
    fn truncate(&self, x: &NCSeries<S>, max_deg: usize) -> NCSeries<S> {
        NCSeries::from_terms(self.order, x.iter().filter(|(w, _)| w.len() <= max_deg).map(|(w, c)| (*w, c.clone())))
    }
    fn has_constant_term(&self, x: &NCSeries<S>) -> bool {
        !x.constant_term().is_zero()
    }
}

/// `g * f(X0, g^-1 X1 g)`: the product of the graded Grothendieck-Teichmuller group.
pub fn grt_mul<S: Scalar>(f: &NCSeries<S>, g: &NCSeries<S>) -> Result<NCSeries<S>> {
    if f.order() != g.order() {
        return Err(Error::OrderMismatch(f.order(), g.order()));
    }
    let order = f.order();
    let ginv = g.inverse()?;
    let x0 = NCSeries::monomial(order, Word::X0, S::one());
    let x1 = NCSeries::monomial(order, Word::X1, S::one());
    let conj = ginv.concat_mul(&x1)?.concat_mul(g)?;
    let alg = SeriesAlgebra { order };
    let inner = substitute(f, &alg, &x0, &conj, &NCSeries::one(order))?;
    g.concat_mul(&inner)
}
