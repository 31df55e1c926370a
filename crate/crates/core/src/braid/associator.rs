use std::sync::Arc;

use serde::Serialize;

use super::{Arena, BraidAlgebra, BraidElement, Gen};
use crate::error::Result;
use crate::ncseries::{is_grouplike, max_grouplike_defect, substitute_apply, NCSeries, Word};
use crate::par;
use crate::scalars::{QuadExt, Scalar};

/// A pair `(mu, phi)`; `mu` lives in the same scalar ring as the coefficients.
#[derive(Clone, Debug)]
pub struct AssociatorCandidate<S: Scalar> {
    pub mu: S,
    pub phi: NCSeries<S>,
}

fn lin<S: Scalar>(arena: Arena, gens: &[Gen]) -> BraidElement<S> {
    let terms: Vec<(Gen, S)> = gens.iter().map(|g| (*g, S::one())).collect();
    BraidElement::linear(arena, &terms).expect("generators belong to the arena")
}

/// Applies `f(a, b)` on the left of `y`.
fn apply<S: Scalar>(alg: &BraidAlgebra, f: &NCSeries<S>, a: &[Gen], b: &[Gen], y: &BraidElement<S>) -> Result<BraidElement<S>> {
    substitute_apply(f, alg, &lin(alg.arena, a), &lin(alg.arena, b), y)
}

/// `phi(t12, t23+t24) phi(t13+t23, t34) - phi(t23, t34) phi(t12+t13, t24+t34) phi(t12, t23)`.
pub fn pentagon_residual<S: Scalar>(phi: &NCSeries<S>) -> Result<BraidElement<S>> {
    use Gen::*;
    let alg = BraidAlgebra { arena: Arena::A4, order: phi.order() };
    let one = BraidElement::one(Arena::A4);
    let (lhs, rhs) = par::join(
        || {
            let y = apply(&alg, phi, &[T13, T23], &[T34], &one)?;
            apply(&alg, phi, &[T12], &[T23, T24], &y)
        },
        || {
            let y = apply(&alg, phi, &[T12], &[T23], &one)?;
            let y = apply(&alg, phi, &[T12, T13], &[T24, T34], &y)?;
            apply(&alg, phi, &[T23], &[T34], &y)
        },
    );
    lhs?.try_sub(&rhs?)
}

/// Degree-`n` part of the pentagon residual that is linear in a homogeneous
/// degree-`n` correction `psi`.
pub fn pentagon_linear_part<S: Scalar>(psi: &NCSeries<S>) -> Result<BraidElement<S>> {
    use Gen::*;
    let alg = BraidAlgebra { arena: Arena::A4, order: psi.order() };
    let one = BraidElement::one(Arena::A4);
    let mut out = apply(&alg, psi, &[T12], &[T23, T24], &one)?;
    out.add_scaled(&apply(&alg, psi, &[T13, T23], &[T34], &one)?, &S::one());
    let minus = -S::one();
    out.add_scaled(&apply(&alg, psi, &[T23], &[T34], &one)?, &minus);
    out.add_scaled(&apply(&alg, psi, &[T12, T13], &[T24, T34], &one)?, &minus);
    out.add_scaled(&apply(&alg, psi, &[T12], &[T23], &one)?, &minus);
    Ok(out)
}

/// `exp(mu x / 2)` for a linear element `x`, applied on the left of `y`.
fn apply_exp<S: Scalar>(alg: &BraidAlgebra, mu: &S, x: &[Gen], y: &BraidElement<S>) -> Result<BraidElement<S>> {
    let half_mu = mu.scale_ratio(1, 2);
    let e = NCSeries::monomial(alg.order, Word::X0, half_mu).exp()?;
    let zero = BraidElement::zero(alg.arena);
    substitute_apply(&e, alg, &lin(alg.arena, x), &zero, y)
}

/// Residuals (LHS - RHS) of both hexagon equations in the three-strand algebra:
///
/// `exp(mu(t13+t23)/2) = phi(t13,t12) e^{mu t13/2} phi(t13,t23)^-1 e^{mu t23/2} phi(t12,t23)`
///
/// `exp(mu(t12+t13)/2) = phi(t23,t13)^-1 e^{mu t13/2} phi(t12,t13) e^{mu t12/2} phi(t12,t23)^-1`
pub fn hexagon_residuals<S: Scalar>(cand: &AssociatorCandidate<S>) -> Result<(BraidElement<S>, BraidElement<S>)> {
    use Gen::*;
    let phi = &cand.phi;
    let mu = &cand.mu;
    let alg = BraidAlgebra { arena: Arena::A3, order: phi.order() };
    let one = BraidElement::one(Arena::A3);
    let inv = phi.inverse()?;
    let (first, second) = par::join(
        || -> Result<BraidElement<S>> {
            let lhs = apply_exp(&alg, mu, &[T13, T23], &one)?;
            let y = apply(&alg, phi, &[T12], &[T23], &one)?;
            let y = apply_exp(&alg, mu, &[T23], &y)?;
            let y = apply(&alg, &inv, &[T13], &[T23], &y)?;
            let y = apply_exp(&alg, mu, &[T13], &y)?;
            let rhs = apply(&alg, phi, &[T13], &[T12], &y)?;
            lhs.try_sub(&rhs)
        },
        || -> Result<BraidElement<S>> {
            let lhs = apply_exp(&alg, mu, &[T12, T13], &one)?;
            let y = apply(&alg, &inv, &[T12], &[T23], &one)?;
            let y = apply_exp(&alg, mu, &[T12], &y)?;
            let y = apply(&alg, phi, &[T12], &[T13], &y)?;
            let y = apply_exp(&alg, mu, &[T13], &y)?;
            let rhs = apply(&alg, &inv, &[T23], &[T13], &y)?;
            lhs.try_sub(&rhs)
        },
    );
    Ok((first?, second?))
}

/// Parts of both hexagon residuals linear in a homogeneous correction `psi`.
pub fn hexagon_linear_parts<S: Scalar>(psi: &NCSeries<S>) -> Result<(BraidElement<S>, BraidElement<S>)> {
    use Gen::*;
    let alg = BraidAlgebra { arena: Arena::A3, order: psi.order() };
    let one = BraidElement::one(Arena::A3);
    let p = |a: &[Gen], b: &[Gen]| apply(&alg, psi, a, b, &one);
    let minus = -S::one();
    // first: -(psi(t13,t12) - psi(t13,t23) + psi(t12,t23))
    let mut first = p(&[T13], &[T23])?;
    first.add_scaled(&p(&[T13], &[T12])?, &minus);
    first.add_scaled(&p(&[T12], &[T23])?, &minus);
    // second: -(-psi(t23,t13) + psi(t12,t13) - psi(t12,t23))
    let mut second = p(&[T23], &[T13])?;
    second.add_scaled(&p(&[T12], &[T13])?, &minus);
    second.add_scaled(&p(&[T12], &[T23])?, &S::one());
    Ok((first, second))
}

/// `phi(X0,X1) phi(X1,X0) - 1`.
pub fn two_cycle_residual<S: Scalar>(phi: &NCSeries<S>) -> NCSeries<S> {
    phi.two_cycle_residual()
}

/// Group-like, pentagon, and both hexagons with `mu = 0`.
pub fn is_degenerate_associator<S: Scalar>(phi: &NCSeries<S>, tol: f64) -> Result<bool> {
    if !is_grouplike(phi, tol) {
        return Ok(false);
    }
    if !pentagon_residual(phi)?.is_negligible(tol) {
        return Ok(false);
    }
    let (a, b) = hexagon_residuals(&AssociatorCandidate { mu: S::zero(), phi: phi.clone() })?;
    Ok(a.is_negligible(tol) && b.is_negligible(tol))
}

/// Maxima of every associator residual for `(mu, phi)` with `mu^2` given.
#[derive(Clone, Debug, Serialize)]
pub struct AssociatorCheck {
    pub order: usize,
    pub exact: bool,
    pub tolerance: f64,
    pub mu_squared: String,
    pub grouplike: f64,
    pub pentagon: f64,
    pub hexagon: [f64; 2],
    pub two_cycle: f64,
    pub pass: bool,
    /// Whether `phi` also satisfies both hexagons with `mu = 0`.
    pub degenerate: bool,
}

/// Runs every check. Exact scalars pass only on zero residuals.
pub fn check_associator<S: Scalar>(phi: &NCSeries<S>, mu_squared: &S, tol: f64) -> Result<AssociatorCheck> {
    let tol = if S::EXACT { 0.0 } else { tol };
    let ((grouplike, two_cycle), (pentagon, hexagon)) = par::join(
        || (max_grouplike_defect(phi), phi.two_cycle_residual().max_abs()),
        || {
            par::join(
                || pentagon_residual(phi).map(|r| r.max_abs()),
                || {
                    let cand = AssociatorCandidate {
                        mu: QuadExt::mu(Arc::new(mu_squared.clone())),
                        phi: phi.map(|c| QuadExt::base(c.clone())),
                    };
                    hexagon_residuals(&cand).map(|(a, b)| [a.max_abs(), b.max_abs()])
                },
            )
        },
    );
    let (pentagon, hexagon) = (pentagon?, hexagon?);
    let ok = |v: f64| v <= tol;
    let pass = ok(grouplike) && ok(pentagon) && ok(hexagon[0]) && ok(hexagon[1]) && ok(two_cycle);
    let degenerate = ok(grouplike) && ok(pentagon) && {
        let (a, b) = hexagon_residuals(&AssociatorCandidate { mu: S::zero(), phi: phi.clone() })?;
        ok(a.max_abs()) && ok(b.max_abs())
    };
    Ok(AssociatorCheck {
        order: phi.order(),
        exact: S::EXACT,
        tolerance: tol,
        mu_squared: mu_squared.to_string(),
        grouplike,
        pentagon,
        hexagon,
        two_cycle,
        pass,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::PbwKey;
    use crate::scalars::Rational;

    type Q = Rational;

    #[test]
    fn trivial_associator() {
        let one = NCSeries::<Q>::one(4);
        assert!(pentagon_residual(&one).unwrap().is_zero());
        let (a, b) = hexagon_residuals(&AssociatorCandidate { mu: Q::zero(), phi: one.clone() }).unwrap();
        assert!(a.is_zero() && b.is_zero());
        assert!(is_degenerate_associator(&one, 0.0).unwrap());
        let c = check_associator(&one, &Q::zero(), 0.0).unwrap();
        assert!(c.pass && c.degenerate);
        // phi = 1 is not an associator for mu != 0
        let c = check_associator(&one, &Q::from_int(-1), 0.0).unwrap();
        assert!(!c.pass && c.degenerate && c.pentagon == 0.0);
    }

    #[test]
    fn pentagon_degree_one() {
        let phi = NCSeries::from_terms(3, [(Word::EMPTY, Q::one()), (Word::X0, Q::one())]);
        let r = pentagon_residual(&phi).unwrap();
        let expect = BraidElement::<Q>::generator(Arena::A4, Gen::T12).unwrap().scale(&Q::ratio(-1, 1));
        assert_eq!(r.degree_part(1), expect);
    }

    #[test]
    fn hexagon_mu_two() {
        let cand = AssociatorCandidate { mu: Q::from_int(2), phi: NCSeries::one(3) };
        let (a, _) = hexagon_residuals(&cand).unwrap();
        // -(mu^2/8)[t13, t23] with mu = 2
        let t13t23 = PbwKey::from_parts(&[], &[Gen::T13, Gen::T23], 0);
        let t23t13 = PbwKey::from_parts(&[], &[Gen::T23, Gen::T13], 0);
        let d2 = a.degree_part(2);
        assert_eq!(d2.num_terms(), 2);
        assert_eq!(d2.coeff(t13t23), Q::ratio(-1, 2));
        assert_eq!(d2.coeff(t23t13), Q::ratio(1, 2));
    }

    #[test]
    fn linear_parts_match_full_residual() {
        // for phi = 1 + psi with psi homogeneous of degree n, the degree-n residual is linear
        let psi = NCSeries::from_terms(3, [("010".parse().unwrap(), Q::ratio(2, 3)), ("011".parse().unwrap(), Q::ratio(-1, 5))]);
        let phi = NCSeries::one(3).try_add(&psi).unwrap();
        assert_eq!(pentagon_residual(&phi).unwrap().degree_part(3), pentagon_linear_part(&psi).unwrap());
        let (a, b) = hexagon_residuals(&AssociatorCandidate { mu: Q::zero(), phi }).unwrap();
        let (la, lb) = hexagon_linear_parts(&psi).unwrap();
        assert_eq!(a.degree_part(3), la);
        assert_eq!(b.degree_part(3), lb);
    }
}
