//! The Drinfeld KZ associator, truncated, from numerically evaluated MZVs.

use std::sync::Arc;

use serde::Serialize;

use crate::braid::{hexagon_residuals, pentagon_residual, AssociatorCandidate};
use crate::error::{Error, Result};
use crate::mzv::{self, MzvCache};
use crate::ncseries::{max_grouplike_defect, series_from_admissible, NCSeries, ZetaMap};
use crate::par;
use crate::scalars::{BigFloat, QuadExt, Scalar};

/// `phi` holds coefficients through weight `weight`. The coupling constant
/// is `mu = 2 pi i`; only `mu^2 = -4 pi^2` is stored.
#[derive(Clone, Debug)]
pub struct KzTruncation {
    pub phi: NCSeries<BigFloat>,
    pub weight: usize,
    pub digits: u32,
    pub mu_squared: BigFloat,
}

impl KzTruncation {
    /// The generator of `Q(mu)` used when hexagons need `mu` itself.
    pub fn mu(&self) -> QuadExt<BigFloat> {
        QuadExt::mu(Arc::new(self.mu_squared.clone()))
    }

    /// `phi` with coefficients lifted into the extension.
    pub fn lifted(&self) -> NCSeries<QuadExt<BigFloat>> {
        self.phi.map(|c| QuadExt::base(c.clone()))
    }
}

/// `-4 pi^2` at the given precision.
pub fn kz_mu_squared(digits: u32) -> BigFloat {
    let pi = BigFloat::pi(digits);
    -(pi.clone() * &pi).scale_ratio(4, 1)
}

/// Builds from an explicit table of values (for example a perturbed one).
pub fn build_kz_from(zetas: &ZetaMap<BigFloat>, weight: usize, digits: u32) -> Result<KzTruncation> {
    if weight < 2 {
        return Err(Error::Invalid(format!("weight bound {weight} is below 2")));
    }
    let phi = series_from_admissible(zetas, weight)?;
    Ok(KzTruncation { phi, weight, digits, mu_squared: kz_mu_squared(digits) })
}

pub fn build_kz(weight: usize, digits: u32, cache: &MzvCache) -> Result<KzTruncation> {
    if weight < 2 {
        return Err(Error::Invalid(format!("weight bound {weight} is below 2")));
    }
    build_kz_from(&mzv::zeta_map(weight, digits, cache)?, weight, digits)
}

#[derive(Clone, Debug, Serialize)]
pub struct KzReport {
    pub weight: usize,
    pub digits: u32,
    pub tolerance: f64,
    pub grouplike: f64,
    pub pentagon: f64,
    pub hexagon: [f64; 2],
    pub two_cycle: f64,
    pub pass: bool,
}

/// Largest absolute normal-form coefficient of each residual.
pub fn check_kz(t: &KzTruncation, tol: f64) -> Result<KzReport> {
    let ((grouplike, two_cycle), (pentagon, hexagon)) = par::join(
        || (max_grouplike_defect(&t.phi), t.phi.two_cycle_residual().max_abs()),
        || {
            par::join(
                || pentagon_residual(&t.phi).map(|r| r.max_abs()),
                || {
                    let cand = AssociatorCandidate { mu: t.mu(), phi: t.lifted() };
                    hexagon_residuals(&cand).map(|(a, b)| [a.max_abs(), b.max_abs()])
                },
            )
        },
    );
    let (pentagon, hexagon) = (pentagon?, hexagon?);
    let pass = [grouplike, pentagon, hexagon[0], hexagon[1], two_cycle].iter().all(|v| *v <= tol);
    Ok(KzReport { weight: t.weight, digits: t.digits, tolerance: tol, grouplike, pentagon, hexagon, two_cycle, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncseries::{Index, Word};

    #[test]
    fn low_weight_coefficients() {
        let t = build_kz(4, 30, &MzvCache::in_memory()).unwrap();
        let z2 = BigFloat::pi(40) * &BigFloat::pi(40);
        let z2 = z2.scale_ratio(1, 6);
        assert!((t.phi.coeff("01".parse().unwrap()) + &z2).magnitude() < 1e-30);
        assert!((t.phi.coeff("10".parse().unwrap()) - &z2).magnitude() < 1e-30);
        assert!(t.phi.coeff(Word::X0).is_zero());
        assert!(t.phi.coeff(Word::X1).is_zero());
        assert_eq!(t.phi.constant_term().to_f64(), 1.0);
        assert_eq!(t.phi.coeff("01".parse().unwrap()).to_decimal(10), "-1.6449340668");
    }

    #[test]
    fn checks_pass_at_low_weight() {
        let t = build_kz(5, 40, &MzvCache::in_memory()).unwrap();
        let r = check_kz(&t, 1e-30).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn tampered_values_break_the_hexagon() {
        let cache = MzvCache::in_memory();
        let mut z = mzv::zeta_map(4, 30, &cache).unwrap();
        let k2: Index = "2".parse().unwrap();
        let bumped = z.0[&k2].clone() + &BigFloat::parse_with("0.00001", 30).unwrap();
        z.0.insert(k2, bumped);
        let t = build_kz_from(&z, 4, 30).unwrap();
        let r = check_kz(&t, 1e-20).unwrap();
        assert!(r.hexagon[0] > 1e-6);
        assert!(!r.pass);
    }
}
