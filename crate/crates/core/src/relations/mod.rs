//! Relations (A)-(D) between zeta values and `mu`, as identities in `Q[[h]]`.
//!
//! Each right side is `c_0 + sum_w S_w h^w / mu^w`, where `S_w` is a finite
//! combination of zeta values of total weight `w`. Only `mu^2` is known, so
//! even degrees compare `LHS_w` with `S_w / (mu^2)^(w/2)` and odd degrees
//! require `S_w = 0` outright. No verdict depends on the sign of `mu`.

mod coeffs;
mod taylor;

use std::time::Instant;

use num_bigint::BigInt;
use serde::Serialize;

pub use coeffs::{
    a_prime, a_val, b_val, enum_i, f_minus, f_plus, g_val, multi_binom, w_val, CConvention, CompositionPair, IndexTriple,
};
pub use taylor::{Elementary, TaylorH};

use crate::error::{Error, Result};
use crate::ncseries::{Index, ZetaProvider};
use crate::par;
use crate::scalars::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    A,
    B,
    C,
    D,
}

impl Relation {
    pub const ALL: [Relation; 4] = [Relation::A, Relation::B, Relation::C, Relation::D];

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Relation::A),
            "B" => Ok(Relation::B),
            "C" => Ok(Relation::C),
            "D" => Ok(Relation::D),
            _ => Err(Error::Invalid(format!("unknown relation {s:?}; expected A, B, C or D"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Relation::A => "A",
            Relation::B => "B",
            Relation::C => "C",
            Relation::D => "D",
        }
    }

    /// Whether the relation takes the parameter `N`.
    pub fn uses_n(self) -> bool {
        self != Relation::D
    }

    fn check_n(self, n: &Rational) -> Result<()> {
        match self {
            Relation::B if *n == Rational::one() => {
                Err(Error::Invalid("relation B needs N != 1: its left side has a degenerate denominator".into()))
            }
            Relation::A | Relation::B | Relation::C if n.is_zero() => Err(Error::Invalid("N must be nonzero".into())),
            _ => Ok(()),
        }
    }
}

fn sinh(a: &Rational, order: usize) -> TaylorH<Rational> {
    TaylorH::elementary(Elementary::Sinh, a, order)
}

fn cosh(a: &Rational, order: usize) -> TaylorH<Rational> {
    TaylorH::elementary(Elementary::Cosh, a, order)
}

/// The left side through `h^order`.
pub fn lhs(rel: Relation, n: &Rational, order: usize) -> Result<TaylorH<Rational>> {
    rel.check_n(n)?;
    let one = Rational::one();
    let o = order + 1;
    let out = match rel {
        Relation::A => sinh(&one, o).scale(n).div(&sinh(n, o))?,
        Relation::B => {
            let den = sinh(&(n.clone() - &one), o).add(&sinh(&one, o));
            sinh(&one, o).scale(n).div(&den)?
        }
        Relation::C => {
            let num = sinh(&one, o).mul(&cosh(n, o)).scale(&(n.clone() * n));
            let den = sinh(n, o).mul(&cosh(&one, o));
            num.div(&den)?
        }
        Relation::D => {
            let q = |k| TaylorH::qint(k, order);
            let num = q(6)?.mul(&q(4)?).scale(&Rational::from_int(49));
            let den = q(12)?.mul(&q(7)?).mul(&q(2)?);
            num.div(&den)?
        }
    };
    Ok(out.truncate(order))
}

/// The constant term of the right side.
pub fn constant_term(rel: Relation, n: &Rational) -> Rational {
    match rel {
        Relation::A | Relation::B => Rational::one(),
        Relation::C => n.clone(),
        Relation::D => Rational::from_int(7),
    }
}

fn sign(e: usize) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn int(b: BigInt) -> Rational {
    Rational::from_int(b)
}

/// `(coefficient, indices)` pairs whose sum, with zeta values substituted
/// and multiplied, is `S_w`.
pub fn rhs_terms(rel: Relation, n: &Rational, w: usize, conv: CConvention) -> Result<Vec<(Rational, Vec<Index>)>> {
    rel.check_n(n)?;
    let mut out = Vec::new();
    if w < 2 {
        return Ok(out);
    }
    let one = Rational::one();
    match rel {
        Relation::A => {
            let base = (one.clone() - n.clone() * n) * (n.clone() * &Rational::from_int(2)).powi(w as i32)?;
            for k in Index::admissible_of_weight(w) {
                let c = base.clone() * n.powi(-2 * k.ht() as i32)? * Rational::from_int(sign(k.dp()));
                out.push((c, vec![k]));
            }
        }
        Relation::B => {
            let two_w = Rational::from_int(2).powi(w as i32)?;
            for k in Index::admissible_of_weight(w) {
                let c = two_w.clone() * g_val(&k, n) * Rational::from_int(sign(k.dp()));
                out.push((c, vec![k]));
            }
        }
        Relation::C => {
            if w % 2 == 1 {
                return Ok(out);
            }
            let half = w / 2;
            let outer = (n.clone() * n - one) * n;
            let two = Rational::from_int(2);
            for k in 1..=half {
                for t in enum_i(w, k) {
                    let r = t.r.iter().sum::<u32>() as usize;
                    let c = Rational::from_int(sign(r))
                        * two.powi((w - k) as i32)?
                        * a_val(&t, n, conv)?
                        * int(multi_binom(&t.p, &t.r)?);
                    if !c.is_zero() {
                        out.push((outer.clone() * c, vec![t.index()]));
                    }
                }
            }
            for l in 2..=w.saturating_sub(2) {
                let m = w - l;
                for i in 1..=l / 2 {
                    for j in 1..=m / 2 {
                        for t1 in enum_i(l, i) {
                            for t2 in enum_i(m, j) {
                                let ru = (t1.r.iter().sum::<u32>() + t2.r.iter().sum::<u32>()) as usize;
                                let c = Rational::from_int(conv.pair_sign() * sign(ru + m))
                                    * two.powi((w - i - j - 1) as i32)?
                                    * b_val(&t1, &t2, n, conv)?
                                    * int(multi_binom(&t1.p, &t1.r)?)
                                    * int(multi_binom(&t2.p, &t2.r)?);
                                if !c.is_zero() {
                                    out.push((outer.clone() * c, vec![t1.index(), t2.index()]));
                                }
                            }
                        }
                    }
                }
            }
        }
        Relation::D => {
            for pq in CompositionPair::of_weight(w) {
                let wp = pq.p.iter().sum::<u32>() as usize;
                out.push((w_val(&pq) * Rational::from_int(sign(wp)), vec![pq.tau()]));
            }
        }
    }
    Ok(out)
}

/// `S_w` for `w = 0..=order`; entry 0 is the constant term.
pub fn rhs_sums<S: Scalar>(
    rel: Relation,
    z: &dyn ZetaProvider<S>,
    like: &S,
    n: &Rational,
    order: usize,
    conv: CConvention,
) -> Result<Vec<S>> {
    let sums = par::map((0..=order).collect(), |w| -> Result<S> {
        if w == 0 {
            return Ok(S::from_rational_like(&constant_term(rel, n), like));
        }
        let mut acc = S::from_rational_like(&Rational::zero(), like);
        for (c, ks) in rhs_terms(rel, n, w, conv)? {
            let mut term = S::from_rational_like(&c, like);
            for k in &ks {
                term *= &z.zeta(k)?;
            }
            acc += &term;
        }
        Ok(acc)
    });
    sums.into_iter().collect()
}

/// Per-degree residuals of one relation at one value of `N`.
#[derive(Clone, Debug)]
pub struct Residuals<S: Scalar> {
    /// `LHS_w - S_w / (mu^2)^(w/2)` for even `w`, `S_w` (and `LHS_w`) for odd `w`.
    pub values: Vec<S>,
}

impl<S: Scalar> Residuals<S> {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }
}

/// Residuals through `h^order` for a provider of zeta values and a value of `mu^2`.
pub fn verify<S: Scalar>(
    rel: Relation,
    z: &dyn ZetaProvider<S>,
    mu_squared: &S,
    n: &Rational,
    order: usize,
    conv: CConvention,
) -> Result<Residuals<S>> {
    let left = lhs(rel, n, order)?;
    let sums = rhs_sums(rel, z, mu_squared, n, order, conv)?;
    let inv_mu2 = if order >= 2 { Some(mu_squared.inverse().ok_or(Error::ZeroDenominator)?) } else { None };
    let mut values = Vec::with_capacity(order + 1);
    let mut scale = S::from_rational_like(&Rational::one(), mu_squared);
    for (w, s) in sums.into_iter().enumerate() {
        let l = S::from_rational_like(&left.coeff(w), mu_squared);
        if w % 2 == 0 {
            values.push(l - s * &scale);
            if let Some(inv) = &inv_mu2 {
                scale *= inv;
            }
        } else {
            // an odd left coefficient would also be a failure; fold it in
            values.push(if l.is_zero() { s } else { l + s });
        }
    }
    Ok(Residuals { values })
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualEntry {
    #[serde(rename = "N")]
    pub n: Option<String>,
    pub degree: usize,
    pub value: String,
    pub ok: bool,
}

/// Outcome of checking one relation, ready to be written as JSON.
#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub relation: Relation,
    pub phi_source: String,
    pub mu: String,
    #[serde(rename = "N")]
    pub n: Vec<String>,
    pub max_weight: usize,
    pub convention: Option<String>,
    pub exact: bool,
    pub residuals: Vec<ResidualEntry>,
    pub tolerance: Option<f64>,
    pub pass: bool,
    pub elapsed_ms: u128,
}

impl RelationReport {
    pub fn failing(&self) -> impl Iterator<Item = &ResidualEntry> {
        self.residuals.iter().filter(|r| !r.ok)
    }
}

/// Where the zeta values and `mu^2` came from, for the report.
#[derive(Clone, Debug)]
pub struct Provenance {
    pub phi_source: String,
    pub mu: String,
}

/// Checks `rel` at each `N` and collects a report. Exact scalars must give
/// zero residuals; inexact ones must stay within `tol`.
#[allow(clippy::too_many_arguments)]
pub fn verify_report<S: Scalar>(
    rel: Relation,
    z: &dyn ZetaProvider<S>,
    mu_squared: &S,
    ns: &[Rational],
    order: usize,
    conv: CConvention,
    tol: f64,
    prov: &Provenance,
) -> Result<RelationReport> {
    let start = Instant::now();
    let ns: Vec<Option<Rational>> = if rel.uses_n() {
        if ns.is_empty() {
            return Err(Error::Invalid(format!("relation {} needs at least one N", rel.name())));
        }
        ns.iter().cloned().map(Some).collect()
    } else {
        vec![None]
    };
    let mut residuals = Vec::new();
    for n in &ns {
        let nv = n.clone().unwrap_or_else(Rational::one);
        let r = verify(rel, z, mu_squared, &nv, order, conv)?;
        for (degree, v) in r.values.iter().enumerate() {
            let ok = if S::EXACT { v.is_zero() } else { v.magnitude() <= tol };
            let value = if S::EXACT { v.to_string() } else { format!("{:.3e}", v.magnitude()) };
            residuals.push(ResidualEntry { n: n.as_ref().map(Rational::to_string), degree, value, ok });
        }
    }
    let pass = residuals.iter().all(|r| r.ok);
    Ok(RelationReport {
        relation: rel,
        phi_source: prov.phi_source.clone(),
        mu: prov.mu.clone(),
        n: ns.iter().flatten().map(Rational::to_string).collect(),
        max_weight: order,
        convention: (rel == Relation::C).then(|| conv.name().to_string()),
        exact: S::EXACT,
        residuals,
        tolerance: (!S::EXACT).then_some(tol),
        pass,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

pub fn verify_a<S: Scalar>(z: &dyn ZetaProvider<S>, mu_squared: &S, order: usize, n: &Rational) -> Result<Residuals<S>> {
    verify(Relation::A, z, mu_squared, n, order, CConvention::default())
}

pub fn verify_b<S: Scalar>(z: &dyn ZetaProvider<S>, mu_squared: &S, order: usize, n: &Rational) -> Result<Residuals<S>> {
    verify(Relation::B, z, mu_squared, n, order, CConvention::default())
}

pub fn verify_c<S: Scalar>(
    z: &dyn ZetaProvider<S>,
    mu_squared: &S,
    order: usize,
    n: &Rational,
    conv: CConvention,
) -> Result<Residuals<S>> {
    verify(Relation::C, z, mu_squared, n, order, conv)
}

pub fn verify_d<S: Scalar>(z: &dyn ZetaProvider<S>, mu_squared: &S, order: usize) -> Result<Residuals<S>> {
    verify(Relation::D, z, mu_squared, &Rational::one(), order, CConvention::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncseries::ZetaMap;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    /// A provider holding only zeta(2) = z2.
    fn only_z2(z2: Rational) -> ZetaMap<Rational> {
        ZetaMap([(Index::new(vec![2]).unwrap(), z2)].into_iter().collect())
    }

    #[test]
    fn constant_terms() {
        for rel in Relation::ALL {
            for n in [2i64, 3, 5] {
                let l = lhs(rel, &q(n, 1), 4).unwrap();
                assert_eq!(l.coeff(0), constant_term(rel, &q(n, 1)), "{rel:?} N={n}");
            }
        }
    }

    #[test]
    fn left_sides_are_even() {
        for rel in Relation::ALL {
            let l = lhs(rel, &q(4, 1), 9).unwrap();
            for w in (1..=9).step_by(2) {
                assert!(l.coeff(w).is_zero());
            }
        }
    }

    #[test]
    fn weight_two_calibrations() {
        // with mu^2 = -24 zeta(2) every weight-two right side is a rational multiple of 1
        let z = only_z2(q(1, 24));
        let mu2 = q(-1, 1);
        for n in [2i64, 3, 4, 7] {
            let nn = q(n, 1);
            assert_eq!(lhs(Relation::A, &nn, 2).unwrap().coeff(2), q(1 - n * n, 6));
            for rel in Relation::ALL {
                let r = verify(rel, &z, &mu2, &nn, 2, CConvention::Calibrated).unwrap();
                assert!(r.values.iter().all(Scalar::is_zero), "{rel:?} N={n}: {:?}", r.values);
            }
        }
        let c2 = lhs(Relation::C, &q(3, 1), 2).unwrap().coeff(2);
        assert_eq!(c2, q(3 * 8, 3));
        assert_eq!(lhs(Relation::D, &q(1, 1), 2).unwrap().coeff(2), q(-42, 1));
    }

    #[test]
    fn literal_reading_misses_weight_two() {
        let z = only_z2(q(1, 24));
        let r = verify(Relation::C, &z, &q(-1, 1), &q(3, 1), 2, CConvention::Literal).unwrap();
        assert!(!r.values[2].is_zero());
    }

    #[test]
    fn rejected_parameters() {
        let z = only_z2(q(1, 24));
        assert!(verify(Relation::B, &z, &q(-1, 1), &q(1, 1), 2, CConvention::default()).is_err());
        assert!(verify(Relation::A, &z, &q(0, 1), &q(2, 1), 2, CConvention::default()).is_err());
        assert!(Relation::parse("E").is_err());
        assert_eq!(Relation::parse("c").unwrap(), Relation::C);
    }
}
