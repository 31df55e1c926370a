//! Degree-by-degree construction of rational associators.
//!
//! Write `phi = phi_below + psi` with `psi` homogeneous of degree `n`. The
//! degree-`n` parts of the pentagon residual, of the shuffle (group-like)
//! conditions and of the hexagon residuals are affine in the `2^n`
//! coefficients of `psi`: the linear part comes from substituting `psi`
//! alone, the constant part from `phi_below`.

mod linear;

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use linear::{dedup_rows, AffineSolution, Rref, SparseRow};

use crate::braid::{
    hexagon_linear_parts, hexagon_residuals, pentagon_linear_part, pentagon_residual, AssociatorCandidate, BraidElement,
    PbwKey,
};
use crate::error::{Error, Result};
use crate::ncseries::{shuffle_words, Index, NCSeries, Word};
use crate::par;
use crate::scalars::{QuadExt, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowSource {
    Pentagon,
    Shuffle,
    Hexagon,
}

#[derive(Clone, Debug)]
pub struct ConstraintRow<S: Scalar> {
    pub coeffs: Vec<(usize, S)>,
    pub rhs: S,
    pub source: RowSource,
}

impl<S: Scalar> ConstraintRow<S> {
    /// `sum coeffs * x - rhs` for the degree-`n` coefficients of `phi`.
    pub fn residual(&self, columns: &[Word], phi: &NCSeries<S>) -> S {
        let mut acc = -self.rhs.clone();
        for (j, a) in &self.coeffs {
            acc += &(a.clone() * &phi.coeff(columns[*j]));
        }
        acc
    }
}

/// Affine system in the coefficients of the words in `columns`.
#[derive(Clone, Debug)]
pub struct AffineSystem<S: Scalar> {
    pub degree: usize,
    pub columns: Vec<Word>,
    pub rows: Vec<ConstraintRow<S>>,
}

#[derive(Clone, Debug)]
pub struct ConstraintOptions<S: Scalar> {
    pub pentagon: bool,
    pub shuffle: bool,
    /// Adds both hexagons with `mu^2` set to this value.
    pub hexagon_mu_squared: Option<S>,
}

impl<S: Scalar> Default for ConstraintOptions<S> {
    fn default() -> Self {
        ConstraintOptions { pentagon: true, shuffle: true, hexagon_mu_squared: None }
    }
}

/// Words of length `n` in decreasing order, so that elimination leaves
/// the smallest words (those starting with `X0`) free.
pub fn degree_columns(n: usize) -> Vec<Word> {
    let mut cols: Vec<Word> = Word::all_of_len(n).collect();
    cols.reverse();
    cols
}

fn braid_rows<S: Scalar>(
    columns: &[Word],
    linear: &[BraidElement<S>],
    constant: &BraidElement<S>,
    n: usize,
    source: RowSource,
) -> Vec<ConstraintRow<S>> {
    let mut by_key: BTreeMap<PbwKey, Vec<(usize, S)>> = BTreeMap::new();
    for (j, e) in linear.iter().enumerate() {
        for (k, c) in e.terms() {
            if k.degree() == n && !c.is_zero() {
                by_key.entry(*k).or_default().push((j, c.clone()));
            }
        }
    }
    for (k, c) in constant.terms() {
        if k.degree() == n && !c.is_zero() {
            by_key.entry(*k).or_default();
        }
    }
    debug_assert_eq!(columns.len(), linear.len());
    by_key
        .into_iter()
        .map(|(k, coeffs)| ConstraintRow { coeffs, rhs: -constant.coeff(k), source })
        .collect()
}

/// The degree-`n` constraints on an extension of `phi_below`, which must be
/// known through degree `n - 1` (its terms of degree `>= n` are ignored).
pub fn constraints_at_degree<S: Scalar>(
    phi_below: &NCSeries<S>,
    n: usize,
    opts: &ConstraintOptions<S>,
) -> Result<AffineSystem<S>> {
    if n == 0 {
        return Err(Error::Invalid("degree must be at least 1".into()));
    }
    if phi_below.order() + 1 < n {
        return Err(Error::Precondition(format!(
            "series known through degree {} cannot be extended to degree {n}",
            phi_below.order()
        )));
    }
    if phi_below.constant_term() != S::one() {
        return Err(Error::Precondition("constant term must be 1".into()));
    }
    let base = phi_below.with_order(n - 1).with_order(n);
    let columns = degree_columns(n);
    let monomials: Vec<NCSeries<S>> = columns.iter().map(|w| NCSeries::monomial(n, *w, S::one())).collect();
    let mut rows = Vec::new();

    if opts.pentagon {
        let (lin, constant) = par::join(
            || par::map(monomials.clone(), |m| pentagon_linear_part(&m)).into_iter().collect::<Result<Vec<_>>>(),
            || pentagon_residual(&base),
        );
        rows.extend(braid_rows(&columns, &lin?, &constant?, n, RowSource::Pentagon));
    }

    if opts.shuffle {
        let col_of: BTreeMap<Word, usize> = columns.iter().enumerate().map(|(j, w)| (*w, j)).collect();
        for lu in 1..=n / 2 {
            for u in Word::all_of_len(lu) {
                for v in Word::all_of_len(n - lu) {
                    if lu == n - lu && v < u {
                        continue;
                    }
                    let coeffs = shuffle_words(u, v)
                        .into_iter()
                        .map(|(w, m)| (col_of[&w], S::from_i64(m as i64)))
                        .collect();
                    let rhs = base.coeff(u) * &base.coeff(v);
                    rows.push(ConstraintRow { coeffs, rhs, source: RowSource::Shuffle });
                }
            }
        }
    }

    if let Some(d) = &opts.hexagon_mu_squared {
        let ctx = Arc::new(d.clone());
        let lifted = base.map(|c| QuadExt::base(c.clone()));
        let cand = AssociatorCandidate { mu: QuadExt::mu(ctx), phi: lifted };
        let (lin, constant) = par::join(
            || par::map(monomials.clone(), |m| hexagon_linear_parts(&m)).into_iter().collect::<Result<Vec<_>>>(),
            || hexagon_residuals(&cand),
        );
        let (c1, c2) = constant?;
        let (l1, l2): (Vec<_>, Vec<_>) = lin?.into_iter().unzip();
        for (lin, c) in [(l1, c1), (l2, c2)] {
            // the linear part is free of mu, so the mu-part of the constant must vanish on its own
            let rational = c.map(|q| q.a.clone());
            let irrational = c.map(|q| q.b.clone());
            rows.extend(braid_rows(&columns, &lin, &rational, n, RowSource::Hexagon));
            let none: Vec<BraidElement<S>> = lin.iter().map(|e| BraidElement::zero(e.arena())).collect();
            rows.extend(braid_rows(&columns, &none, &irrational, n, RowSource::Hexagon));
        }
    }
    Ok(AffineSystem { degree: n, columns, rows })
}

/// `mu^2 = -24 zeta_phi(2)`, the value for which the hexagons can hold.
pub fn mu_from_phi<S: Scalar>(phi: &NCSeries<S>) -> Result<S> {
    let z2 = phi.zeta_of(&Index::new(vec![2])?)?;
    Ok(z2.scale_ratio(-24, 1))
}

/// The generator `mu` of `Q(mu)` for a series.
pub fn mu_generator(phi: &NCSeries<Rational>) -> Result<QuadExt<Rational>> {
    Ok(QuadExt::mu(Arc::new(mu_from_phi(phi)?)))
}

/// How free parameters are chosen at each degree.
#[derive(Clone, Debug)]
pub enum Parameters {
    /// Rationals `p/q` with `0 < |p| <= 100`, `1 <= q <= 10` from a seeded stream.
    Seed(u64),
    /// Values per degree; the length must equal that degree's dimension.
    Explicit(BTreeMap<usize, Vec<Rational>>),
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    pub shuffle_off: bool,
    pub hexagon_mu_squared: Option<Rational>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeReport {
    pub degree: usize,
    pub unknowns: usize,
    pub rows: usize,
    pub distinct_rows: usize,
    pub rank: usize,
    pub dimension: usize,
    pub free_words: Vec<String>,
    pub parameters: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub phi: NCSeries<Rational>,
    pub degrees: Vec<DegreeReport>,
}

/// Solves one degree exactly.
pub fn solve_degree(phi_below: &NCSeries<Rational>, n: usize, opts: &ConstraintOptions<Rational>) -> Result<(AffineSystem<Rational>, AffineSolution, Rref, usize)> {
    let sys = constraints_at_degree(phi_below, n, opts)?;
    let raw: Vec<SparseRow> = sys.rows.iter().map(|r| (r.coeffs.iter().cloned().collect(), r.rhs.clone())).collect();
    let rows = dedup_rows(raw);
    let distinct = rows.len();
    let mut rref = Rref::new();
    for r in rows {
        rref.insert(r, n)?;
    }
    let sol = AffineSolution::from_rref(&rref, sys.columns.len());
    Ok((sys, sol, rref, distinct))
}

/// An exact group-like series satisfying the pentagon through `max_w`.
pub fn solve_generic(max_w: usize, params: &Parameters, opts: &SolveOptions) -> Result<Solution> {
    if max_w < 2 {
        return Err(Error::Invalid(format!("maximum weight {max_w} is below 2")));
    }
    let copts = ConstraintOptions { pentagon: true, shuffle: !opts.shuffle_off, hexagon_mu_squared: opts.hexagon_mu_squared.clone() };
    let mut rng = match params {
        Parameters::Seed(s) => Some(ChaCha8Rng::seed_from_u64(*s)),
        Parameters::Explicit(_) => None,
    };
    let mut phi = NCSeries::one(max_w);
    let mut degrees = Vec::new();
    for n in 1..=max_w {
        let (sys, sol, rref, distinct) = solve_degree(&phi, n, &copts)?;
        let values: Vec<Rational> = match (params, rng.as_mut()) {
            (Parameters::Explicit(m), _) => {
                let v = m.get(&n).cloned().unwrap_or_default();
                if v.len() != sol.dimension() {
                    return Err(Error::Invalid(format!(
                        "degree {n} has {} free parameters but {} values were given",
                        sol.dimension(),
                        v.len()
                    )));
                }
                v
            }
            (_, Some(rng)) => (0..sol.dimension()).map(|_| draw(rng)).collect(),
            _ => unreachable!(),
        };
        for (w, x) in sys.columns.iter().zip(sol.point(&values)) {
            phi.set(*w, x);
        }
        degrees.push(DegreeReport {
            degree: n,
            unknowns: sys.columns.len(),
            rows: sys.rows.len(),
            distinct_rows: distinct,
            rank: rref.rank(),
            dimension: sol.dimension(),
            free_words: sol.free_columns.iter().map(|c| sys.columns[*c].to_string()).collect(),
            parameters: values.iter().map(Rational::to_string).collect(),
        });
    }
    Ok(Solution { phi, degrees })
}

fn draw(rng: &mut ChaCha8Rng) -> Rational {
    let p = loop {
        let p: i64 = rng.gen_range(-100..=100);
        if p != 0 {
            break p;
        }
    };
    Rational::ratio(p, rng.gen_range(1..=10))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncseries::is_grouplike;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    #[test]
    fn degree_one_forces_zero() {
        let (_, sol, _, _) = solve_degree(&NCSeries::one(0), 1, &ConstraintOptions::default()).unwrap();
        assert_eq!(sol.dimension(), 0);
        assert!(sol.particular.iter().all(Scalar::is_zero));
    }

    #[test]
    fn degree_two_is_one_dimensional_and_antisymmetric() {
        let (sys, sol, _, _) = solve_degree(&NCSeries::one(1), 2, &ConstraintOptions::default()).unwrap();
        assert_eq!(sol.dimension(), 1);
        let x = sol.point(&[q(3, 7)]);
        let get = |w: &str| x[sys.columns.iter().position(|c| *c == w.parse().unwrap()).unwrap()].clone();
        assert_eq!(get("01"), q(3, 7));
        assert_eq!(get("10"), q(-3, 7));
        assert!(get("00").is_zero() && get("11").is_zero());
        // pentagon alone adds nothing at degree 2
        let opts = ConstraintOptions { pentagon: false, ..Default::default() };
        assert_eq!(solve_degree(&NCSeries::one(1), 2, &opts).unwrap().1.dimension(), 1);
    }

    #[test]
    fn hexagon_pins_degree_two() {
        // c = mu^2 / 24 on X0X1
        for mu2 in [q(1, 1), q(-24, 1), q(5, 3)] {
            let opts = ConstraintOptions { hexagon_mu_squared: Some(mu2.clone()), ..Default::default() };
            let (sys, sol, _, _) = solve_degree(&NCSeries::one(1), 2, &opts).unwrap();
            assert_eq!(sol.dimension(), 0);
            let j = sys.columns.iter().position(|c| *c == "01".parse().unwrap()).unwrap();
            assert_eq!(sol.particular[j], mu2.clone() * &q(1, 24));
        }
    }

    #[test]
    fn explicit_parameter_and_mu() {
        let params = Parameters::Explicit([(2, vec![q(-1, 24)])].into_iter().collect());
        let s = solve_generic(2, &params, &SolveOptions::default()).unwrap();
        assert_eq!(s.phi.coeff("01".parse().unwrap()), q(-1, 24));
        assert_eq!(s.degrees[1].dimension, 1);
        assert_eq!(mu_from_phi(&s.phi).unwrap(), q(-1, 1));
        assert!(solve_generic(2, &Parameters::Explicit(BTreeMap::new()), &SolveOptions::default()).is_err());
    }

    #[test]
    fn trivial_series_has_mu_zero() {
        let one = NCSeries::<Rational>::one(4);
        assert!(mu_from_phi(&one).unwrap().is_zero());
    }

    #[test]
    fn weight_four_solution() {
        let s = solve_generic(4, &Parameters::Seed(3), &SolveOptions::default()).unwrap();
        assert!(is_grouplike(&s.phi, 0.0));
        assert!(pentagon_residual(&s.phi).unwrap().is_zero());
        assert!(s.phi.two_cycle_residual().is_zero());
        let mu = mu_generator(&s.phi).unwrap();
        let phi = s.phi.map(|c| QuadExt::base(c.clone()));
        let (a, b) = hexagon_residuals(&AssociatorCandidate { mu, phi }).unwrap();
        assert!(a.is_zero() && b.is_zero());
    }

    #[test]
    fn incomplete_input_is_rejected() {
        assert!(constraints_at_degree(&NCSeries::<Rational>::one(1), 3, &ConstraintOptions::default()).is_err());
    }
}
