use std::sync::Arc;

use drinfeld::braid::{normal_form, Arena, BraidElement, Gen, RawElement, Strategy as Rewrite};
use drinfeld::mzv;
use drinfeld::ncseries::{
    duality_partner, index_to_word, is_grouplike, random_grouplike, random_grouplike_no_linear, random_lie,
    series_from_admissible, word_to_index, ZetaProvider,
};
use drinfeld::relations::{rhs_sums, CConvention, Relation, TaylorH};
use drinfeld::solver::{mu_from_phi, solve_generic, Parameters, SolveOptions};
use drinfeld::{Index, NCSeries, QuadExt, Rational, Scalar};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| Rational::ratio(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |q| !q.is_zero())
}

fn gen_word(max_len: usize) -> impl Strategy<Value = Vec<Gen>> {
    prop::collection::vec(prop::sample::select(Gen::ALL.to_vec()), 0..=max_len)
}

fn a3_word(max_len: usize) -> impl Strategy<Value = Vec<Gen>> {
    prop::collection::vec(prop::sample::select(vec![Gen::T12, Gen::T13, Gen::T23]), 0..=max_len)
}

fn raw(arena: Arena, terms: &[(Vec<Gen>, Rational)]) -> RawElement<Rational> {
    let mut e = RawElement::new(arena);
    for (w, c) in terms {
        e.push(w.clone(), c.clone());
    }
    e
}

/// Product of generators through the eager PBW multiplication.
fn eager(arena: Arena, terms: &[(Vec<Gen>, Rational)]) -> BraidElement<Rational> {
    let mut out = BraidElement::zero(arena);
    for (w, c) in terms {
        let mut acc = BraidElement::one(arena);
        for g in w.iter().rev() {
            acc = acc.left_mul_gen(*g, usize::MAX);
        }
        out.add_scaled(&acc, c);
    }
    out
}

fn admissible_index(max_w: usize) -> impl Strategy<Value = Index> {
    prop::sample::select(Index::admissible_up_to(max_w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rewrite_strategies_agree(terms in prop::collection::vec((gen_word(5), rational()), 1..4), seed in any::<u64>()) {
        let e = raw(Arena::A4, &terms);
        let left = normal_form(&e, Rewrite::Leftmost).unwrap();
        prop_assert_eq!(&left, &normal_form(&e, Rewrite::Rightmost).unwrap());
        prop_assert_eq!(&left, &normal_form(&e, Rewrite::Random(seed)).unwrap());
        prop_assert_eq!(&left, &eager(Arena::A4, &terms));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn center_commutes_in_a3(w in a3_word(5), c in nonzero_rational()) {
        let x = eager(Arena::A3, &[(w, c)]);
        let center = BraidElement::linear(Arena::A3, &[(Gen::T12, Rational::one()), (Gen::T13, Rational::one()), (Gen::T23, Rational::one())]).unwrap();
        prop_assert!(center.commutator(&x, usize::MAX).unwrap().is_zero());
    }

    #[test]
    fn three_strand_center_commutes_with_a3_part_of_a4(w in a3_word(4), free in gen_word(2)) {
        // t12 + t13 + t23 commutes with t12, t13, t23 inside the four-strand algebra too,
        // and with the sum t14 + t24 + t34
        let mut word = w.clone();
        word.extend(free.iter().filter(|g| !g.is_free()));
        let x = eager(Arena::A4, &[(word, Rational::one())]);
        let one = Rational::one();
        let center = BraidElement::linear(Arena::A4, &[(Gen::T12, one.clone()), (Gen::T13, one.clone()), (Gen::T23, one.clone())]).unwrap();
        prop_assert!(center.commutator(&x, usize::MAX).unwrap().is_zero());
        let s = BraidElement::linear(Arena::A4, &[(Gen::T14, one.clone()), (Gen::T24, one.clone()), (Gen::T34, one)]).unwrap();
        prop_assert!(center.commutator(&s, usize::MAX).unwrap().is_zero());
    }

    #[test]
    fn rational_field_axioms(a in rational(), b in rational(), c in nonzero_rational()) {
        prop_assert_eq!((a.clone() * &b) * &c, a.clone() * &(b.clone() * &c));
        prop_assert_eq!((a.clone() + b.clone()) * &c, a.clone() * &c + b.clone() * &c);
        prop_assert_eq!(c.clone() * &c.inverse().unwrap(), Rational::one());
        prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn quadratic_extension_norm(a in rational(), b in rational(), c in rational(), e in rational(), d in nonzero_rational()) {
        let d = Arc::new(d);
        let x = QuadExt::new(a, b, d.clone());
        let y = QuadExt::new(c, e, d.clone());
        // the norm is multiplicative and x * conj(x) is the norm
        prop_assert_eq!((x.clone() * &y).norm(), x.norm() * &y.norm());
        let xc = x.clone() * &x.conjugate();
        prop_assert!(xc.b.is_zero());
        prop_assert_eq!(xc.a, x.norm());
        if !x.norm().is_zero() {
            prop_assert_eq!(x.clone() * &x.inverse().unwrap(), QuadExt::rational(Rational::one()));
        }
        let mu = QuadExt::mu(d.clone());
        prop_assert_eq!(mu.clone() * &mu, QuadExt::rational((*d).clone()));
    }

    #[test]
    fn taylor_division_inverts_multiplication(f in prop::collection::vec(rational(), 6), g in prop::collection::vec(rational(), 6), g0 in nonzero_rational()) {
        let f = TaylorH::from_coeffs(f, 5);
        let mut g = g;
        g[0] = g0;
        let g = TaylorH::from_coeffs(g, 5);
        prop_assert_eq!(f.mul(&g).div(&g).unwrap(), f);
    }

    #[test]
    fn index_word_round_trip(k in admissible_index(10)) {
        let w = index_to_word(&k);
        prop_assert_eq!(w.len(), k.wt());
        prop_assert_eq!(word_to_index(w).unwrap(), k.clone());
        let d = duality_partner(&k).unwrap();
        prop_assert_eq!(d.wt(), k.wt());
        prop_assert_eq!(duality_partner(&d).unwrap(), k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exp_and_log_are_inverse(seed in any::<u64>()) {
        let l = random_lie(seed, 6, false);
        let f = l.exp().unwrap();
        prop_assert!(is_grouplike(&f, 0.0));
        prop_assert_eq!(f.log().unwrap(), l);
    }

    #[test]
    fn grouplike_antipode_is_inverse(seed in any::<u64>()) {
        let f = random_grouplike(seed, 6);
        let inv = f.inverse().unwrap();
        prop_assert_eq!(f.antipode(), inv.clone());
        prop_assert_eq!(f.concat_mul(&inv).unwrap(), NCSeries::one(6));
    }

    #[test]
    fn concatenation_is_associative(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (x, y, z) = (random_grouplike(a, 5), random_lie(b, 5, false), random_grouplike(c, 5));
        prop_assert_eq!(x.concat_mul(&y).unwrap().concat_mul(&z).unwrap(), x.concat_mul(&y.concat_mul(&z).unwrap()).unwrap());
    }

    #[test]
    fn regularization_reconstructs_grouplike_series(seed in any::<u64>()) {
        let f = random_grouplike_no_linear(seed, 6);
        prop_assert_eq!(series_from_admissible(&f, 6).unwrap(), f);
    }

    #[test]
    fn stuffle_in_depth_two(a in 2u32..=5, b in 2u32..=5) {
        let z = |p: Vec<u32>| mzv::eval(&Index::new(p).unwrap(), 40).unwrap().value;
        let lhs = z(vec![a]) * &z(vec![b]);
        let rhs = z(vec![a, b]) + z(vec![b, a]) + z(vec![a + b]);
        prop_assert!((lhs - rhs).magnitude() < 1e-38);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn solver_outputs_satisfy_duality_and_odd_degrees_vanish(seed in any::<u64>(), n in 2i64..=7) {
        let phi = solve_generic(5, &Parameters::Seed(seed), &SolveOptions::default()).unwrap().phi;
        for k in Index::admissible_up_to(5) {
            prop_assert_eq!(phi.zeta(&k).unwrap(), phi.zeta(&duality_partner(&k).unwrap()).unwrap(), "index {}", k);
        }
        let mu2 = mu_from_phi(&phi).unwrap();
        for rel in Relation::ALL {
            let sums = rhs_sums(rel, &phi, &mu2, &Rational::from_int(n), 5, CConvention::default()).unwrap();
            for (w, s) in sums.iter().enumerate().filter(|(w, _)| w % 2 == 1) {
                prop_assert!(s.is_zero(), "relation {} odd degree {} gives {}", rel.name(), w, s);
            }
        }
    }
}
