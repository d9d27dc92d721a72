use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

use blowdown::hirzebruch::{canonical_vector, chain_for_cpq, extends_over_ball, identify_cpq, inverse_form, CpqParams};
use blowdown::homcalc::Ambient;
use blowdown::mcg::{eval_word, Generator, Sl2, Word};
use blowdown::swledger::{
    alexander_twist, blow_up_ledger, chamber_value_set, dimension, knot_surgery_ledger, profile, LaurentPoly, LinExpr,
};

fn lin() -> impl Strategy<Value = LinExpr> {
    (-50i64..=50, -50i64..=50).prop_map(|(a, b)| LinExpr::new(a, b))
}

fn coprime_pair(max_p: u64) -> impl Strategy<Value = CpqParams> {
    (2..=max_p).prop_flat_map(|p| (Just(p), 1..p)).prop_filter_map("coprime", |(p, q)| CpqParams::new(p, q).ok())
}

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec((prop::bool::ANY, -4i64..=4), 0..12).prop_map(|letters| {
        Word::from_letters(letters.into_iter().map(|(a, k)| (if a { Generator::A } else { Generator::B }, k)))
    })
}

fn twist_at(m: i64) -> LaurentPoly {
    LaurentPoly::from_terms(alexander_twist().terms().map(|(e, c)| (e, c.specialize(m))))
}

/// Up to four twist knots, at most one of them with the symbolic parameter.
fn knot_product() -> impl Strategy<Value = Vec<LaurentPoly>> {
    (prop::collection::vec(-8i64..=8, 1..=4), prop::option::of(0usize..4)).prop_map(|(ms, sym)| {
        ms.iter().enumerate().map(|(i, &m)| if sym == Some(i) { alexander_twist() } else { twist_at(m) }).collect()
    })
}

fn elliptic() -> Ambient {
    let mut a = Ambient::new("E(1)", vec!["F".into(), "S".into()], 12, -8).unwrap();
    a.set_pairing("F", "S", 1).unwrap();
    a.set_pairing("S", "S", -1).unwrap();
    a
}

proptest! {
    #[test]
    fn linexpr_display_parses_back(e in lin()) {
        prop_assert_eq!(e.to_string().parse::<LinExpr>().unwrap(), e);
        prop_assert_eq!(e.pretty().parse::<LinExpr>().unwrap(), e);
    }

    #[test]
    fn linexpr_eval_is_additive(a in lin(), b in lin(), n in -100i64..100) {
        prop_assert_eq!((a + b).eval(n), a.eval(n) + b.eval(n));
        prop_assert_eq!((a - b).eval(n), a.eval(n) - b.eval(n));
        prop_assert_eq!((-a).eval(n), -a.eval(n));
    }

    #[test]
    fn laurent_exact_division_inverts_multiplication(
        a in prop::collection::vec((-5i64..=5, -9i64..=9), 0..6),
        b in prop::collection::vec((-5i64..=5, -9i64..=9), 0..5),
        top in -5i64..=5,
        unit in prop::bool::ANY,
    ) {
        let p = LaurentPoly::from_terms(a.into_iter().map(|(e, c)| (e, LinExpr::constant(c))));
        // Divisor with a unit leading coefficient above every other exponent.
        let lead = LinExpr::constant(if unit { 1 } else { -1 });
        let d = LaurentPoly::from_terms(
            b.into_iter().map(|(e, c)| (e - 6 + top.min(0), LinExpr::constant(c))).chain([(top + 6, lead)]),
        );
        let prod = p.mul(&d).unwrap();
        prop_assert_eq!(prod.div_exact(&d).unwrap(), p);
    }

    #[test]
    fn hj_round_trip_and_determinant(c in coprime_pair(3000)) {
        let chain = chain_for_cpq(c).unwrap();
        prop_assert_eq!(identify_cpq(&chain), Some(c));
        prop_assert_eq!(chain.determinant().abs(), BigInt::from(c.p()).pow(2));
        prop_assert!(chain.weights().iter().all(|w| *w <= -2));
    }

    #[test]
    fn canonical_vector_extends_with_minus_length(c in coprime_pair(800)) {
        let chain = chain_for_cpq(c).unwrap();
        let k = canonical_vector(&chain);
        prop_assert!(extends_over_ball(&chain, &k).unwrap());
        let q = inverse_form(&chain, &k).unwrap();
        prop_assert_eq!(q, num_rational::BigRational::from_integer(BigInt::from(-(chain.len() as i64))));
    }

    #[test]
    fn negation_preserves_extension(c in coprime_pair(200), seed in prop::collection::vec(-3i64..=3, 1..40)) {
        let chain = chain_for_cpq(c).unwrap();
        // Characteristic vectors: weight parity plus an even perturbation.
        let v: Vec<i64> = chain.weights().iter().zip(seed.iter().cycle()).map(|(w, s)| w + 2 * s).collect();
        let v = blowdown::hirzebruch::ValueVector(v);
        prop_assert_eq!(extends_over_ball(&chain, &v).unwrap(), extends_over_ball(&chain, &v.negated()).unwrap());
    }

    #[test]
    fn word_times_inverse_is_identity(w in word()) {
        prop_assert!(eval_word(&w.concat(&w.inverse())).is_identity());
        prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
    }

    #[test]
    fn evaluation_is_a_homomorphism(u in word(), v in word()) {
        let lhs = eval_word(&u.concat(&v));
        let rhs: Sl2 = &eval_word(&u) * &eval_word(&v);
        prop_assert_eq!(lhs.clone(), rhs);
        prop_assert_eq!(lhs.determinant(), BigInt::from(1));
    }

    #[test]
    fn knot_ledgers_are_conjugation_symmetric(polys in knot_product()) {
        let l = knot_surgery_ledger(&polys, &elliptic(), &[1, 0]).unwrap();
        prop_assert!(l.is_conjugation_symmetric());
        for (k, v) in &l.entries {
            let neg: Vec<i64> = k.iter().map(|x| -x).collect();
            prop_assert_eq!(l.value(&neg), Some(-*v));
        }
    }

    #[test]
    fn blow_up_preserves_dimension_and_symmetry(polys in knot_product(), count in 1usize..=3) {
        let l = knot_surgery_ledger(&polys, &elliptic(), &[1, 0]).unwrap();
        let b = blow_up_ledger(&l, count).unwrap();
        prop_assert_eq!(b.len(), l.len() << count);
        prop_assert!(b.is_conjugation_symmetric());
        for (k, v) in &b.entries {
            let base = &k[..l.ambient.rank()];
            prop_assert_eq!(l.value(base), Some(*v));
            prop_assert_eq!(dimension(k, &b.ambient), dimension(base, &l.ambient));
        }
    }

    #[test]
    fn crossing_only_widens_value_sets(v in lin(), n in -100i64..100) {
        let exact = chamber_value_set(v, 0).unwrap();
        let wide = chamber_value_set(v, 1).unwrap();
        prop_assert!(exact.is_subset(&wide));
        prop_assert!(exact.eval(n).is_subset(&wide.eval(n)));
        prop_assert!(chamber_value_set(v, 2).is_err());
    }

    #[test]
    fn profiles_widen_with_crossings(polys in knot_product(), n in 1i64..60) {
        let l = knot_surgery_ledger(&polys, &elliptic(), &[1, 0]).unwrap();
        let mut wide = l.clone();
        wide.crossings = 1;
        let (p0, p1) = (profile(&l, n).unwrap(), profile(&wide, n).unwrap());
        prop_assert!(p0.is_subset(&p1));
        prop_assert!(p1.len() <= 3 * p0.len().max(1));
    }
}
