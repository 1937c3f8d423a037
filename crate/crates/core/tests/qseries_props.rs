use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use conway_ramond::qseries::{Bound, Exp, PuiseuxSeries};

fn exponent() -> impl Strategy<Value = Exp> {
    (
        prop::sample::select(vec![1i64, 2, 3, 4, 6, 8, 12, 24]),
        -6i64..30,
    )
        .prop_map(|(d, a)| Exp::new(a, d))
}

fn coeff() -> impl Strategy<Value = BigRational> {
    (-40i64..40, prop::sample::select(vec![1i64, 1, 1, 2, 3]))
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn bound() -> impl Strategy<Value = Bound> {
    prop_oneof![
        3 => (1i64..9, prop::sample::select(vec![1i64, 2, 3])).prop_map(|(a, d)| Bound::Finite(Exp::new(a, d))),
        1 => Just(Bound::PosInf),
    ]
}

fn series() -> impl Strategy<Value = PuiseuxSeries> {
    (prop::collection::vec((exponent(), coeff()), 0..8), bound())
        .prop_map(|(terms, t)| PuiseuxSeries::from_terms(terms, t))
}

/// Exact series (no truncation), kept short so products stay cheap.
fn exact() -> impl Strategy<Value = PuiseuxSeries> {
    prop::collection::vec((exponent(), coeff()), 1..6)
        .prop_map(|terms| PuiseuxSeries::from_terms(terms, Bound::PosInf))
}

fn cut() -> impl Strategy<Value = Exp> {
    (-4i64..24, prop::sample::select(vec![1i64, 2, 3, 4])).prop_map(|(a, d)| Exp::new(a, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn addition_is_commutative_and_associative(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn negation_cancels(a in series()) {
        let z = a.sub(&a);
        prop_assert!(z.is_zero());
        prop_assert_eq!(z.trusted_up_to(), a.trusted_up_to());
    }

    #[test]
    fn multiplication_is_commutative(a in series(), b in series()) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn multiplication_is_associative(a in series(), b in series(), c in series()) {
        let l = a.mul(&b).unwrap().mul(&c).unwrap();
        let r = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(l.agrees_with(&r));
    }

    #[test]
    fn distributive_below_common_bound(a in series(), b in series(), c in series()) {
        let l = a.mul(&b.add(&c)).unwrap();
        let r = a.mul(&b).unwrap().add(&a.mul(&c).unwrap());
        prop_assert!(l.agrees_with(&r));
    }

    #[test]
    fn one_is_neutral(a in series()) {
        prop_assert_eq!(a.mul(&PuiseuxSeries::constant(1)).unwrap(), a);
    }

    /// Truncating the inputs never corrupts a coefficient the product claims
    /// to know: below its trusted bound it matches the exact product.
    #[test]
    fn product_trust_bound_is_sound(a in exact(), b in exact(), ta in cut(), tb in cut()) {
        let full = a.mul(&b).unwrap();
        let p = a.truncate(ta).mul(&b.truncate(tb)).unwrap();
        prop_assert_eq!(full.truncate(p.trusted_up_to()), p);
    }

    /// ... and the bound is the advertised one.
    #[test]
    fn product_trust_bound_formula(a in exact(), b in exact(), ta in cut(), tb in cut()) {
        let at = a.truncate(ta);
        let bt = b.truncate(tb);
        let v = |s: &PuiseuxSeries, t: Exp| s.min_exponent().unwrap_or(t);
        let expect = (ta + v(&bt, tb)).min(tb + v(&at, ta));
        prop_assert_eq!(at.mul(&bt).unwrap().trusted_up_to(), Bound::Finite(expect));
    }

    #[test]
    fn sum_trust_is_minimum(a in series(), b in series()) {
        prop_assert_eq!(a.add(&b).trusted_up_to(), a.trusted_up_to().min(b.trusted_up_to()));
    }

    #[test]
    fn pow_matches_repeated_product(a in exact(), n in 0u32..4, t in cut()) {
        let a = a.truncate(t);
        let mut r = PuiseuxSeries::constant(1);
        for _ in 0..n {
            r = r.mul(&a).unwrap();
        }
        prop_assert!(a.pow(n).unwrap().agrees_with(&r));
    }

    #[test]
    fn truncate_never_raises_trust(a in series(), t in cut()) {
        let s = a.truncate(t);
        prop_assert!(s.trusted_up_to() <= a.trusted_up_to());
        prop_assert!(s.trusted_up_to() <= Bound::Finite(t));
        prop_assert!(s.terms().all(|(e, _)| Bound::Finite(e) < s.trusted_up_to()));
    }

    #[test]
    fn display_never_panics(a in series()) {
        let _ = a.to_string();
        let _ = a.to_debug_string();
    }
}

#[test]
fn uninitialized_operand_is_rejected() {
    let x = PuiseuxSeries::constant(3);
    assert!(x.mul(&PuiseuxSeries::uninitialized()).is_err());
    assert!(PuiseuxSeries::uninitialized().mul(&x).is_err());
}

#[test]
fn empty_but_trusted_operand_is_zero() {
    let z = PuiseuxSeries::zero(Exp::from_integer(2));
    let x = PuiseuxSeries::from_int_terms([(Exp::new(1, 2), 5)], Exp::from_integer(4));
    let p = x.mul(&z).unwrap();
    assert!(p.is_zero());
    // v(z) is its bound 2, v(x) = 1/2: min(4 + 2, 2 + 1/2).
    assert_eq!(p.trusted_up_to(), Bound::Finite(Exp::new(5, 2)));
}

#[test]
fn coefficients_beyond_trust_are_refused() {
    let x = PuiseuxSeries::from_int_terms([(Exp::from_integer(0), 1)], Exp::from_integer(1));
    assert!(x.coefficient(Exp::new(1, 2)).is_ok());
    assert!(x.coefficient(Exp::from_integer(1)).is_err());
}
