use num_bigint::BigInt;
use num_rational::Rational64;
use proptest::prelude::*;

use torsheaf::qseries::{eta_inverse_power, geometric, geometric_squared};
use torsheaf::LaurentSeries;

const ORDER: i64 = 12;

fn series() -> impl Strategy<Value = LaurentSeries> {
    prop::collection::vec((-3i64..=ORDER, -20i64..=20), 0..8).prop_map(|terms| {
        LaurentSeries::from_integer_terms(terms.into_iter().map(|(e, c)| (e, BigInt::from(c))), Some(ORDER))
    })
}

fn unit() -> impl Strategy<Value = LaurentSeries> {
    (prop::bool::ANY, prop::collection::vec((1i64..=ORDER, -5i64..=5), 0..6)).prop_map(|(neg, terms)| {
        let c0 = if neg { -1 } else { 1 };
        LaurentSeries::from_integer_terms(
            std::iter::once((0, BigInt::from(c0))).chain(terms.into_iter().map(|(e, c)| (e, BigInt::from(c)))),
            Some(ORDER),
        )
    })
}

proptest! {
    #[test]
    fn ring_laws(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn unit_inverse(u in unit()) {
        let order = Rational64::from_integer(ORDER);
        let inv = u.inverse_unit(order).unwrap();
        prop_assert_eq!(&u * &inv, LaurentSeries::one(Some(order)));
        let rational = u.inverse(order).unwrap().to_integer().unwrap();
        prop_assert_eq!(rational, inv);
    }

    #[test]
    fn eta_powers_add(m in 0u32..6, n in 0u32..6) {
        let lhs = &eta_inverse_power(m, ORDER) * &eta_inverse_power(n, ORDER);
        prop_assert_eq!(lhs, eta_inverse_power(m + n, ORDER));
    }

    #[test]
    fn truncation_is_idempotent(a in series(), n in -3i64..ORDER) {
        let once = a.truncate_at(n);
        prop_assert_eq!(once.truncate_at(n), once.clone());
        prop_assert_eq!(once.order(), Some(Rational64::from_integer(n)));
    }
}

#[test]
fn partition_numbers() {
    let p = eta_inverse_power(1, 10).dense(0, 10);
    let want: Vec<BigInt> = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42].iter().map(|x| BigInt::from(*x)).collect();
    assert_eq!(p, want);
}

#[test]
fn geometric_helpers() {
    let g = geometric_squared(1, 6);
    assert_eq!(g.dense(0, 6), (1..=7).map(BigInt::from).collect::<Vec<_>>());
    assert_eq!(&geometric(2, 9) * &geometric(2, 9), geometric_squared(2, 9));
}

#[test]
fn fractional_exponents_are_flagged() {
    let s = LaurentSeries::from_terms(4, [(1, BigInt::from(1))], None);
    assert!(s.assert_integer_exponents().is_err());
    let s = LaurentSeries::from_terms(4, [(8, BigInt::from(3))], None);
    assert_eq!(s.assert_integer_exponents().unwrap().coeff_at(2), BigInt::from(3));
}

#[test]
fn non_unit_inverse_fails() {
    let s = LaurentSeries::from_integer_terms([(1, BigInt::from(1))], Some(5));
    assert!(s.inverse(Rational64::from_integer(5)).is_err());
    let s = LaurentSeries::from_integer_terms([(0, BigInt::from(2))], Some(5));
    assert!(s.inverse_unit(Rational64::from_integer(5)).is_err());
}
