//! Property tests for the arithmetic invariants: multiplicativity,
//! factorization round-trips, gcd divisibility, and agreement with the
//! brute-force oracles at small scale.

mod common;

use proptest::prelude::*;

use totient_gcd::arith::{
    euler_phi, euler_phi_s, factorize, gcd_u64, is_square_mod, SPrimeSet,
};
use totient_gcd::quadfield::{
    self, canonical_associate, exact_div, is_unit, mul, norm, quad_factorize, quad_gcd, FieldTag,
    QuadInt,
};

#[test]
fn euler_phi_matches_brute_count() {
    for n in 1..=10_000u64 {
        assert_eq!(euler_phi(n as i64).unwrap(), common::phi_brute(n), "phi({n})");
    }
}

#[test]
fn is_square_mod_matches_enumeration_small() {
    for a in 1..=200u64 {
        let squares = common::squares_mod_brute(a);
        for b in 0..a {
            if gcd_u64(b, a) != 1 {
                continue;
            }
            assert_eq!(
                is_square_mod(b as i64, a).unwrap(),
                squares.contains(&b),
                "b={b} mod a={a}"
            );
        }
    }
}

#[test]
fn euler_phi_s_with_empty_set_is_euler_phi() {
    let empty = SPrimeSet::empty();
    for n in 1..=2_000i64 {
        assert_eq!(euler_phi_s(n, &empty).unwrap(), euler_phi(n).unwrap());
        assert_eq!(euler_phi_s(-n, &empty).unwrap(), euler_phi(n).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn factorize_round_trip(n in prop::num::i64::ANY) {
        prop_assume!(n != 0 && n != i64::MIN);
        let f = factorize(n).unwrap();
        prop_assert_eq!(f.value().unwrap(), n);
        for &(p, e) in &f.factors {
            prop_assert!(totient_gcd::arith::is_prime_u64(p));
            prop_assert!(e >= 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn euler_phi_multiplicative(m in 1i64..1 << 31, n in 1i64..1 << 31) {
        prop_assume!(gcd_u64(m as u64, n as u64) == 1);
        prop_assert_eq!(
            euler_phi(m * n).unwrap(),
            euler_phi(m).unwrap() * euler_phi(n).unwrap()
        );
    }

    #[test]
    fn quad_norm_multiplicative(
        au in -1000i64..1000, av in -1000i64..1000,
        bu in -1000i64..1000, bv in -1000i64..1000,
        gaussian in prop::bool::ANY,
    ) {
        let field = if gaussian { FieldTag::GaussianQi } else { FieldTag::EisensteinQomega };
        let a = QuadInt::new(au, av, field).unwrap();
        let b = QuadInt::new(bu, bv, field).unwrap();
        prop_assert_eq!(
            norm(&mul(&a, &b).unwrap()).unwrap(),
            norm(&a).unwrap() * norm(&b).unwrap()
        );
    }

    #[test]
    fn quad_factorize_round_trip(
        u in -1000i64..1000, v in -1000i64..1000,
        gaussian in prop::bool::ANY,
    ) {
        prop_assume!(u != 0 || v != 0);
        let field = if gaussian { FieldTag::GaussianQi } else { FieldTag::EisensteinQomega };
        let alpha = QuadInt::new(u, v, field).unwrap();
        let f = quad_factorize(&alpha).unwrap();
        prop_assert_eq!(f.value().unwrap(), alpha);
        prop_assert!(is_unit(&f.unit));
        for (pi, e) in &f.factors {
            prop_assert!(*e >= 1);
            // each listed element is prime: its residue norm is a rational
            // prime, or it is an inert rational prime with norm p^2
            let n = norm(pi).unwrap();
            let prime_norm = totient_gcd::arith::is_prime_u64(n);
            let inert = pi.v == 0
                && totient_gcd::arith::is_prime_u64(pi.u.unsigned_abs())
                && n == pi.u.unsigned_abs() * pi.u.unsigned_abs();
            prop_assert!(prime_norm || inert, "non-prime factor {:?}", pi);
        }
    }

    #[test]
    fn quad_gcd_divides_and_scales(
        au in -40i64..40, av in -40i64..40,
        bu in -40i64..40, bv in -40i64..40,
        du in -10i64..10, dv in -10i64..10,
        gaussian in prop::bool::ANY,
    ) {
        let field = if gaussian { FieldTag::GaussianQi } else { FieldTag::EisensteinQomega };
        let a = QuadInt::new(au, av, field).unwrap();
        let b = QuadInt::new(bu, bv, field).unwrap();
        let d = QuadInt::new(du, dv, field).unwrap();
        prop_assume!(!a.is_zero() || !b.is_zero());
        let g = quad_gcd(&a, &b).unwrap();
        prop_assert!(exact_div(&a, &g).unwrap().is_some());
        prop_assert!(exact_div(&b, &g).unwrap().is_some());
        if !d.is_zero() {
            let scaled = quad_gcd(&mul(&d, &a).unwrap(), &mul(&d, &b).unwrap()).unwrap();
            let expected = canonical_associate(&mul(&d, &g).unwrap()).unwrap();
            prop_assert_eq!(scaled, expected);
        }
    }

    #[test]
    fn quad_phi_multiplicative_on_coprime(
        au in -30i64..30, av in -30i64..30,
        bu in -30i64..30, bv in -30i64..30,
        gaussian in prop::bool::ANY,
    ) {
        let field = if gaussian { FieldTag::GaussianQi } else { FieldTag::EisensteinQomega };
        let a = QuadInt::new(au, av, field).unwrap();
        let b = QuadInt::new(bu, bv, field).unwrap();
        prop_assume!(!a.is_zero() && !b.is_zero());
        prop_assume!(is_unit(&quad_gcd(&a, &b).unwrap()));
        prop_assert_eq!(
            quadfield::quad_phi(&mul(&a, &b).unwrap()).unwrap(),
            quadfield::quad_phi(&a).unwrap() * quadfield::quad_phi(&b).unwrap()
        );
    }
}
