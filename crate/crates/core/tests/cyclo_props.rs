use blockscope::cyclo::{build_reduction, is_p_rational, Cyclotomic, GaloisAut, Rational};
use num_integer::Integer;
use proptest::prelude::*;

const CONDUCTORS: [u64; 10] = [1, 3, 4, 5, 7, 8, 9, 12, 15, 24];

fn from_coeffs(n: u64, coeffs: &[i64]) -> Cyclotomic {
    coeffs.iter().enumerate().fold(Cyclotomic::zero(), |acc, (k, &c)| {
        &acc + &Cyclotomic::root_of_unity(n, k as i64).scale_int(c as i128)
    })
}

/// Random algebraic integer of `Q(zeta_n)` together with `n`.
fn integer_in(n: u64) -> impl Strategy<Value = Cyclotomic> {
    prop::collection::vec(-3i64..=3, n as usize).prop_map(move |c| from_coeffs(n, &c))
}

fn pair() -> impl Strategy<Value = (u64, Cyclotomic, Cyclotomic)> {
    prop::sample::select(CONDUCTORS.to_vec()).prop_flat_map(|n| (Just(n), integer_in(n), integer_in(n)))
}

fn units(n: u64) -> Vec<u64> {
    (1..=n).filter(|k| k.gcd(&n) == 1).collect()
}

proptest! {
    #[test]
    fn equality_matches_zero_difference((_n, x, y) in pair()) {
        prop_assert_eq!(x == y, (&x - &y).is_zero());
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert!(x.is_algebraic_integer());
    }

    #[test]
    fn ring_axioms((_n, x, y) in pair()) {
        prop_assert_eq!(&x * &y, &y * &x);
        let one = Cyclotomic::one();
        prop_assert_eq!(&x * &one, x.clone());
        let s = &x + &y;
        prop_assert_eq!(&s * &x, &(&x * &x) + &(&y * &x));
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inverse().unwrap(), one);
        }
    }

    #[test]
    fn galois_action_is_a_ring_homomorphism((n, x, y) in pair(), pick in 0usize..64) {
        let us = units(n);
        let k = us[pick % us.len()];
        let s = GaloisAut::new(n, k as i64).unwrap();
        let sx = s.apply(&x).unwrap();
        let sy = s.apply(&y).unwrap();
        prop_assert_eq!(s.apply(&(&x + &y)).unwrap(), &sx + &sy);
        prop_assert_eq!(s.apply(&(&x * &y)).unwrap(), &sx * &sy);
        prop_assert_eq!(x.complex_conjugate().complex_conjugate(), x.clone());
    }

    #[test]
    fn reduction_is_a_ring_homomorphism((n, x, y) in pair(), pi in 0usize..3) {
        let p = [2u64, 3, 5][pi];
        let r = build_reduction(p, n).unwrap();
        let f = r.field();
        let rx = r.reduce(&x).unwrap();
        let ry = r.reduce(&y).unwrap();
        prop_assert_eq!(r.reduce(&(&x + &y)).unwrap(), f.add(&rx, &ry));
        prop_assert_eq!(r.reduce(&(&x * &y)).unwrap(), f.mul(&rx, &ry));
        prop_assert_eq!(r.reduce(&Cyclotomic::one()).unwrap(), f.one());
    }

    #[test]
    fn p_rationality_is_the_conductor_criterion((n, x, _y) in pair(), pi in 0usize..3, lift in 1u64..4) {
        let p = [2u64, 3, 5][pi];
        let direct = is_p_rational(std::slice::from_ref(&x), p, n).unwrap();
        prop_assert_eq!(direct, x.conductor() % p != 0);
        let lifted = is_p_rational(std::slice::from_ref(&x), p, n * lift).unwrap();
        prop_assert_eq!(direct, lifted);
    }

    #[test]
    fn canonical_form_survives_lifting((n, x, _y) in pair(), lift in 1u64..4) {
        let dense = x.lift(n * lift);
        prop_assert_eq!(Cyclotomic::from_dense(n * lift, dense), x.clone());
        let q = Rational::new(3, 7);
        prop_assert_eq!(x.scale(q).div_rational(q).unwrap(), x);
    }
}
