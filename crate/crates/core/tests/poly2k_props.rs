use hafpack_core::{Modulus, TruncatedPoly};
use proptest::prelude::*;

fn poly(bits: u32, cap: usize) -> impl Strategy<Value = TruncatedPoly> {
    prop::collection::vec(any::<u64>(), 0..=cap + 2)
        .prop_map(move |c| TruncatedPoly::from_coeffs(Modulus::new(bits, cap).unwrap(), &c))
}

fn triple() -> impl Strategy<Value = (TruncatedPoly, TruncatedPoly, TruncatedPoly)> {
    (1u32..=8, 0usize..12).prop_flat_map(|(k, d)| (poly(k, d), poly(k, d), poly(k, d)))
}

proptest! {
    #[test]
    fn ring_laws((a, b, c) in triple()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert!((&a + &a.neg()).is_zero());
    }

    #[test]
    fn reduction_is_a_ring_map((a, b, _) in triple(), drop in 0u32..8) {
        let k = a.modulus().bits();
        let bits = k.saturating_sub(drop).max(1);
        let r = |p: &TruncatedPoly| p.reduce_bits(bits).unwrap();
        prop_assert_eq!(r(&(&a + &b)), &r(&a) + &r(&b));
        prop_assert_eq!(r(&(&a * &b)), &r(&a) * &r(&b));
    }

    #[test]
    fn coefficients_stay_canonical((a, b, _) in triple()) {
        let p = &a * &b;
        let m = p.modulus();
        prop_assert!(p.coeffs().iter().all(|&c| c <= m.mask()));
        prop_assert!(p.coeffs().len() <= m.cap() + 1);
        prop_assert!(p.coeffs().last().is_none_or(|&c| c != 0));
    }

    #[test]
    fn halving_undoes_doubling((a, _, _) in triple()) {
        if a.modulus().bits() < 8 {
            let doubled = a.double_lift().unwrap();
            prop_assert!(doubled.is_even());
            prop_assert_eq!(doubled.halve().unwrap(), a);
        }
    }

    #[test]
    fn series_division_makes_the_target_even((pivot, target, _) in triple()) {
        let Some(m) = pivot.lowest_odd_degree() else { return Ok(()); };
        if target.lowest_odd_degree().is_some_and(|t| t < m) {
            prop_assert!(TruncatedPoly::series_div_mod2(&target, &pivot).is_err());
            return Ok(());
        }
        let c = TruncatedPoly::series_div_mod2(&target, &pivot).unwrap();
        prop_assert!(c.coeffs().iter().all(|&x| x <= 1));
        prop_assert!((&(&c * &pivot) + &target).is_even());
    }
}
