use proptest::prelude::*;
use tw_secrecy::capacity::{c_ow_hard, c_tw_hard, c_tw_soft};
use tw_secrecy::mathkit::{binary_entropy, entropy_rise, erfc};
use tw_secrecy::protosim::{toeplitz_hash, ToeplitzHash};
use tw_secrecy::{AntennaPattern, ChannelParams, QuadratureSpec};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn erfc_reflection(t in -6.0f64..6.0) {
        prop_assert!((erfc(t) + erfc(-t) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn erfc_agrees_with_statrs(t in -5.0f64..5.0) {
        let want = statrs::function::erf::erfc(t);
        prop_assert!((erfc(t) - want).abs() <= 1e-9 * want);
    }

    #[test]
    fn binary_entropy_is_symmetric(p in 0.0f64..=1.0) {
        let a = binary_entropy(p).unwrap();
        let b = binary_entropy(1.0 - p).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn entropy_rise_matches_difference(eps in 0.01f64..0.49, w in 0.0f64..=1.0) {
        let bias = 0.5 - eps;
        let direct = binary_entropy(eps + bias * w).unwrap() - binary_entropy(eps).unwrap();
        prop_assert!((entropy_rise(eps, bias, w) - direct).abs() < 1e-12);
    }

    #[test]
    fn hard_capacities_are_ordered(ln_eta in -5.0f64..4.0, ln_gamma in -5.0f64..4.0) {
        let p = ChannelParams::new(ln_eta.exp(), ln_gamma.exp()).unwrap();
        let tw = c_tw_hard(&p).unwrap();
        let ow = c_ow_hard(&p).unwrap();
        prop_assert!(tw.value >= ow.value);
        prop_assert!(tw.value <= 1.0);
        prop_assert!(tw.ln_value.is_finite());
    }

    #[test]
    fn soft_eavesdropper_learns_more(ln_eta in -3.0f64..3.0, ln_gamma in -3.0f64..2.0) {
        let p = ChannelParams::new(ln_eta.exp(), ln_gamma.exp()).unwrap();
        let soft = c_tw_soft(&p, &QuadratureSpec::default()).unwrap();
        let hard = c_tw_hard(&p).unwrap();
        prop_assert!(soft.ln_value.is_finite());
        prop_assert!(soft.ln_value <= hard.ln_value + 1e-9);
    }

    #[test]
    fn antenna_pattern_is_bounded(theta in 0.0f64..std::f64::consts::FRAC_PI_2, deg in 0.2f64..10.0) {
        let a = AntennaPattern::from_degrees(deg).unwrap().alpha(theta).unwrap();
        prop_assert!(a.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn toeplitz_is_linear(
        u in prop::collection::vec(0u8..2, 40),
        v in prop::collection::vec(0u8..2, 40),
        seed in any::<u64>(),
    ) {
        let h = ToeplitzHash::new(40, 17, seed).unwrap();
        let sum: Vec<u8> = u.iter().zip(&v).map(|(a, b)| a ^ b).collect();
        let hu = h.hash(&u).unwrap();
        let hv = h.hash(&v).unwrap();
        let expected: Vec<u8> = hu.iter().zip(&hv).map(|(a, b)| a ^ b).collect();
        prop_assert_eq!(h.hash(&sum).unwrap(), expected);
    }

    #[test]
    fn shorter_hashes_are_prefixes(bits in prop::collection::vec(0u8..2, 1..80), seed in any::<u64>()) {
        let n = bits.len();
        let full = toeplitz_hash(&bits, seed, n).unwrap();
        for m in 0..n {
            prop_assert_eq!(&toeplitz_hash(&bits, seed, m).unwrap()[..], &full[..m]);
        }
    }
}
