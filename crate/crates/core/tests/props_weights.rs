use proptest::prelude::*;

use wafom_nets::basefield::MultiIndex;
use wafom_nets::merit::lower_bound_box;
use wafom_nets::weights::{dick_weight, vol, vol_bound_conv, DickVariant, WeightSequence};

fn weights(s: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..3.0, s).prop_map(|mut a| {
        a.sort_by(f64::total_cmp);
        a
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn modified_dominates_generalized(
        b in prop_oneof![Just(2u32), Just(3)],
        a in weights(3),
        ks in prop::collection::vec(0u64..500, 3),
    ) {
        let l = 6;
        let ks: Vec<u64> = ks.iter().map(|k| k % (b as u64).pow(l as u32)).collect();
        let k = MultiIndex::from_integers(&ks, b, l).unwrap();
        let modified = dick_weight(&k, &a, DickVariant::Modified).unwrap();
        let generalized = dick_weight(&k, &a, DickVariant::Generalized).unwrap();
        prop_assert!(modified >= generalized - 1e-12);
        let nonzero = k.coords().iter().map(|c| c.hamming_weight()).sum::<usize>() as f64;
        prop_assert!(modified >= nonzero - 1e-12);
        prop_assert_eq!(modified == 0.0, k.is_zero());
    }

    #[test]
    fn vol_is_monotone_and_bounded(
        b in prop_oneof![Just(2u32), Just(3)],
        s in 1usize..4,
        raw in weights(4),
        m in 0.0f64..8.0,
    ) {
        let a: Vec<f64> = raw.iter().take(s).map(|x| x.max(0.0)).collect();
        let v = vol(m, &a, b, 100_000_000).unwrap();
        let v_more = vol(m + 0.5, &a, b, 100_000_000).unwrap();
        prop_assert!(v >= 1);
        prop_assert!(v <= v_more);
        prop_assert!(v as f64 <= vol_bound_conv(m, &a, b) * (1.0 + 1e-12));
    }

    #[test]
    fn lower_bound_box_decreases_in_d(b in prop_oneof![Just(2u32), Just(3)], s in 1usize..5, a0 in 0.0f64..2.0) {
        let a: Vec<f64> = (0..s).map(|j| a0 + j as f64).collect();
        let mut previous = f64::INFINITY;
        for d in 1..30 {
            let ln = lower_bound_box(d, &a, b).unwrap().ln();
            prop_assert!(ln < previous);
            previous = ln;
        }
    }
}

#[test]
fn parsed_rules_agree_with_their_terms() {
    let seq = WeightSequence::parse("power:a=1,r=1,c=0", 2).unwrap();
    assert_eq!(seq.walsh_weights(4).unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
    let zero = WeightSequence::parse("power:a=0,r=1,c=0", 3).unwrap();
    assert_eq!(zero.walsh_weights(3).unwrap(), vec![0.0; 3]);
}
