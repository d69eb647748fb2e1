use num_complex::Complex64;
use proptest::prelude::*;

use wafom_nets::basefield::MultiIndex;
use wafom_nets::walsh::{walsh_coefficient, walsh_eval, PointDigits};

fn index(b: u32, l: usize, ks: &[u64]) -> MultiIndex {
    let per = (b as u64).pow(l as u32);
    let ks: Vec<u64> = ks.iter().map(|k| k % per).collect();
    MultiIndex::from_integers(&ks, b, l).unwrap()
}

proptest! {
    #[test]
    fn character_property(
        b in prop_oneof![Just(2u32), Just(3), Just(4), Just(5)],
        l in 1usize..6,
        k1 in prop::collection::vec(any::<u64>(), 2),
        k2 in prop::collection::vec(any::<u64>(), 2),
        x in prop::collection::vec(0.0f64..1.0, 2),
    ) {
        let (p, q) = (index(b, l, &k1), index(b, l, &k2));
        let point = PointDigits::from_f64(&x, b, l).unwrap();
        let sum = walsh_eval(&p.add(&q).unwrap(), &point).unwrap().to_complex();
        let product = walsh_eval(&p, &point).unwrap().to_complex() * walsh_eval(&q, &point).unwrap().to_complex();
        prop_assert!((sum - product).norm() < 1e-12);
        let diff = walsh_eval(&p.sub(&q).unwrap(), &point).unwrap().to_complex();
        let quotient = walsh_eval(&p, &point).unwrap().to_complex() * walsh_eval(&q, &point).unwrap().conj().to_complex();
        prop_assert!((diff - quotient).norm() < 1e-12);
        prop_assert!((walsh_eval(&p, &point).unwrap().to_complex().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthonormal_on_the_grid(
        b in prop_oneof![Just(2u32), Just(3)],
        l in 1usize..4,
        k1 in prop::collection::vec(any::<u64>(), 2),
        k2 in prop::collection::vec(any::<u64>(), 2),
    ) {
        let (p, q) = (index(b, l, &k1), index(b, l, &k2));
        let inner = walsh_coefficient(|x| walsh_eval(&p, x).unwrap().to_complex(), &q, l).unwrap();
        let expected = if p == q { 1.0 } else { 0.0 };
        prop_assert!((inner - Complex64::new(expected, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn zero_index_is_constant_one() {
    let k = MultiIndex::zero(3, 3, 4);
    let x = PointDigits::from_f64(&[0.3, 0.7, 0.99], 3, 4).unwrap();
    assert_eq!(walsh_eval(&k, &x).unwrap().to_complex(), Complex64::new(1.0, 0.0));
}
