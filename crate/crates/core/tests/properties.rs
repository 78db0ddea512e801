mod oracle;

use std::sync::Arc;

use dgcalc_core::bar::{nested_safe_bound, BarComplex, HochschildComplex};
use dgcalc_core::random;
use dgcalc_core::{
    adj, adj_op, diagonal, hom_cx, nat_complex, nerve, opposite, rank, segal_check, tensor_cx, ChainComplex,
    Field,
};
use proptest::prelude::*;

fn field(p: u32) -> Field {
    Field::new(p).unwrap()
}

fn betti_vec(c: &ChainComplex, lo: i64, hi: i64) -> Vec<usize> {
    (lo..=hi).map(|t| c.betti(t)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_inverse(p in prop::sample::select(vec![2u32, 3, 5, 7, 101]), a in 1u32..1000) {
        let f = field(p);
        let a = a % p;
        prop_assume!(a != 0);
        prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
    }

    #[test]
    fn rank_matches_dense_oracle(p in prop::sample::select(vec![2u32, 3, 5]), seed in any::<u64>(),
                                 rows in 1usize..24, cols in 1usize..24) {
        let f = field(p);
        let m = random::matrix(&mut random::seeded(seed), f, rows, cols, 0.3);
        let dense: Vec<Vec<u64>> = (0..rows)
            .map(|r| (0..cols).map(|c| m.get(r, c) as u64).collect())
            .collect();
        prop_assert_eq!(rank(&m), oracle::dense_rank(p as u64, dense));
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn random_complexes_are_complexes(p in prop::sample::select(vec![2u32, 3]), seed in any::<u64>()) {
        let c = random::complex(&mut random::seeded(seed), field(p), -1, 3, 3, "c");
        prop_assert!(c.validate().passed());
        prop_assert_eq!(c.euler_characteristic(), (-1..=3).map(|n| if n % 2 == 0 { c.betti(n) as i64 } else { -(c.betti(n) as i64) }).sum::<i64>());
    }

    #[test]
    fn kunneth_for_tensor_and_hom(p in prop::sample::select(vec![2u32, 3]), seed in any::<u64>()) {
        let mut rng = random::seeded(seed);
        let c1 = random::complex(&mut rng, field(p), 0, 2, 2, "x");
        let c2 = random::complex(&mut rng, field(p), 0, 2, 2, "y");
        let b1 = betti_vec(&c1, -1, 3);
        let t = tensor_cx(&c1, &c2).unwrap();
        prop_assert!(t.validate().passed());
        for n in 0..=4 {
            let expect: usize = (0..=n).map(|i| c1.betti(i) * c2.betti(n - i)).sum();
            prop_assert_eq!(t.betti(n), expect);
        }
        let h = hom_cx(&c1, &c2).unwrap();
        prop_assert!(h.validate().passed());
        for n in -2..=2 {
            let expect: usize = (-1..=3).map(|i| b1[(i + 1) as usize] * c2.betti(i + n)).sum();
            prop_assert_eq!(h.betti(n), expect);
        }
    }

    #[test]
    fn shift_moves_homology(seed in any::<u64>(), k in -3i64..3) {
        let c = random::complex(&mut random::seeded(seed), field(3), 0, 3, 2, "c");
        let s = c.shift(k);
        prop_assert!(s.validate().passed());
        for n in -1..=4 {
            prop_assert_eq!(s.betti(n + k), c.betti(n));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_categories_and_bimodules_validate(p in prop::sample::select(vec![2u32, 3]), seed in any::<u64>()) {
        let mut rng = random::seeded(seed);
        let cat = Arc::new(random::category(&mut rng, field(p), 3));
        prop_assert!(cat.validate().passed());
        let op = opposite(&cat);
        prop_assert!(op.validate().passed());
        prop_assert!(opposite(&op) == *cat);
        let v = random::bimodule(&mut rng, &cat);
        prop_assert!(v.validate().passed());
        prop_assert!(adj(&v).validate().passed());
        prop_assert!(adj_op(&v).validate().passed());
        let d = diagonal(&cat);
        prop_assert!(d.validate().passed());
    }

    #[test]
    fn identity_transformation_is_a_cycle(p in prop::sample::select(vec![2u32, 3]), seed in any::<u64>()) {
        let mut rng = random::seeded(seed);
        let cat = Arc::new(random::category(&mut rng, field(p), 2));
        let v = random::bimodule(&mut rng, &cat);
        let nat = nat_complex(&v, &v).unwrap();
        prop_assert!(nat.validate().passed());
        let id: Vec<(usize, u32)> = nat
            .generators()
            .iter()
            .enumerate()
            .filter(|(_, g)| {
                let map = g.name.split_once(':').unwrap().1;
                let (x, y) = map.split_once('↦').unwrap();
                x == y
            })
            .map(|(i, _)| (i, 1))
            .collect();
        prop_assert!(!id.is_empty());
        prop_assert!(nat.apply_d(&id).is_empty());
    }

    #[test]
    fn bar_differentials_square_to_zero(p in prop::sample::select(vec![2u32, 3]), seed in any::<u64>()) {
        let mut rng = random::seeded(seed);
        let cat = Arc::new(random::category(&mut rng, field(p), 2));
        let v1 = Arc::new(random::bimodule(&mut rng, &cat));
        let v2 = Arc::new(random::bimodule(&mut rng, &cat));
        let bar = BarComplex::new(v1, v2, 0, 0, 3).unwrap();
        for t in 0..=5 {
            let d1 = bar.total_differential(t);
            let d0 = bar.total_differential(t - 1);
            prop_assert!(d0.mul(&d1).unwrap().is_zero());
        }
        for j in 2..=3 {
            for n in 0..=5 {
                let h = bar.horizontal(n, j - 1).mul(&bar.horizontal(n, j)).unwrap();
                prop_assert!(h.is_zero());
            }
        }
        let hh = HochschildComplex::new(cat.clone(), 3).unwrap();
        prop_assert!(hh.to_complex().unwrap().validate().passed());
    }

    #[test]
    fn nerves_satisfy_segal(seed in any::<u64>()) {
        let c = random::finite_category(&mut random::seeded(seed));
        prop_assert!(c.validate().is_empty());
        let x = nerve(&c, 3);
        prop_assert!(x.validate().passed());
        for m in 0..=3 {
            for n in 0..=(3 - m) {
                prop_assert!(segal_check(&x, m, n).unwrap().holds());
            }
        }
    }
}

#[test]
fn nested_bound_caps_the_outer_bound() {
    use dgcalc_core::SafeBound::*;
    assert_eq!(nested_safe_bound(UpTo(6), UpTo(4), Some(0)), UpTo(4));
    assert_eq!(nested_safe_bound(UpTo(6), Everywhere, Some(0)), UpTo(6));
    assert_eq!(nested_safe_bound(UpTo(6), UpTo(4), None), UpTo(6));
}
