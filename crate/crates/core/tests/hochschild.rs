mod oracle;

use std::sync::Arc;

use dgcalc_core::bar::{hochschild_via_adj_bar, HochschildComplex};
use dgcalc_core::{fixtures, tensor_cat, DgCategory, Field, SafeBound};
use oracle::{convolve, dual_hh_periodic, Algebra};

fn hh(cat: &DgCategory, trunc: usize, top: i64) -> Vec<usize> {
    let h = HochschildComplex::new(Arc::new(cat.clone()), trunc).unwrap();
    assert!(h.safe_bound().covers(top));
    h.betti_range(0..=top)
}

#[test]
fn dual_numbers_match_periodic_resolution() {
    for p in [2u32, 3, 5] {
        let f = Field::new(p).unwrap();
        let expected: Vec<usize> = (0..=4).map(|n| dual_hh_periodic(p as u64, n)).collect();
        assert_eq!(hh(&fixtures::dual(f), 6, 4), expected, "p = {p}");
    }
}

#[test]
fn fixtures_match_dense_cyclic_bar() {
    for p in [2u32, 3] {
        let f = Field::new(p).unwrap();
        for (cat, alg) in [
            (fixtures::unit_k(f), Algebra::unit_k()),
            (fixtures::dual(f), Algebra::dual()),
            (fixtures::a2(f), Algebra::a2()),
        ] {
            let expected: Vec<usize> = (0..=3).map(|n| alg.hh(p as u64, n)).collect();
            assert_eq!(hh(&cat, 5, 3), expected);
        }
    }
}

#[test]
fn headline_values() {
    let f = Field::GF2;
    assert_eq!(hh(&fixtures::unit_k(f), 6, 4), vec![1, 0, 0, 0, 0]);
    assert_eq!(hh(&fixtures::dual(f), 6, 4), vec![2, 2, 2, 2, 2]);
    assert_eq!(hh(&fixtures::a2(f), 6, 3), vec![2, 0, 0, 0]);
}

#[test]
fn kunneth_on_small_products() {
    let f = Field::GF2;
    let cats = [fixtures::unit_k(f), fixtures::dual(f), fixtures::a2(f)];
    for a in &cats {
        for b in &cats {
            let ab = tensor_cat(a, b).unwrap();
            assert_eq!(hh(&ab, 5, 3), convolve(&hh(a, 5, 3), &hh(b, 5, 3)));
        }
    }
}

#[test]
fn via_adjunction_agrees_with_direct() {
    for cat in [fixtures::unit_k(Field::GF2), fixtures::dual(Field::GF2), fixtures::a2(Field::GF2)] {
        let via = hochschild_via_adj_bar(&cat, 6).unwrap();
        let SafeBound::UpTo(top) = via.safe_bound() else { panic!("finite bound") };
        assert_eq!(via.betti_range(0..=top.min(4)), hh(&cat, 6, top.min(4)));
    }
}
