mod common;

use proptest::prelude::*;
use vclab::combinatorics::{growth_function, sauer_bound, sauer_poly_bound, shatters, vc_dimension, VcSearch, VcStatus};
use vclab::rational::int;
use vclab::{vc_dimension_with, HypothesisSpace, Instance, Labeling};

#[test]
fn shatter_examples() {
    let t = HypothesisSpace::thresholds();
    assert!(shatters(&t, &common::ints([5])).unwrap().is_shattered());
    assert!(!shatters(&t, &common::ints([1, 2])).unwrap().is_shattered());
    let i = HypothesisSpace::intervals();
    assert!(shatters(&i, &common::ints([1, 2])).unwrap().is_shattered());
    assert!(!shatters(&i, &common::ints([1, 2, 3])).unwrap().is_shattered());
}

#[test]
fn vc_examples() {
    let pool = common::ints(0..8);
    let t = vc_dimension(&HypothesisSpace::thresholds(), &pool, 5).unwrap();
    assert_eq!((t.value, t.status), (1, VcStatus::Exact));
    let i = vc_dimension(&HypothesisSpace::intervals(), &pool, 5).unwrap();
    assert_eq!((i.value, i.status), (2, VcStatus::Exact));
    assert_eq!(i.witness, common::ints([0, 1]));
    assert_eq!(i.witnesses.len(), 4);
    let c = vc_dimension(&HypothesisSpace::co_singletons(), &pool, 5).unwrap();
    assert_eq!(c.value, 1);
    let plane: Vec<Instance> = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 3)]
        .iter()
        .map(|&(a, b)| Instance::point(vec![int(a), int(b)]))
        .collect();
    let h = vc_dimension(&HypothesisSpace::halfspaces(2).unwrap(), &plane, 4).unwrap();
    assert_eq!((h.value, h.status), (3, VcStatus::Exact));
}

#[test]
fn vc_search_budget_gives_lower_bound() {
    let space = HypothesisSpace::full(common::atoms(17)).unwrap_err();
    assert!(matches!(space, vclab::Error::Budget { .. }));
    let rows: Vec<Labeling> = Labeling::all(6).collect();
    let full = HypothesisSpace::finite(common::atoms(6), rows).unwrap();
    let v = vc_dimension_with(&full, &common::atoms(6), VcSearch { limit: 6, node_budget: 3 }).unwrap();
    assert_eq!(v.status, VcStatus::LowerBound);
    assert!(v.value <= 6);
}

#[test]
fn growth_examples() {
    let pool = common::ints(0..6);
    assert_eq!(growth_function(&HypothesisSpace::thresholds(), 3, &pool).unwrap().value, 4);
    assert_eq!(growth_function(&HypothesisSpace::intervals(), 3, &pool).unwrap().value, 7);
    assert_eq!(growth_function(&HypothesisSpace::co_singletons(), 3, &pool).unwrap().value, 4);
    assert!(growth_function(&HypothesisSpace::thresholds(), 7, &pool).is_err());
    assert!(growth_function(&HypothesisSpace::thresholds(), 0, &pool).is_err());
}

#[test]
fn sauer_examples() {
    assert_eq!(sauer_bound(2, 5), 16u32.into());
    assert_eq!(sauer_bound(1, 4), 5u32.into());
    assert_eq!(sauer_bound(0, 9), 1u32.into());
    assert_eq!(sauer_bound(5, 3), 8u32.into());
    assert!((sauer_poly_bound(1, 3).unwrap() - 3.0 * std::f64::consts::E).abs() < 1e-12);
    assert!((sauer_poly_bound(2, 4).unwrap() - 29.5562).abs() < 1e-3);
    assert!(sauer_poly_bound(2, 3).is_err());
    assert!(sauer_poly_bound(0, 3).is_err());
}

fn arb_class() -> impl Strategy<Value = (usize, Vec<Vec<bool>>)> {
    (1usize..7).prop_flat_map(|n| (Just(n), prop::collection::vec(prop::collection::vec(any::<bool>(), n), 1..20)))
}

fn build(n: usize, rows: Vec<Vec<bool>>) -> (Vec<Instance>, HypothesisSpace) {
    let domain = common::atoms(n);
    let space = HypothesisSpace::finite(domain.clone(), rows.into_iter().map(Labeling).collect()).unwrap();
    (domain, space)
}

proptest! {
    #[test]
    fn subsets_of_shattered_sets_are_shattered((n, rows) in arb_class()) {
        let (domain, space) = build(n, rows);
        let v = vc_dimension(&space, &domain, n).unwrap();
        for drop in 0..v.witness.len() {
            let mut sub = v.witness.clone();
            sub.remove(drop);
            if !sub.is_empty() {
                prop_assert!(shatters(&space, &sub).unwrap().is_shattered());
            }
        }
    }

    #[test]
    fn vc_at_most_log_size((n, rows) in arb_class()) {
        let count = rows.len();
        let (domain, space) = build(n, rows);
        let v = vc_dimension(&space, &domain, n).unwrap();
        prop_assert_eq!(v.status, VcStatus::Exact);
        prop_assert!(1usize << v.value <= count);
    }

    #[test]
    fn sub_classes_and_restrictions_do_not_raise_vc((n, rows) in arb_class(), keep in 1usize..20) {
        let sub_rows: Vec<Vec<bool>> = rows.iter().take(keep).cloned().collect();
        let (domain, space) = build(n, rows);
        let (_, sub) = build(n, sub_rows);
        let full = vc_dimension(&space, &domain, n).unwrap().value;
        prop_assert!(vc_dimension(&sub, &domain, n).unwrap().value <= full);
        let half = &domain[..n.div_ceil(2)];
        prop_assert!(vc_dimension(&space, half, n).unwrap().value <= full);
    }

    #[test]
    fn growth_is_full_exactly_up_to_vc((n, rows) in arb_class()) {
        let (domain, space) = build(n, rows);
        let d = vc_dimension(&space, &domain, n).unwrap().value;
        for m in 1..=n {
            let g = growth_function(&space, m, &domain).unwrap();
            prop_assert_eq!(g.value == 1 << m, m <= d);
            prop_assert!(g.exact);
        }
    }
}
