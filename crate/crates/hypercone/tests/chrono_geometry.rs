mod common;

use common::*;
use hypercone::chrono::{chron_laws, chron_pathology_witness, diamond_shrink, iterate_shrink, singleton_certificate, BasicOpenSpec, ChronInstance, SingletonOutcome};
use hypercone::cone::{ConeVec, DiscreteCone};
use hypercone::geometry::{bm_audit, convex_distributes, distributivity_failure_witness, minkowski_sum, ConvexPolygon, Point};
use hypercone::hypernorm::{normalize, LpTag};
use hypercone::{rat, Error};
use proptest::prelude::*;

fn half_norm(n: usize) -> ChronInstance {
    ChronInstance::new(normalize(&DiscreteCone::uniform(n)), LpTag::power(rat(1, 2)).unwrap())
}

fn ints(xs: &[u64]) -> ConeVec {
    ConeVec::from_ints(&xs.iter().map(|&x| Some(x)).collect::<Vec<_>>())
}

#[test]
fn way_below_needs_a_positive_gap() {
    let inst = half_norm(2);
    assert!(inst.way_below(&ints(&[1, 1]), &ints(&[2, 2])).unwrap());
    // Under a positive exponent a single positive coordinate is enough.
    assert!(inst.way_below(&ints(&[1, 1]), &ints(&[2, 1])).unwrap());
    assert!(!inst.way_below(&ints(&[1, 1]), &ints(&[1, 1])).unwrap());
    assert!(matches!(inst.way_below(&ints(&[2, 0]), &ints(&[1, 1])), Err(Error::NotComparable(_))));
    let harmonic = ChronInstance::new(normalize(&DiscreteCone::uniform(2)), LpTag::int(-1));
    assert!(!harmonic.way_below(&ints(&[1, 1]), &ints(&[2, 1])).unwrap());
}

#[test]
fn shrinking_a_box_ten_times() {
    let inst = half_norm(2);
    let spec = BasicOpenSpec::new(2, vec![ints(&[1, 1])], vec![ints(&[4, 5])]).unwrap();
    let chain = iterate_shrink(&inst, &spec, 10).unwrap();
    assert!(chain.certified());
    assert_eq!(chain.steps.len(), 10);
    assert!(chain.steps.iter().all(|s| s.certificate.holds()));
}

#[test]
fn empty_open_sets_are_reported() {
    let inst = half_norm(2);
    let spec = BasicOpenSpec::new(2, vec![ints(&[3, 3])], vec![ints(&[2, 5])]).unwrap();
    assert_eq!(diamond_shrink(&inst, &spec, None).unwrap_err(), Error::EmptyOpen);
    let outside = ints(&[9, 9]);
    let ok = BasicOpenSpec::new(2, vec![ints(&[1, 1])], vec![ints(&[4, 5])]).unwrap();
    assert_eq!(diamond_shrink(&inst, &ok, Some(&outside)).unwrap_err(), Error::EmptyOpen);
}

#[test]
fn isolated_points() {
    let p = rat(1, 2);
    assert!(chron_pathology_witness(&p).unwrap().is_isolated());
    assert!(singleton_certificate(&p, &ints(&[0, 0])).unwrap().is_isolated());
    assert!(singleton_certificate(&p, &ConeVec::infs(2)).unwrap().is_isolated());
    let boundary = singleton_certificate(&p, &ints(&[0, 1])).unwrap();
    assert!(matches!(boundary.outcome, SingletonOutcome::NotIsolated { .. }));
}

#[test]
fn polygon_oracles() {
    let square = ConvexPolygon::rect(0, 0, 1, 1).unwrap();
    let tri = ConvexPolygon::hull(vec![Point::int(0, 0), Point::int(2, 0), Point::int(0, 2)]).unwrap();
    let sum = minkowski_sum(&square, &tri);
    assert_eq!(sum.vertices().len(), 5);
    assert_eq!(sum.area(), rat(7, 1));
    let v = bm_audit(&square, &square);
    assert!(v.holds && v.equality);
    let w = distributivity_failure_witness();
    assert!(w.doubled_in_sum && w.strict);
}

fn polygon() -> impl Strategy<Value = ConvexPolygon> {
    proptest::collection::vec((-6i64..6, -6i64..6), 1..8)
        .prop_map(|pts| ConvexPolygon::hull(pts.into_iter().map(|(x, y)| Point::int(x, y)).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn chronological_laws(seed in any::<u64>(), n in 1usize..4, neg in any::<bool>()) {
        let tag = if neg { LpTag::int(-1) } else { LpTag::power(rat(1, 3)).unwrap() };
        let inst = ChronInstance::new(normalize(&DiscreteCone::uniform(n)), tag);
        let report = chron_laws(&inst, 64, seed).unwrap();
        prop_assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn way_below_is_contained_in_the_order(v in cone_vec(3), w in cone_vec(3)) {
        let inst = half_norm(3);
        let (lo, hi) = (v.meet(&w), v.join(&w));
        if inst.way_below(&lo, &hi).unwrap() {
            prop_assert!(lo.leq(&hi) && lo != hi);
        }
    }

    #[test]
    fn minkowski_sum_laws(a in polygon(), b in polygon(), c in polygon()) {
        prop_assert_eq!(minkowski_sum(&a, &b), minkowski_sum(&b, &a));
        prop_assert_eq!(minkowski_sum(&minkowski_sum(&a, &b), &c), minkowski_sum(&a, &minkowski_sum(&b, &c)));
        prop_assert_eq!(minkowski_sum(&a, &ConvexPolygon::point(Point::origin())), a.clone());
    }

    #[test]
    fn brunn_minkowski(a in polygon(), b in polygon()) {
        let v = bm_audit(&a, &b);
        prop_assert!(v.holds, "{v:?}");
        prop_assert!(v.area_sum >= v.area_a.clone() + v.area_b.clone());
    }

    #[test]
    fn homothets_give_equality(a in polygon(), k in positive_rational(), dx in -5i64..5, dy in -5i64..5) {
        let b = a.scale(&k).unwrap().translate(&Point::int(dx, dy));
        prop_assert!(bm_audit(&a, &b).equality);
        prop_assert_eq!(a.scale(&k).unwrap().area(), a.area() * &k * &k);
        prop_assert!(convex_distributes(&a, &k, &rat(1, 1)).unwrap());
    }
}
