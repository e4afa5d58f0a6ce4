mod common;

use common::close;
use hypercone::lorentz::{
    classify_directed, completeness_pair, lorentz_norm, positive_functional_audit, pythagorean_directions, reverse_triangle_audit, tri_dual, tri_norm,
    BanachNorm, CausalPoint, Detection, Limit, RaySequence, TriangleNorm,
};
use hypercone::{rat, Error};
use proptest::prelude::*;

fn norms() -> impl Strategy<Value = BanachNorm> {
    prop_oneof![Just(BanachNorm::L1), Just(BanachNorm::L2), Just(BanachNorm::LInf)]
}

fn point() -> impl Strategy<Value = CausalPoint> {
    (-6i64..6, proptest::collection::vec(-4i64..4, 2)).prop_map(|(t, v)| CausalPoint::ints(t, &v))
}

/// A point of the triangle `0 <= x <= t`.
fn triangle_point() -> impl Strategy<Value = (f64, f64)> {
    (0.01f64..10.0, 0.0f64..=1.0).prop_map(|(t, r)| (t, t * r))
}

#[test]
fn closed_form_triangle_norms() {
    let two = TriangleNorm::lp(2.0).unwrap();
    assert!(close(tri_norm(&two, 5.0, 3.0).unwrap(), 4.0, 1e-12));
    assert_eq!(tri_norm(&two, 1.0, 2.0), Err(Error::OutsideTriangle(1.0, 2.0)));
    assert!(close(tri_dual(&two, 3.0, 1.0, 256).unwrap(), 8f64.sqrt(), 1e-9));
    assert!(TriangleNorm::lp(0.5).is_err());
    assert_eq!(lorentz_norm(BanachNorm::L2, &two, 1.0, &[3.0, 4.0]), Err(Error::NotCausal));
}

#[test]
fn classifier_on_the_three_families() {
    let det = Detection::default();
    let constant = RaySequence::Constant { point: CausalPoint::ints(1, &[0]) };
    assert_eq!(classify_directed(&constant, &det).unwrap().limit, Limit::Point(CausalPoint::ints(1, &[0])));
    let timelike = RaySequence::Ray { base: CausalPoint::ints(0, &[0]), time_rate: rat(2, 1), space_rate: rat(1, 1), direction: vec![rat(1, 1)] };
    assert_eq!(classify_directed(&timelike, &det).unwrap().limit, Limit::TimeInfinity);
    let null = RaySequence::Ray { base: CausalPoint::ints(1, &[0]), time_rate: rat(1, 1), space_rate: rat(1, 1), direction: vec![rat(1, 1)] };
    assert!(matches!(classify_directed(&null, &det).unwrap().limit, Limit::NullInfinity { .. }));
    assert_eq!(pythagorean_directions().len() % 4, 0);
}

#[test]
fn geometric_chain_reaches_its_supremum() {
    let dirs = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]];
    let pair = completeness_pair(&[rat(0, 1), rat(0, 1)], &rat(1, 2), &dirs, BanachNorm::L1, 12).unwrap();
    assert!(pair.chain_increasing && pair.sup_is_upper_bound);
    assert!(pair.residual.0 < 1e-3);
}

#[test]
fn reverse_triangle_audits() {
    for banach in [BanachNorm::L1, BanachNorm::L2, BanachNorm::LInf] {
        for p in [1.0, 2.0, 3.0, f64::INFINITY] {
            let r = reverse_triangle_audit(banach, &TriangleNorm::lp(p).unwrap(), 3, 200, 1e-9, 5).unwrap();
            assert_eq!(r.failures, 0, "{banach:?} p={p}");
        }
    }
}

proptest! {
    #[test]
    fn causal_order_is_a_partial_order(a in point(), b in point(), c in point(), norm in norms()) {
        prop_assert!(a.leq(&a, norm));
        if a.leq(&b, norm) && b.leq(&a, norm) {
            prop_assert_eq!(&a, &b);
        }
        if a.leq(&b, norm) && b.leq(&c, norm) {
            prop_assert!(a.leq(&c, norm));
        }
    }

    #[test]
    fn triangle_norms_are_reverse_subadditive((t1, x1) in triangle_point(), (t2, x2) in triangle_point(), p in prop_oneof![Just(1.0), Just(1.5), Just(2.0), Just(4.0), Just(f64::INFINITY)]) {
        let n = TriangleNorm::lp(p).unwrap();
        let lhs = tri_norm(&n, t1 + t2, x1 + x2).unwrap();
        let rhs = tri_norm(&n, t1, x1).unwrap() + tri_norm(&n, t2, x2).unwrap();
        prop_assert!(lhs >= rhs - 1e-9 * (1.0 + lhs), "{lhs} < {rhs}");
    }

    #[test]
    fn lp_pairs_with_its_conjugate((t, x) in triangle_point(), (s, y) in triangle_point(), p in prop_oneof![Just(1.0), Just(1.5), Just(2.0), Just(3.0)]) {
        // Reverse Hoelder on the triangle: t s - x y >= |(t, x)|_p |(s, y)|_q.
        let n = TriangleNorm::lp(p).unwrap();
        let q = n.conjugate().unwrap();
        let lhs = t * s - x * y;
        let rhs = tri_norm(&n, t, x).unwrap() * tri_norm(&q, s, y).unwrap();
        prop_assert!(lhs >= rhs - 1e-9 * (1.0 + lhs.abs()));
        let dual = tri_dual(&n, s, y, 256).unwrap();
        prop_assert!(close(dual, tri_norm(&q, s, y).unwrap(), 1e-6));
    }

    #[test]
    fn positive_functionals_match_the_dual_bound(s in 0.1f64..4.0, m in proptest::collection::vec(-3.0f64..3.0, 2), norm in norms(), seed in any::<u64>()) {
        let r = positive_functional_audit(s, &m, norm, 64, seed);
        prop_assert!(r.agree);
        prop_assert_eq!(r.bounded, r.dual_norm <= s);
    }
}
