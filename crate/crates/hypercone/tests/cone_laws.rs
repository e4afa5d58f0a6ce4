mod common;

use common::*;
use hypercone::cone::{cone_ops, decomposition_witness, lattice_law_suite, ConeVec, DiscreteCone, LawSuiteConfig};
use hypercone::{rat, ExtNonneg};
use proptest::prelude::*;

#[test]
fn law_suite_is_clean_in_small_dimensions() {
    for n in 1..=3 {
        let report = lattice_law_suite(&LawSuiteConfig { n, cases: 400, seed: 11 });
        assert!(report.passed(), "{:?}", report.failures);
        assert!(report.checked.values().all(|&c| c > 0));
    }
}

#[test]
fn infinite_coordinates_block_cancellation() {
    // inf + 1 = inf + 2 without 1 = 2.
    let inf = ConeVec::from_ints(&[None]);
    let (one, two) = (ConeVec::from_ints(&[Some(1)]), ConeVec::from_ints(&[Some(2)]));
    assert_eq!(inf.add(&one), inf.add(&two));
    assert_ne!(one, two);
    // The largest difference is still well defined.
    assert_eq!(inf.minus(&one).unwrap(), inf);
}

proptest! {
    #[test]
    fn join_and_meet_are_lattice_operations(a in cone_vec(3), b in cone_vec(3), c in cone_vec(3)) {
        prop_assert_eq!(a.join(&b), b.join(&a));
        prop_assert_eq!(a.meet(&b.meet(&c)), a.meet(&b).meet(&c));
        prop_assert_eq!(a.join(&a.meet(&b)), a.clone());
        prop_assert_eq!(a.meet(&a.join(&b)), a.clone());
        prop_assert_eq!(a.meet(&b.join(&c)), a.meet(&b).join(&a.meet(&c)));
        prop_assert_eq!(a.leq(&b), a.meet(&b) == a);
    }

    #[test]
    fn addition_distributes_over_the_lattice(a in cone_vec(3), b in cone_vec(3), c in cone_vec(3)) {
        prop_assert_eq!(a.add(&b.join(&c)), a.add(&b).join(&a.add(&c)));
        prop_assert_eq!(a.add(&b.meet(&c)), a.add(&b).meet(&a.add(&c)));
        prop_assert_eq!(a.join(&b).add(&a.meet(&b)), a.add(&b));
    }

    #[test]
    fn difference_reassembles(a in cone_vec(4), b in cone_vec(4)) {
        let (lo, hi) = (a.meet(&b), a.join(&b));
        let ops = cone_ops(&lo, &hi, &rat(1, 1)).unwrap();
        let d = ops.difference.expect("lo <= hi");
        prop_assert_eq!(lo.add(&d), hi.clone());
        // Any other gap lies below the largest one.
        prop_assert!(hi.minus(&lo).unwrap().leq(&d));
    }

    #[test]
    fn eps_marks_the_infinite_part(a in cone_vec(4)) {
        let e = a.eps();
        prop_assert_eq!(a.add(&e), a.clone());
        prop_assert_eq!(e.eps(), e.clone());
        prop_assert!(e.coords().iter().all(|x| x.is_zero() || x.is_inf()));
        prop_assert_eq!(a.inf_mul().eps(), a.inf_mul());
    }

    #[test]
    fn refinement_of_two_decompositions(v1 in cone_vec(3), v2 in cone_vec(3), split in cone_vec(3)) {
        // Build w1 + w2 = v1 + v2 by peeling `split` off the total.
        let total = v1.add(&v2);
        let w1 = split.meet(&total);
        let w2 = total.minus(&w1).unwrap();
        let d = decomposition_witness(&v1, &v2, &w1, &w2).unwrap();
        prop_assert!(d.relations_hold(&v1, &v2, &w1, &w2));
    }

    #[test]
    fn pairing_is_additive(mu in probability(3), f in cone_vec(3), g in cone_vec(3), h in cone_vec(3)) {
        let cone = DiscreteCone::new(mu.iter().map(|&m| rat(m, 1)).collect()).unwrap();
        prop_assert_eq!(cone.pairing(&f, &g.add(&h)), &cone.pairing(&f, &g) + &cone.pairing(&f, &h));
        prop_assert!(cone.pairing(&f, &g.meet(&h)) <= cone.pairing(&f, &g));
        prop_assert_eq!(cone.pairing(&f, &ConeVec::zeros(3)), ExtNonneg::zero());
    }
}
