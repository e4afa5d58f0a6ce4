use hypercone::mcp::{check_mcp, equivalences_audit, pr_project_finite, pr_random_audit, InfinitePart, McpBudget, MaskTables};
use hypercone::mcp::finite::characterize;
use hypercone::poset::claim::{check_completion_claim, ClaimBudget, ClaimVerdict, FiniteIdentityClaim, FiniteSubsetsClaim, RivalEndClaim, SharedEndClaim};
use hypercone::poset::completion::compare_completions_branch;
use hypercone::poset::{compare_completions, dm_completion, fixtures, FinitePoset, Generator, Subset, WindowConfig};
use proptest::prelude::*;

/// A random poset on `0..n` generated by pairs `i < j`, so the closure is acyclic.
fn poset(max: usize) -> impl Strategy<Value = FinitePoset> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| bits[i * n + j])
                .collect();
            FinitePoset::from_pairs(n, &pairs).unwrap()
        })
    })
}

#[test]
fn cut_counts_of_standard_posets() {
    assert_eq!(dm_completion(&FinitePoset::chain(5)).cuts.len(), 5);
    assert_eq!(dm_completion(&FinitePoset::antichain(3)).cuts.len(), 5);
    assert_eq!(dm_completion(&FinitePoset::powerset(3)).cuts.len(), 8);
    // Two minimal and two maximal elements, every minimal below every maximal.
    let n = FinitePoset::from_pairs(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
    assert_eq!(dm_completion(&n).cuts.len(), 7);
}

#[test]
fn cyclic_relations_are_rejected() {
    assert!(FinitePoset::from_pairs(2, &[(0, 1), (1, 0)]).is_err());
}

#[test]
fn closure_depths_of_fixtures() {
    let cfg = WindowConfig::default();
    let double = fixtures::double_arrow().closure_suite(&Generator::Families(vec![0]), &cfg).unwrap();
    assert_eq!(double.report.iteration_count, 2);
    for depth in 1..=3 {
        let t = fixtures::tower(depth).closure_suite(&Generator::Families(vec![depth]), &cfg).unwrap();
        assert_eq!(t.report.iteration_count, depth);
    }
}

#[test]
fn four_copies_separate_the_completions() {
    let cmp = compare_completions_branch(&fixtures::four_copies(), &WindowConfig::default()).unwrap();
    assert!(cmp.ts_is_identity);
    assert!(!cmp.t_injective);
    assert!(cmp.non_injectivity_witness.is_some());
}

#[test]
fn completion_claims() {
    let budget = ClaimBudget::default();
    assert!(check_completion_claim(&FiniteSubsetsClaim, &budget).passed());
    for report in [check_completion_claim(&SharedEndClaim, &budget), check_completion_claim(&RivalEndClaim, &budget)] {
        assert!(matches!(report.verdict, ClaimVerdict::Counterexample(_)), "{}", report.name);
    }
    assert!(check_completion_claim(&FiniteIdentityClaim(FinitePoset::powerset(2)), &budget).passed());
}

#[test]
fn characterizations_agree_on_small_posets() {
    let report = equivalences_audit(3).unwrap();
    assert!(report.passed(), "{:?} {:?}", report.disagreements, report.not_monotonicity);
    assert!(report.maps > 0 && report.passing_maps > 0);
}

#[test]
fn projection_audit() {
    let report = pr_random_audit(200, 4, 3).unwrap();
    assert!(report.passed(), "{report:?}");
}

#[test]
fn infinite_part_misses_the_limit() {
    let report = check_mcp(&InfinitePart::new(2), &McpBudget::new(16)).unwrap();
    let cx = report.counterexample().expect("axis chains escape to infinity");
    assert_eq!(cx.value_at_sup, "inf");
    assert_eq!(cx.sup_of_values, "0");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn cut_completion_is_a_complete_lattice_embedding(p in poset(6)) {
        let dm = dm_completion(&p);
        prop_assert!(dm.lattice.is_complete_lattice());
        for x in 0..p.len() {
            for y in 0..p.len() {
                prop_assert_eq!(p.leq(x, y), dm.lattice.leq(dm.embedding[x], dm.embedding[y]));
            }
        }
        // Every cut is the join of the embedded elements it contains.
        for (i, cut) in dm.cuts.iter().enumerate() {
            let family: Vec<usize> = cut.iter().map(|x| dm.embedding[x]).collect();
            prop_assert_eq!(dm.join(&p, &family), i);
        }
    }

    #[test]
    fn complete_lattices_are_their_own_completion(p in poset(5)) {
        let dm = dm_completion(&p);
        if p.is_complete_lattice() {
            prop_assert_eq!(dm.cuts.len(), p.len());
        }
        if let Ok(cmp) = compare_completions(&p) {
            prop_assert!(cmp.ts_is_identity);
        }
    }

    #[test]
    fn closures_are_extensive_and_idempotent(p in poset(6), mask in any::<u64>()) {
        let a = Subset::from_mask(p.len(), mask);
        let r = p.closure_suite(&a);
        prop_assert!(a.is_subset(&r.bar));
        prop_assert!(r.down.is_subset(&r.hat));
        prop_assert!(r.bar.is_subset(&r.hat));
        let again = p.closure_suite(&r.hat);
        prop_assert_eq!(&again.hat, &r.hat);
    }

    #[test]
    fn projection_is_the_greatest_continuous_minorant(p in poset(4), t in proptest::collection::vec(0usize..4, 4)) {
        let dst = FinitePoset::powerset(2);
        let t: Vec<usize> = t.into_iter().take(p.len()).collect();
        let pr = pr_project_finite(&p, &dst, &t).unwrap();
        prop_assert!(pr.agrees());
        for x in 0..p.len() {
            prop_assert!(dst.leq(pr.projected[x], t[x]));
        }
        let ch = characterize(&MaskTables::new(&p).unwrap(), &MaskTables::new(&dst).unwrap(), &pr.projected);
        prop_assert!(ch.sup_preserving && ch.all_agree());
        let twice = pr_project_finite(&p, &dst, &pr.projected).unwrap();
        prop_assert_eq!(twice.projected, pr.projected);
    }
}
