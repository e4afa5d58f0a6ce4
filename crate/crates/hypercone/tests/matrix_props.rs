mod common;

use common::close;
use hypercone::hypernorm::LpTag;
use hypercone::matrix::{matrix_dual_attain, matrix_p_norm, random_orthogonal, random_pd, random_with_spectrum, young_audit, SymMatrix};
use hypercone::{rat, Error};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tags() -> Vec<LpTag> {
    vec![
        LpTag::int(1),
        LpTag::power(rat(1, 2)).unwrap(),
        LpTag::int(-1),
        LpTag::power(rat(-1, 2)).unwrap(),
        LpTag::NegInf,
        LpTag::ZeroPlus,
        LpTag::ZeroMinus,
    ]
}

#[test]
fn diagonal_oracles() {
    let a = SymMatrix::diag(&[1.0, 4.0]);
    assert!(close(matrix_p_norm(&a, &LpTag::int(1)).unwrap(), 2.5, 1e-12));
    assert!(close(matrix_p_norm(&a, &LpTag::NegInf).unwrap(), 1.0, 1e-12));
    assert!(close(matrix_p_norm(&a, &LpTag::ZeroPlus).unwrap(), 2.0, 1e-12));
    assert!(close(matrix_p_norm(&a, &LpTag::int(-1)).unwrap(), 1.6, 1e-12));
}

#[test]
fn malformed_matrices() {
    assert_eq!(SymMatrix::new(vec![vec![1.0, 2.0], vec![0.0, 1.0]]), Err(Error::NotSymmetric));
    assert!(matches!(matrix_dual_attain(&SymMatrix::diag(&[1.0, -1.0]), &LpTag::int(-1)), Err(Error::NotPd(_))));
    assert!(SymMatrix::new(vec![]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitary_invariance(seed in any::<u64>(), d in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_pd(&mut rng, d);
        let q = random_orthogonal(&mut rng, d);
        let b = a.conjugate_by(&q);
        for tag in tags() {
            prop_assert!(close(matrix_p_norm(&a, &tag).unwrap(), matrix_p_norm(&b, &tag).unwrap(), 1e-8), "{tag}");
        }
    }

    #[test]
    fn reverse_triangle_for_matrices(seed in any::<u64>(), d in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_pd(&mut rng, d), random_pd(&mut rng, d));
        for tag in tags() {
            let lhs = matrix_p_norm(&a.add(&b), &tag).unwrap();
            let rhs = matrix_p_norm(&a, &tag).unwrap() + matrix_p_norm(&b, &tag).unwrap();
            prop_assert!(lhs >= rhs * (1.0 - 1e-9), "{tag}: {lhs} < {rhs}");
        }
    }

    #[test]
    fn trace_duality_is_attained(seed in any::<u64>(), d in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_pd(&mut rng, d);
        for tag in tags() {
            let dual = matrix_dual_attain(&a, &tag).unwrap();
            prop_assert!(dual.gap <= 1e-8, "{tag}: gap {}", dual.gap);
            prop_assert!(close(dual.norm_b, 1.0, 1e-8));
        }
    }

    #[test]
    fn young_inequality(seed in any::<u64>(), d in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_pd(&mut rng, d), random_pd(&mut rng, d));
        for tag in [LpTag::power(rat(1, 2)).unwrap(), LpTag::int(-1)] {
            let y = young_audit(&a, &b, &tag, 1e-9).unwrap();
            prop_assert!(y.holds, "{tag}: {} vs {}", y.lhs, y.rhs);
        }
    }

    #[test]
    fn norms_scale(seed in any::<u64>(), c in 0.1f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_with_spectrum(&mut rng, &[0.5, 1.0, 3.0]);
        for tag in tags() {
            prop_assert!(close(matrix_p_norm(&a.scale(c), &tag).unwrap(), c * matrix_p_norm(&a, &tag).unwrap(), 1e-9));
        }
    }
}
