mod common;

use common::*;
use hypercone::cone::{ConeVec, DiscreteCone};
use hypercone::hypernorm::{bidual_audit, dual_attain, lp_mcp_counterexample, lp_norm, probability, BidualVerdict, LpTag};
use hypercone::{rat, Error, ExtNonneg};
use proptest::prelude::*;

fn tags() -> impl Strategy<Value = LpTag> {
    prop_oneof![
        Just(LpTag::int(1)),
        Just(LpTag::power(rat(1, 2)).unwrap()),
        Just(LpTag::power(rat(1, 3)).unwrap()),
        Just(LpTag::int(-1)),
        Just(LpTag::power(rat(-1, 2)).unwrap()),
        Just(LpTag::int(-2)),
        Just(LpTag::NegInf),
        Just(LpTag::ZeroPlus),
    ]
}

fn norm(cone: &DiscreteCone, f: &ConeVec, tag: &LpTag) -> f64 {
    lp_norm(cone, f, tag).unwrap().value
}

#[test]
fn oracle_values() {
    let cone = probability(&[1, 1, 1]).unwrap();
    let f = ConeVec::from_ints(&[Some(3), Some(1), Some(2)]);
    assert_eq!(lp_norm(&cone, &f, &LpTag::NegInf).unwrap().exact, Some(ExtNonneg::int(1)));
    assert_eq!(lp_norm(&cone, &f, &LpTag::int(1)).unwrap().exact, Some(ExtNonneg::int(2)));
    // Harmonic mean of 3, 1, 2.
    assert_eq!(lp_norm(&cone, &f, &LpTag::int(-1)).unwrap().exact, Some(ExtNonneg::ratio(18, 11)));
    // Geometric mean.
    assert!(close(norm(&cone, &f, &LpTag::ZeroPlus), 6f64.powf(1.0 / 3.0), 1e-12));
    let g = ConeVec::from_ints(&[Some(4), Some(1), Some(4)]);
    assert_eq!(lp_norm(&cone, &g, &LpTag::power(rat(1, 2)).unwrap()).unwrap().exact, Some(ExtNonneg::new(rat(25, 9)).unwrap()));
}

#[test]
fn logarithmic_tags_need_probability_weights() {
    let cone = DiscreteCone::uniform(2);
    let f = ConeVec::from_ints(&[Some(1), Some(2)]);
    assert!(matches!(lp_norm(&cone, &f, &LpTag::ZeroMinus), Err(Error::NotProbability(_))));
    assert!(lp_norm(&cone, &f, &LpTag::int(-1)).is_ok());
}

#[test]
fn zero_coordinates_for_negative_exponents() {
    let cone = probability(&[1, 1]).unwrap();
    let f = ConeVec::from_ints(&[Some(0), Some(5)]);
    assert_eq!(lp_norm(&cone, &f, &LpTag::int(-1)).unwrap().exact, Some(ExtNonneg::zero()));
    let g = ConeVec::from_ints(&[None, Some(4)]);
    assert_eq!(lp_norm(&cone, &g, &LpTag::int(-1)).unwrap().exact, Some(ExtNonneg::int(8)));
}

#[test]
fn the_window_family_breaks_continuity() {
    for tag in [LpTag::int(-1), LpTag::int(-2), LpTag::NegInf] {
        // Proper indicators have norm zero, the full indicator norm one.
        let norms = lp_mcp_counterexample(6, &tag);
        assert_eq!(norms, [0.0, 0.0, 0.0, 0.0, 0.0, 1.0], "{tag}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn superadditive(mu in probability_weights(3), f in positive_vec(3), g in positive_vec(3), tag in tags()) {
        let cone = probability(&mu).unwrap();
        let lhs = norm(&cone, &f.add(&g), &tag);
        let rhs = norm(&cone, &f, &tag) + norm(&cone, &g, &tag);
        prop_assert!(lhs >= rhs * (1.0 - 1e-12), "{lhs} < {rhs}");
    }

    #[test]
    fn positively_homogeneous(mu in probability_weights(3), f in positive_vec(3), l in positive_rational(), tag in tags()) {
        let cone = probability(&mu).unwrap();
        let scaled = norm(&cone, &f.scale(&l), &tag);
        let l = num::ToPrimitive::to_f64(&l).unwrap();
        prop_assert!(close(scaled, l * norm(&cone, &f, &tag), 1e-12));
    }

    #[test]
    fn monotone_in_the_vector(mu in probability_weights(3), f in cone_vec(3), g in cone_vec(3), tag in tags()) {
        let cone = probability(&mu).unwrap();
        let (lo, hi) = (f.meet(&g), f.join(&g));
        prop_assert!(norm(&cone, &lo, &tag) <= norm(&cone, &hi, &tag) * (1.0 + 1e-12));
    }

    #[test]
    fn increasing_in_the_exponent(mu in probability_weights(4), f in positive_vec(4)) {
        let cone = probability(&mu).unwrap();
        let ladder = [LpTag::NegInf, LpTag::int(-2), LpTag::int(-1), LpTag::ZeroPlus, LpTag::power(rat(1, 2)).unwrap(), LpTag::int(1)];
        let values: Vec<f64> = ladder.iter().map(|t| norm(&cone, &f, t)).collect();
        for w in values.windows(2) {
            prop_assert!(w[0] <= w[1] * (1.0 + 1e-12), "{values:?}");
        }
    }

    #[test]
    fn dual_is_attained_and_bidual_matches(mu in probability_weights(3), f in positive_vec(3), tag in tags()) {
        let cone = probability(&mu).unwrap();
        let d = dual_attain(&cone, &f, &tag).unwrap();
        prop_assert!(d.gap <= 1e-9, "gap {}", d.gap);
        prop_assert!(close(d.norm_g, 1.0, 1e-9));
        let b = bidual_audit(&cone, &f, &tag).unwrap();
        if !matches!(tag, LpTag::Power(ref p) if *p < rat(0, 1)) && tag != LpTag::NegInf {
            prop_assert_eq!(b.verdict, BidualVerdict::Equal);
        }
    }

    #[test]
    fn reverse_hoelder(mu in probability_weights(3), f in positive_vec(3), g in positive_vec(3), tag in tags()) {
        let cone = probability(&mu).unwrap();
        let pairing = cone.pairing(&f, &g).to_f64();
        let product = norm(&cone, &f, &tag) * norm(&cone, &g, &tag.conjugate());
        prop_assert!(pairing >= product * (1.0 - 1e-12), "{pairing} < {product}");
    }
}

fn probability_weights(n: usize) -> impl Strategy<Value = Vec<i64>> {
    common::probability(n)
}
