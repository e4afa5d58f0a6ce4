mod common;

use common::*;
use hypercone::{rat, ExtNonneg};
use proptest::prelude::*;

#[test]
fn boundary_conventions() {
    let (zero, one, inf) = (ExtNonneg::zero(), ExtNonneg::one(), ExtNonneg::inf());
    assert_eq!(&zero * &inf, zero);
    assert_eq!(&one + &inf, inf);
    assert_eq!(inf.recip(), zero);
    assert_eq!(zero.recip(), inf);
    assert_eq!(one.eps(), zero);
    assert_eq!(inf.eps(), inf);
    assert!(ExtNonneg::int(2).pow(&rat(0, 1)).is_err());
    assert_eq!(ExtNonneg::int(4).pow(&rat(1, 2)).unwrap(), ExtNonneg::int(2));
    assert_eq!(ExtNonneg::int(4).pow(&rat(-1, 2)).unwrap(), ExtNonneg::ratio(1, 2));
    assert!(ExtNonneg::int(2).pow(&rat(1, 2)).is_err());
}

#[test]
fn text_encodings() {
    for s in ["0", "3", "1/2", "inf"] {
        let x: ExtNonneg = s.parse().unwrap();
        assert_eq!(x.to_string(), s);
    }
    assert!("-1".parse::<ExtNonneg>().is_err());
    let x: ExtNonneg = serde_json::from_str(r#"{"num": 6, "den": 4}"#).unwrap();
    assert_eq!(x, ExtNonneg::ratio(3, 2));
}

proptest! {
    #[test]
    fn addition_is_a_commutative_monoid(a in ext(), b in ext(), c in ext()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &ExtNonneg::zero(), a.clone());
        prop_assert!(a <= &a + &b);
    }

    #[test]
    fn multiplication_distributes(a in ext(), b in ext(), c in ext()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn scaling_is_linear(a in ext(), b in ext(), l in positive_rational(), m in positive_rational()) {
        prop_assert_eq!((&a + &b).scale(&l), &a.scale(&l) + &b.scale(&l));
        prop_assert_eq!(a.scale(&(&l + &m)), &a.scale(&l) + &a.scale(&m));
        prop_assert_eq!(a.scale(&l).scale(&m), a.scale(&(&l * &m)));
    }

    #[test]
    fn monus_undoes_addition(a in ext(), b in ext()) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let gap = hi.monus(&lo).unwrap();
        prop_assert_eq!(&lo + &gap, hi.clone());
        if !hi.is_inf() {
            // Below infinity the gap is unique, so it cancels.
            prop_assert_eq!(gap, hi.saturating_sub(&lo));
        }
    }

    #[test]
    fn min_and_max_form_a_distributive_lattice(a in ext(), b in ext(), c in ext()) {
        prop_assert_eq!(a.min_of(&a.max_of(&b)), a.clone());
        prop_assert_eq!(a.max_of(&a.min_of(&b)), a.clone());
        prop_assert_eq!(a.min_of(&b.max_of(&c)), a.min_of(&b).max_of(&a.min_of(&c)));
        prop_assert_eq!(&a.min_of(&b) + &a.max_of(&b), &a + &b);
    }

    #[test]
    fn json_round_trip(a in ext()) {
        let text = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<ExtNonneg>(&text).unwrap(), a.clone());
        prop_assert_eq!(a.to_string().parse::<ExtNonneg>().unwrap(), a);
    }

    #[test]
    fn rational_powers_invert(a in positive_rational()) {
        let x = ExtNonneg::new(&a * &a).unwrap();
        prop_assert_eq!(x.pow(&rat(1, 2)).unwrap(), ExtNonneg::new(a.clone()).unwrap());
        prop_assert_eq!(x.pow(&rat(-1, 1)).unwrap(), x.recip());
    }
}
