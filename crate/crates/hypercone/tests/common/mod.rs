#![allow(dead_code)]

use hypercone::cone::ConeVec;
use hypercone::{rat, ExtNonneg, Rational};
use proptest::prelude::*;

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (0i64..40, 1i64..8).prop_map(|(n, d)| rat(n, d))
}

pub fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..40, 1i64..8).prop_map(|(n, d)| rat(n, d))
}

/// Zero and infinity show up often enough to exercise the boundary rules.
pub fn ext() -> impl Strategy<Value = ExtNonneg> {
    prop_oneof![
        1 => Just(ExtNonneg::zero()),
        1 => Just(ExtNonneg::inf()),
        4 => small_rational().prop_map(|r| ExtNonneg::new(r).unwrap()),
    ]
}

pub fn finite_ext() -> impl Strategy<Value = ExtNonneg> {
    small_rational().prop_map(|r| ExtNonneg::new(r).unwrap())
}

pub fn cone_vec(n: usize) -> impl Strategy<Value = ConeVec> {
    proptest::collection::vec(ext(), n).prop_map(ConeVec)
}

pub fn finite_vec(n: usize) -> impl Strategy<Value = ConeVec> {
    proptest::collection::vec(finite_ext(), n).prop_map(ConeVec)
}

pub fn positive_vec(n: usize) -> impl Strategy<Value = ConeVec> {
    proptest::collection::vec(positive_rational().prop_map(|r| ExtNonneg::new(r).unwrap()), n).prop_map(ConeVec)
}

/// Probability weights proportional to small positive integers.
pub fn probability(n: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(1i64..6, n)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}
