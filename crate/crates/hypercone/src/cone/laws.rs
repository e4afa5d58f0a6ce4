use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::ConeVec;
use crate::error::{Error, Result};
use crate::extreal::{rat, ExtNonneg, Rational};

#[derive(Clone, Debug)]
pub struct LawSuiteConfig {
    pub n: usize,
    pub cases: usize,
    pub seed: u64,
}

impl Default for LawSuiteConfig {
    fn default() -> Self {
        LawSuiteConfig {
            n: 4,
            cases: 1000,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LawFailure {
    pub law: &'static str,
    pub case: usize,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub n: usize,
    pub cases: usize,
    /// How many instances of each law were evaluated.
    pub checked: BTreeMap<&'static str, usize>,
    pub failures: Vec<LawFailure>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A random coordinate: zero, infinity or a small fraction.
pub fn sample_ext(rng: &mut impl Rng) -> ExtNonneg {
    match rng.gen_range(0..8) {
        0 => ExtNonneg::zero(),
        1 => ExtNonneg::inf(),
        _ => ExtNonneg::ratio(rng.gen_range(0..13), rng.gen_range(1..4)),
    }
}

pub fn sample_vec(rng: &mut impl Rng, n: usize) -> ConeVec {
    ConeVec((0..n).map(|_| sample_ext(rng)).collect())
}

fn sample_scalar(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(0..9), rng.gen_range(1..4))
}

/// Split `s` as `w1 + w2` at random, exercising infinite coordinates on either side.
fn sample_split(rng: &mut impl Rng, s: &ConeVec) -> (ConeVec, ConeVec) {
    let mut w1 = Vec::with_capacity(s.len());
    let mut w2 = Vec::with_capacity(s.len());
    for c in s.coords() {
        let (a, b) = if c.is_inf() {
            let r = sample_ext(rng);
            match rng.gen_range(0..3) {
                0 => (ExtNonneg::inf(), r),
                1 => (r, ExtNonneg::inf()),
                _ => (ExtNonneg::inf(), ExtNonneg::inf()),
            }
        } else {
            let a = c.scale(&rat(rng.gen_range(0..5), 4));
            let b = c.monus(&a).expect("a part is below the whole");
            (a, b)
        };
        w1.push(a);
        w2.push(b);
    }
    (ConeVec(w1), ConeVec(w2))
}

/// The four pieces of a refinement of `v1 + v2 = w1 + w2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decomposition {
    pub z11: ConeVec,
    pub z12: ConeVec,
    pub z21: ConeVec,
    pub z22: ConeVec,
}

impl Decomposition {
    /// The rows reassemble `v1` and `v2`; the columns cover `w1` and `w2`
    /// up to the part at infinity of the other column.
    pub fn relations_hold(&self, v1: &ConeVec, v2: &ConeVec, w1: &ConeVec, w2: &ConeVec) -> bool {
        self.z11.add(&self.z12) == *v1
            && self.z21.add(&self.z22) == *v2
            && w1.leq(&self.z11.add(&self.z21).add(&w2.eps()))
            && w2.leq(&self.z12.add(&self.z22).add(&w1.eps()))
    }
}

/// Refine two decompositions of the same vector into a two-by-two grid.
pub fn decomposition_witness(
    v1: &ConeVec,
    v2: &ConeVec,
    w1: &ConeVec,
    w2: &ConeVec,
) -> Result<Decomposition> {
    for u in [v2, w1, w2] {
        v1.same_len(u)?;
    }
    if v1.add(v2) != w1.add(w2) {
        return Err(Error::PreconditionFailed(format!(
            "{v1} + {v2} = {} differs from {w1} + {w2} = {}",
            v1.add(v2),
            w1.add(w2)
        )));
    }
    let z11 = v1.meet(w1);
    let z22 = v2.meet(w2);
    let z12 = v1.minus(&z11)?;
    let z21 = v2.minus(&z22)?;
    let d = Decomposition { z11, z12, z21, z22 };
    assert!(
        d.relations_hold(v1, v2, w1, w2),
        "refinement relations fail for {v1} {v2} {w1} {w2}"
    );
    Ok(d)
}

/// The largest `z` with `w <= z <= w + v/n` for every `n`, found one coordinate at a time.
fn squeeze_max(w: &ConeVec, v: &ConeVec) -> ConeVec {
    ConeVec(
        w.coords()
            .iter()
            .zip(v.coords())
            .map(|(a, b)| {
                if a.is_inf() || b.is_inf() {
                    ExtNonneg::inf()
                } else {
                    a.clone()
                }
            })
            .collect(),
    )
}

fn squeeze_bounds_hold(z: &ConeVec, w: &ConeVec, v: &ConeVec) -> bool {
    w.leq(z) && (1..=64).all(|n| z.leq(&w.add(&v.scale(&rat(1, n)))))
}

/// Nudging any finite coordinate of `z` upward breaks some upper bound `w + v/n`.
fn squeeze_is_maximal(z: &ConeVec, w: &ConeVec, v: &ConeVec) -> bool {
    let delta = rat(1, 1000);
    (0..z.len()).all(|i| {
        let Some(zi) = z.coords()[i].finite() else {
            return true;
        };
        let bumped = ExtNonneg::new(zi + &delta).expect("nonnegative");
        let vi = v.coords()[i]
            .finite()
            .expect("finite z forces finite v")
            .clone();
        let n = (vi * Rational::from_integer(1000.into()))
            .ceil()
            .to_integer()
            + 1;
        let bound = &w.coords()[i] + &v.coords()[i].scale(&Rational::new(1.into(), n));
        bumped > bound
    })
}

struct Case {
    index: usize,
    checked: BTreeMap<&'static str, usize>,
    failures: Vec<LawFailure>,
}

impl Case {
    fn check(&mut self, law: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        *self.checked.entry(law).or_default() += 1;
        if !ok {
            self.failures.push(LawFailure {
                law,
                case: self.index,
                detail: detail(),
            });
        }
    }
}

fn run_case(index: usize, cfg: &LawSuiteConfig) -> Case {
    let mut rng =
        ChaCha8Rng::seed_from_u64(cfg.seed ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let n = cfg.n;
    let mut c = Case {
        index,
        checked: BTreeMap::new(),
        failures: Vec::new(),
    };
    let [x, y, z, v, w, a, b] = std::array::from_fn(|_| sample_vec(&mut rng, n));
    let family: Vec<ConeVec> = (0..rng.gen_range(1..5))
        .map(|_| sample_vec(&mut rng, n))
        .collect();
    let (lambda, eta) = (sample_scalar(&mut rng), sample_scalar(&mut rng));
    let zero = ConeVec::zeros(n);

    c.check("sum_commutative", x.add(&y) == y.add(&x), || {
        format!("{x} {y}")
    });
    c.check(
        "sum_associative",
        x.add(&y).add(&z) == x.add(&y.add(&z)),
        || format!("{x} {y} {z}"),
    );
    c.check("sum_identity", x.add(&zero) == x, || format!("{x}"));
    c.check(
        "scalar_compose",
        x.scale(&eta).scale(&lambda) == x.scale(&(&lambda * &eta)),
        || format!("{x}"),
    );
    c.check("scalar_zero", x.scale(&rat(0, 1)) == zero, || {
        format!("{x}")
    });
    c.check("scalar_one", x.scale(&rat(1, 1)) == x, || format!("{x}"));
    c.check(
        "scalar_distributes_over_scalars",
        x.scale(&(&lambda + &eta)) == x.scale(&lambda).add(&x.scale(&eta)),
        || format!("{x} {lambda} {eta}"),
    );
    c.check(
        "scalar_distributes_over_sums",
        x.add(&y).scale(&lambda) == x.scale(&lambda).add(&y.scale(&lambda)),
        || format!("{x} {y} {lambda}"),
    );
    let sup_a = ConeVec::sup_of(n, &family);
    let inf_a = ConeVec::inf_of(n, &family);
    let scaled: Vec<_> = family.iter().map(|u| u.scale(&lambda)).collect();
    c.check(
        "sup_commutes_with_scaling",
        ConeVec::sup_of(n, &scaled) == sup_a.scale(&lambda),
        || format!("{family:?} {lambda}"),
    );
    let shifted: Vec<_> = family.iter().map(|u| v.add(u)).collect();
    c.check(
        "sup_commutes_with_translation",
        ConeVec::sup_of(n, &shifted) == v.add(&sup_a),
        || format!("{family:?} {v}"),
    );
    c.check(
        "inf_commutes_with_translation",
        ConeVec::inf_of(n, &shifted) == v.add(&inf_a),
        || format!("{family:?} {v}"),
    );

    c.check(
        "distributivity_i",
        x.add(&y).meet(&z).leq(&x.meet(&z).add(&y.meet(&z))),
        || format!("{x} {y} {z}"),
    );
    c.check(
        "modularity",
        x.add(&y) == x.join(&y).add(&x.meet(&y)),
        || format!("{x} {y}"),
    );
    let lower = ConeVec::sup_of(
        n,
        family.iter().map(|u| u.meet(&y)).collect::<Vec<_>>().iter(),
    );
    let middle = sup_a.meet(&y);
    let upper = lower.add(&y.join(&sup_a).eps());
    c.check(
        "distributivity_ii",
        lower.leq(&middle) && middle.leq(&upper),
        || format!("{family:?} {y}"),
    );
    c.check(
        "eps_additive",
        v.add(&w).eps() == v.eps().add(&w.eps()),
        || format!("{v} {w}"),
    );

    let lhs = a.add(&v).leq(&b.add(&v));
    let shrunk = (1..=12).chain([100, 10_000]).all(|k| {
        let vk = v.scale(&rat(1, k));
        a.add(&vk).leq(&b.add(&vk))
    });
    c.check("cancellation_shrinking", lhs == shrunk, || {
        format!("a={a} b={b} v={v}")
    });
    let with_eps = a.add(&v.eps()).leq(&b.add(&v.eps()));
    c.check("cancellation_eps", lhs == with_eps, || {
        format!("a={a} b={b} v={v}")
    });

    let squeezed = squeeze_max(&w, &v);
    c.check(
        "squeeze_maximum",
        squeezed == w.add(&w.add(&v).eps())
            && squeeze_bounds_hold(&squeezed, &w, &v)
            && squeeze_is_maximal(&squeezed, &w, &v),
        || format!("w={w} v={v}"),
    );

    let above = v.add(&x);
    let diff = above.minus(&v).expect("v <= v + x");
    c.check("eps_of_difference", diff.eps() == above.eps(), || {
        format!("{v} {above}")
    });
    c.check(
        "difference_is_maximal",
        v.add(&diff) == above && x.leq(&diff),
        || format!("{v} {x}"),
    );
    let (v1, v2) = (y.clone(), z.clone());
    let (w1, w2) = (v1.add(&a), v2.add(&b));
    let lhs = w1
        .minus(&v1)
        .unwrap()
        .scale(&lambda)
        .add(&w2.minus(&v2).unwrap().scale(&eta));
    let rhs = w1
        .scale(&lambda)
        .add(&w2.scale(&eta))
        .minus(&v1.scale(&lambda).add(&v2.scale(&eta)))
        .unwrap();
    c.check("difference_linear", lhs == rhs, || {
        format!("{v1} {w1} {v2} {w2} {lambda} {eta}")
    });

    let (p1, p2) = sample_split(&mut rng, &x.add(&y));
    let ok = decomposition_witness(&x, &y, &p1, &p2).map(|d| d.relations_hold(&x, &y, &p1, &p2));
    c.check("decomposition", ok == Ok(true), || {
        format!("{x}+{y} = {p1}+{p2}")
    });
    c
}

/// Evaluate every algebraic law on `cases` random samples in `[0, inf]^n`.
pub fn lattice_law_suite(cfg: &LawSuiteConfig) -> LawReport {
    let cases: Vec<Case> = (0..cfg.cases)
        .into_par_iter()
        .map(|i| run_case(i, cfg))
        .collect();
    let mut checked = BTreeMap::new();
    let mut failures = Vec::new();
    for case in cases {
        for (k, v) in case.checked {
            *checked.entry(k).or_default() += v;
        }
        failures.extend(case.failures);
    }
    LawReport {
        n: cfg.n,
        cases: cfg.cases,
        checked,
        failures,
    }
}
