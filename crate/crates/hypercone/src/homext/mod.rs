//! Linear functionals on discrete cones: lattice operations, extension from a
//! subwedge, and the classical Hahn–Banach theorem recovered from extension on
//! a future cone.

pub mod extend;
pub mod hahn_banach;
pub mod lp;

use num::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::cone::{ConeVec, DiscreteCone};
use crate::error::{Error, Result};
use crate::extreal::{ExtNonneg, Rational};

pub use extend::{
    extend_all, extension_step, BoundPair, Extension, ExtensionStep, ExtensionWitness,
    GeneratorValue, LowerBound, SubwedgeSpec, UpperBound, SIZE_CAP,
};
pub use hahn_banach::{hahn_banach, HahnBanach, Polyhedral};
pub use lp::{LinearProgram, LpOutcome, Relation};

/// The functional `g -> sum_i mu_i f_i g_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualVector {
    pub cone: DiscreteCone,
    pub f: ConeVec,
}

impl Serialize for DualVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mu: Vec<ExtNonneg> = self
            .cone
            .weights()
            .iter()
            .map(|m| ExtNonneg::new(m.clone()).expect("positive"))
            .collect();
        let mut st = s.serialize_struct("DualVector", 2)?;
        st.serialize_field("mu", &mu)?;
        st.serialize_field("f", &self.f)?;
        st.end()
    }
}

impl DualVector {
    pub fn new(cone: DiscreteCone, f: ConeVec) -> Result<Self> {
        cone.check(&f)?;
        Ok(DualVector { cone, f })
    }

    pub fn eval(&self, g: &ConeVec) -> ExtNonneg {
        self.cone.pairing(&self.f, g)
    }

    /// Evaluate at a nonnegative finite vector.
    pub fn eval_rational(&self, g: &[Rational]) -> ExtNonneg {
        self.eval(&ConeVec(
            g.iter()
                .map(|x| ExtNonneg::new(x.clone()).expect("nonnegative"))
                .collect(),
        ))
    }

    fn same_cone(&self, other: &Self) -> Result<()> {
        if self.cone == other.cone {
            Ok(())
        } else {
            Err(Error::Input("functionals live on different cones".into()))
        }
    }

    /// `M` with `self + M = other`, when `self <= other` pointwise.
    ///
    /// Pointwise comparison of pairings reduces to comparing the vectors, and
    /// the coordinatewise difference then represents the gap.
    pub fn gap_to(&self, other: &Self) -> Result<Option<DualVector>> {
        self.same_cone(other)?;
        if !self.f.leq(&other.f) {
            return Ok(None);
        }
        Ok(Some(DualVector {
            cone: self.cone.clone(),
            f: other.f.minus(&self.f)?,
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RkSplit {
    pub first: ConeVec,
    pub second: ConeVec,
    pub value: ExtNonneg,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RkResult {
    pub join: ExtNonneg,
    pub meet: ExtNonneg,
    /// A decomposition `v = v1 + v2` with `L1(v1) + L2(v2) = join`.
    pub join_split: RkSplit,
    pub meet_split: RkSplit,
}

fn split_by(v: &ConeVec, take_first: impl Fn(usize) -> bool) -> (ConeVec, ConeVec) {
    let (mut a, mut b) = (ConeVec::zeros(v.len()), ConeVec::zeros(v.len()));
    for (i, x) in v.coords().iter().enumerate() {
        if take_first(i) {
            a.0[i] = x.clone();
        } else {
            b.0[i] = x.clone();
        }
    }
    (a, b)
}

/// Join and meet of two pairings at `v`, with decompositions attaining them.
pub fn rk_join_meet(l1: &DualVector, l2: &DualVector, v: &ConeVec) -> Result<RkResult> {
    l1.same_cone(l2)?;
    l1.cone.check(v)?;
    let (f1, f2) = (&l1.f, &l2.f);
    let join = l1.cone.pairing(&f1.join(f2), v);
    let meet = l1.cone.pairing(&f1.meet(f2), v);
    let make = |(first, second): (ConeVec, ConeVec)| {
        let value = &l1.eval(&first) + &l2.eval(&second);
        RkSplit {
            first,
            second,
            value,
        }
    };
    let join_split = make(split_by(v, |i| f1.coords()[i] >= f2.coords()[i]));
    let meet_split = make(split_by(v, |i| f1.coords()[i] <= f2.coords()[i]));
    debug_assert_eq!(join_split.value, join);
    debug_assert_eq!(meet_split.value, meet);
    Ok(RkResult {
        join,
        meet,
        join_split,
        meet_split,
    })
}

/// Sup and inf of `L1(v1) + L2(v2)` over decompositions on a grid of the given step.
///
/// Finite coordinates split at multiples of `step` and at the endpoints; an
/// infinite coordinate tries a few splits involving `inf`.
pub fn rk_grid_oracle(
    l1: &DualVector,
    l2: &DualVector,
    v: &ConeVec,
    step: &Rational,
) -> Result<(ExtNonneg, ExtNonneg, usize)> {
    use itertools::Itertools;
    l1.same_cone(l2)?;
    l1.cone.check(v)?;
    if *step <= Rational::zero() {
        return Err(Error::Input("grid step must be positive".into()));
    }
    let per_coord: Vec<Vec<(ExtNonneg, ExtNonneg)>> = v
        .coords()
        .iter()
        .map(|x| match x.finite() {
            Some(x) => {
                let mut cuts = Vec::new();
                let mut t = Rational::zero();
                while t < *x {
                    cuts.push(t.clone());
                    t += step;
                }
                cuts.push(x.clone());
                cuts.into_iter()
                    .map(|a| {
                        (
                            ExtNonneg::new(a.clone()).expect("nonnegative"),
                            ExtNonneg::new(x - a).expect("a <= x"),
                        )
                    })
                    .collect()
            }
            None => {
                let (z, o, i) = (ExtNonneg::zero(), ExtNonneg::one(), ExtNonneg::inf());
                vec![
                    (i.clone(), z.clone()),
                    (z, i.clone()),
                    (i.clone(), i.clone()),
                    (o.clone(), i.clone()),
                    (i, o),
                ]
            }
        })
        .collect();
    let (mut sup, mut inf, mut count) = (ExtNonneg::zero(), ExtNonneg::inf(), 0usize);
    for choice in per_coord.into_iter().multi_cartesian_product() {
        let (a, b): (Vec<_>, Vec<_>) = choice.into_iter().unzip();
        let value = &l1.eval(&ConeVec(a)) + &l2.eval(&ConeVec(b));
        sup = sup.max_of(&value);
        inf = inf.min_of(&value);
        count += 1;
    }
    if count == 0 {
        inf = ExtNonneg::zero();
    }
    Ok((sup, inf, count))
}

/// Join and meet at a finite `v` computed by the simplex method, as an oracle
/// independent of the closed forms. `None` when some input is infinite.
pub fn rk_lp_oracle(
    l1: &DualVector,
    l2: &DualVector,
    v: &ConeVec,
) -> Result<Option<(Rational, Rational)>> {
    l1.same_cone(l2)?;
    l1.cone.check(v)?;
    let finite = |c: &ConeVec| {
        c.coords()
            .iter()
            .map(|x| x.finite().cloned())
            .collect::<Option<Vec<_>>>()
    };
    let (Some(f1), Some(f2), Some(v)) = (finite(&l1.f), finite(&l2.f), finite(v)) else {
        return Ok(None);
    };
    let mu = l1.cone.weights();
    let n = v.len();
    // Variables: the first part v1 of the split; v2 = v - v1.
    let solve = |sign: i64| {
        let objective = (0..n)
            .map(|i| Rational::from_integer(sign.into()) * &mu[i] * (&f1[i] - &f2[i]))
            .collect();
        let mut lp = LinearProgram::new(objective);
        for i in 0..n {
            lp.add(extend::unit(n, i), Relation::Le, v[i].clone());
        }
        let base: Rational = (0..n).map(|i| &mu[i] * &f2[i] * &v[i]).sum();
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => base + Rational::from_integer(sign.into()) * value,
            other => unreachable!("a box program is feasible and bounded: {other:?}"),
        }
    };
    Ok(Some((solve(-1), solve(1))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extreal::rat;

    fn dv(f: &[Option<u64>]) -> DualVector {
        DualVector::new(DiscreteCone::uniform(f.len()), ConeVec::from_ints(f)).unwrap()
    }

    #[test]
    fn worked_pair() {
        let (l1, l2) = (dv(&[Some(1), Some(3)]), dv(&[Some(2), Some(1)]));
        let v = ConeVec::from_ints(&[Some(1), Some(1)]);
        let r = rk_join_meet(&l1, &l2, &v).unwrap();
        assert_eq!(
            (r.join.clone(), r.meet.clone()),
            (ExtNonneg::int(5), ExtNonneg::int(2))
        );
        assert_eq!(r.join_split.first, ConeVec::from_ints(&[Some(0), Some(1)]));
        let (sup, inf, _) = rk_grid_oracle(&l1, &l2, &v, &rat(1, 8)).unwrap();
        assert_eq!((sup, inf), (r.join, r.meet));
        assert_eq!(
            rk_lp_oracle(&l1, &l2, &v).unwrap(),
            Some((rat(5, 1), rat(2, 1)))
        );
    }

    #[test]
    fn zero_vector_and_equal_functionals() {
        let l = dv(&[Some(4), None]);
        let r = rk_join_meet(&l, &l, &ConeVec::zeros(2)).unwrap();
        assert_eq!((r.join, r.meet), (ExtNonneg::zero(), ExtNonneg::zero()));
        let v = ConeVec::from_ints(&[Some(2), Some(0)]);
        let r = rk_join_meet(&l, &l, &v).unwrap();
        assert_eq!((r.join.clone(), r.meet), (l.eval(&v), l.eval(&v)));
    }

    #[test]
    fn gap_between_comparable_functionals() {
        let (small, big) = (dv(&[Some(1), Some(2)]), dv(&[Some(3), None]));
        let gap = small.gap_to(&big).unwrap().unwrap();
        assert_eq!(gap.f, ConeVec::from_ints(&[Some(2), None]));
        assert!(big.gap_to(&small).unwrap().is_none());
    }
}
