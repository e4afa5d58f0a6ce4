//! The chronological relation `v << w` of a weighted `L^p` cone, the basic
//! open sets it generates, and the diamond-shrink step behind the
//! order-theoretic Baire theorem.
//!
//! `v << w` means `w = v + z` for some `z` of positive norm. Among all such
//! increments the largest one is `w - v` with `inf` placed wherever `v` is
//! already infinite, and every norm here is monotone, so testing that single
//! increment decides the relation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cone::laws::sample_vec;
use crate::cone::{ConeVec, DiscreteCone};
use crate::error::{Error, Result};
use crate::extreal::{rat, ExtNonneg, Rational};
use crate::hypernorm::{lp_norm, LpTag};

/// A weighted cone together with the norm that induces `<<`.
#[derive(Clone, Debug)]
pub struct ChronInstance {
    pub cone: DiscreteCone,
    pub tag: LpTag,
}

impl ChronInstance {
    pub fn new(cone: DiscreteCone, tag: LpTag) -> Self {
        ChronInstance { cone, tag }
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    /// The largest `z` with `v + z = w`.
    pub fn max_increment(&self, v: &ConeVec, w: &ConeVec) -> Result<ConeVec> {
        let z = w.minus(v)?;
        Ok(ConeVec(
            z.0.into_iter()
                .zip(v.coords())
                .map(|(zi, vi)| if vi.is_inf() { ExtNonneg::inf() } else { zi })
                .collect(),
        ))
    }

    /// Decide `v << w`. Fails with `NotComparable` unless `v <= w`.
    pub fn way_below(&self, v: &ConeVec, w: &ConeVec) -> Result<bool> {
        self.cone.check(v)?;
        self.cone.check(w)?;
        let z = self.max_increment(v, w)?;
        let norm = lp_norm(&self.cone, &z, &self.tag)?;
        Ok(match norm.exact {
            Some(x) => !x.is_zero(),
            None => norm.value > 0.0,
        })
    }

    /// Like [`Self::way_below`] but `false` for incomparable pairs.
    pub fn below(&self, v: &ConeVec, w: &ConeVec) -> Result<bool> {
        if !v.leq(w) {
            self.cone.check(v)?;
            self.cone.check(w)?;
            return Ok(false);
        }
        self.way_below(v, w)
    }

    /// Membership in `U((v_i); (w_j))`.
    pub fn in_open(&self, spec: &BasicOpenSpec, x: &ConeVec) -> Result<bool> {
        for v in &spec.lower {
            if !self.below(v, x)? {
                return Ok(false);
            }
        }
        for w in &spec.upper {
            if !self.below(x, w)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Decide `v << w` for the given instance.
pub fn chron_rel(inst: &ChronInstance, v: &ConeVec, w: &ConeVec) -> Result<bool> {
    inst.way_below(v, w)
}

/// The basic open set `{x : v_i << x for all i, x << w_j for all j}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasicOpenSpec {
    pub dim: usize,
    #[serde(default)]
    pub lower: Vec<ConeVec>,
    #[serde(default)]
    pub upper: Vec<ConeVec>,
}

impl BasicOpenSpec {
    pub fn new(dim: usize, lower: Vec<ConeVec>, upper: Vec<ConeVec>) -> Result<Self> {
        let spec = BasicOpenSpec { dim, lower, upper };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(bad) = self
            .lower
            .iter()
            .chain(&self.upper)
            .find(|v| v.len() != self.dim)
        {
            return Err(Error::Dimension {
                expected: self.dim,
                found: bad.len(),
            });
        }
        Ok(())
    }

    /// `sup_i v_i`, which is `0` for an empty family.
    pub fn lower_sup(&self) -> ConeVec {
        ConeVec::sup_of(self.dim, &self.lower)
    }

    /// `inf_j w_j`, which is `inf` for an empty family.
    pub fn upper_inf(&self) -> ConeVec {
        ConeVec::inf_of(self.dim, &self.upper)
    }
}

/// Exact checks made by one shrink step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShrinkCertificate {
    /// Every `v_i << v_bar`.
    pub lower_way_below: bool,
    /// Every `w_bar << w_j`.
    pub upper_way_below: bool,
    /// `sup_i v~_i = v_bar`.
    pub sup_matches: bool,
    /// `inf_j w~_j <= w_bar`.
    pub inf_below: bool,
    /// `inf_j w~_j + z/3 = w`.
    pub padded_identity: bool,
    /// `(v + w)/2` lies in the shrunken open set.
    pub midpoint_inside: bool,
    /// The shrunken open set lies inside the diamond `[v_bar, w_bar]`.
    pub nested: bool,
}

impl ShrinkCertificate {
    pub fn holds(&self) -> bool {
        self.lower_way_below
            && self.upper_way_below
            && self.sup_matches
            && self.inf_below
            && self.padded_identity
            && self.midpoint_inside
            && self.nested
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShrinkStep {
    pub v: ConeVec,
    pub w: ConeVec,
    pub v_bar: ConeVec,
    pub w_bar: ConeVec,
    pub midpoint: ConeVec,
    pub shrunk: BasicOpenSpec,
    pub certificate: ShrinkCertificate,
}

/// One shrink step: a diamond `[v_bar, w_bar]` inside `U(spec)` together with
/// a nonempty basic open set inside that diamond.
///
/// A supplied witness must lie in `U(spec)`. Without one, nonemptiness is
/// decided by `v_i << inf w` and `sup v << w_j`, which hold exactly when the
/// set is nonempty.
pub fn diamond_shrink(
    inst: &ChronInstance,
    spec: &BasicOpenSpec,
    witness: Option<&ConeVec>,
) -> Result<ShrinkStep> {
    spec.validate()?;
    if spec.dim != inst.dim() {
        return Err(Error::Dimension {
            expected: inst.dim(),
            found: spec.dim,
        });
    }
    if let Some(x) = witness {
        if !inst.in_open(spec, x)? {
            return Err(Error::EmptyOpen);
        }
    }
    let v = spec.lower_sup();
    let w = spec.upper_inf();
    for vi in &spec.lower {
        if !inst.below(vi, &w)? {
            return Err(Error::EmptyOpen);
        }
    }
    for wj in &spec.upper {
        if !inst.below(&v, wj)? {
            return Err(Error::EmptyOpen);
        }
    }

    let z = w.minus(&v)?;
    let third = z.scale(&rat(1, 3));
    let v_bar = v.add(&third);
    let w_bar = v.add(&z.scale(&rat(2, 3)));
    let lower: Vec<ConeVec> = spec.lower.iter().map(|vi| vi.add(&third)).collect();
    let upper = spec
        .upper
        .iter()
        .map(|wj| wj.minus(&third))
        .collect::<Result<Vec<_>>>()?;
    let shrunk = BasicOpenSpec {
        dim: spec.dim,
        lower,
        upper,
    };
    let midpoint = v.add(&w).scale(&rat(1, 2));

    let mut lower_way_below = true;
    for vi in &spec.lower {
        lower_way_below &= inst.below(vi, &v_bar)?;
    }
    let mut upper_way_below = true;
    for wj in &spec.upper {
        upper_way_below &= inst.below(&w_bar, wj)?;
    }
    let tilde_sup = shrunk.lower_sup();
    let tilde_inf = shrunk.upper_inf();
    let certificate = ShrinkCertificate {
        lower_way_below,
        upper_way_below,
        sup_matches: tilde_sup == v_bar,
        inf_below: tilde_inf.leq(&w_bar),
        padded_identity: tilde_inf.add(&third) == w,
        midpoint_inside: inst.in_open(&shrunk, &midpoint)?,
        nested: v_bar.leq(&tilde_sup) && tilde_inf.leq(&w_bar),
    };
    Ok(ShrinkStep {
        v,
        w,
        v_bar,
        w_bar,
        midpoint,
        shrunk,
        certificate,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ShrinkChain {
    pub steps: Vec<ShrinkStep>,
    /// Each diamond contains the next one.
    pub diamonds_nested: bool,
    /// `sup_n v_bar^(n)`.
    pub common_point: ConeVec,
    /// The common point lies in every diamond.
    pub common_in_all: bool,
    /// The first midpoint lies in every diamond.
    pub first_midpoint_in_all: bool,
}

impl ShrinkChain {
    pub fn certified(&self) -> bool {
        self.diamonds_nested
            && self.common_in_all
            && self.steps.iter().all(|s| s.certificate.holds())
    }
}

/// Apply [`diamond_shrink`] repeatedly, each time to the shrunken set.
pub fn iterate_shrink(
    inst: &ChronInstance,
    spec: &BasicOpenSpec,
    iters: usize,
) -> Result<ShrinkChain> {
    let mut steps: Vec<ShrinkStep> = Vec::with_capacity(iters);
    let mut current = spec.clone();
    for _ in 0..iters {
        let step = diamond_shrink(inst, &current, None)?;
        current = step.shrunk.clone();
        steps.push(step);
    }
    let diamonds_nested = steps
        .windows(2)
        .all(|p| p[0].v_bar.leq(&p[1].v_bar) && p[1].w_bar.leq(&p[0].w_bar));
    let common_point = ConeVec::sup_of(spec.dim, steps.iter().map(|s| &s.v_bar));
    let inside = |x: &ConeVec| steps.iter().all(|s| s.v_bar.leq(x) && x.leq(&s.w_bar));
    let common_in_all = inside(&common_point);
    let first_midpoint_in_all = steps.first().map_or(true, |s| inside(&s.midpoint));
    Ok(ShrinkChain {
        steps,
        diamonds_nested,
        common_point,
        common_in_all,
        first_midpoint_in_all,
    })
}

/// A random nonempty basic open set: lower points below a base point and
/// upper points above a strictly larger one.
pub fn random_open_spec(
    inst: &ChronInstance,
    rng: &mut impl Rng,
    lower: usize,
    upper: usize,
) -> Result<BasicOpenSpec> {
    let n = inst.dim();
    for _ in 0..256 {
        let base = sample_vec(rng, n);
        let gap = ConeVec(
            (0..n)
                .map(|_| ExtNonneg::ratio(rng.gen_range(1..9), rng.gen_range(1..4)))
                .collect(),
        );
        let top = base.add(&gap);
        let lows: Vec<ConeVec> = (0..lower)
            .map(|_| {
                let drop = sample_vec(rng, n);
                ConeVec(
                    base.coords()
                        .iter()
                        .zip(drop.coords())
                        .map(|(b, d)| b.saturating_sub(d))
                        .collect(),
                )
            })
            .collect();
        let highs: Vec<ConeVec> = (0..upper).map(|_| top.add(&sample_vec(rng, n))).collect();
        let spec = BasicOpenSpec {
            dim: n,
            lower: lows,
            upper: highs,
        };
        let mid = base.add(&gap.scale(&rat(1, 2)));
        if inst.in_open(&spec, &mid)? {
            return Ok(spec);
        }
    }
    Err(Error::BudgetExceeded(
        "no nonempty random open set found".into(),
    ))
}

/// Counts for one sampled law: how often the premise held, and failures.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LawCount {
    pub premise: usize,
    pub failures: usize,
}

impl LawCount {
    fn record(&mut self, premise: bool, conclusion: bool) {
        if premise {
            self.premise += 1;
            if !conclusion {
                self.failures += 1;
            }
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ChronLawReport {
    pub samples: usize,
    pub push_up_left: LawCount,
    pub push_up_right: LawCount,
    pub transitive: LawCount,
    pub contained_in_order: LawCount,
    pub scaling: LawCount,
    pub sum: LawCount,
    pub cancellation: LawCount,
}

impl ChronLawReport {
    fn laws(&self) -> [&LawCount; 7] {
        [
            &self.push_up_left,
            &self.push_up_right,
            &self.transitive,
            &self.contained_in_order,
            &self.scaling,
            &self.sum,
            &self.cancellation,
        ]
    }

    pub fn passed(&self) -> bool {
        self.laws().iter().all(|l| l.failures == 0)
    }

    /// Every law had its premise met at least once.
    pub fn exercised(&self) -> bool {
        self.laws().iter().all(|l| l.premise > 0)
    }
}

/// Check the calculus of `<<` on random triples.
pub fn chron_laws(inst: &ChronInstance, samples: usize, seed: u64) -> Result<ChronLawReport> {
    let n = inst.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ChronLawReport {
        samples,
        ..Default::default()
    };
    for _ in 0..samples {
        let v = sample_vec(&mut rng, n);
        let w = v.add(&sample_vec(&mut rng, n));
        let z = w.add(&sample_vec(&mut rng, n));
        let vw = inst.way_below(&v, &w)?;
        let wz = inst.way_below(&w, &z)?;
        let vz = inst.way_below(&v, &z)?;
        report.push_up_left.record(wz, vz);
        report.push_up_right.record(vw, vz);
        report.transitive.record(vw && wz, vz);

        let a = sample_vec(&mut rng, n);
        let b = sample_vec(&mut rng, n);
        report
            .contained_in_order
            .record(inst.below(&a, &b)?, a.leq(&b));

        let lambda = Rational::new(rng.gen_range(1..9).into(), rng.gen_range(1..5).into());
        report
            .scaling
            .record(vw, inst.way_below(&v.scale(&lambda), &w.scale(&lambda))?);

        let v2 = sample_vec(&mut rng, n);
        let w2 = v2.add(&sample_vec(&mut rng, n));
        report
            .sum
            .record(vw, inst.way_below(&v.add(&v2), &w.add(&w2))?);

        let shift = sample_vec(&mut rng, n);
        let premise = inst.way_below(&v.add(&shift), &w.add(&shift))?;
        let eps = shift.eps();
        report
            .cancellation
            .record(premise, inst.way_below(&v.add(&eps), &w.add(&eps))?);
    }
    Ok(report)
}

/// Outcome of looking for a basic open set that isolates a point of
/// `[0, inf]^2` under `||.||_p` with `0 < p < 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum SingletonOutcome {
    /// The open set built from these generators is exactly the point.
    Isolated {
        lower: Vec<ConeVec>,
        upper: Vec<ConeVec>,
    },
    /// Every basic open set around the point also contains points of the
    /// form `approach` with the positive finite coordinate lowered.
    NotIsolated { approach: ConeVec },
}

#[derive(Clone, Debug, Serialize)]
pub struct SingletonCertificate {
    pub point: ConeVec,
    pub outcome: SingletonOutcome,
}

impl SingletonCertificate {
    pub fn is_isolated(&self) -> bool {
        matches!(self.outcome, SingletonOutcome::Isolated { .. })
    }
}

fn unit(n: usize, i: usize, x: ExtNonneg) -> ConeVec {
    let mut e = ConeVec::zeros(n);
    e.0[i] = x;
    e
}

/// Decide whether `{point}` is open in the chronological topology of
/// `[0, inf]^2` with `||(a, b)||_p = (a^p + b^p)^(1/p)`.
///
/// An isolating set is certified by checking that the point lies in it and
/// that the join of its lower generators and the meet of its upper generators
/// both equal the point, which pins every member down since `g << x` forces
/// `g <= x`.
pub fn singleton_certificate(p: &Rational, point: &ConeVec) -> Result<SingletonCertificate> {
    if !(p > &rat(0, 1) && p < &rat(1, 1)) {
        return Err(Error::PreconditionFailed(format!(
            "exponent {p} is not in (0, 1)"
        )));
    }
    if point.len() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: point.len(),
        });
    }
    let inst = ChronInstance::new(DiscreteCone::uniform(2), LpTag::power(p.clone())?);
    let (lower, upper) = if inst.way_below(point, point)? {
        (vec![point.clone()], vec![point.clone()])
    } else {
        let upper: Vec<ConeVec> = (0..2)
            .map(|i| point.add(&unit(2, i, ExtNonneg::ratio(1, 1))))
            .collect();
        let lower: Vec<ConeVec> = (0..2)
            .filter(|&i| !point.coords()[i].is_zero())
            .map(|i| {
                let half = point.coords()[i].scale(&rat(1, 2));
                point
                    .minus(&unit(2, i, half))
                    .expect("half a finite coordinate")
            })
            .collect();
        (lower, upper)
    };
    let spec = BasicOpenSpec {
        dim: 2,
        lower,
        upper,
    };
    let pinned = &spec.lower_sup() == point && &spec.upper_inf() == point;
    let outcome = if pinned && inst.in_open(&spec, point)? {
        SingletonOutcome::Isolated {
            lower: spec.lower,
            upper: spec.upper,
        }
    } else {
        let i = (0..2)
            .find(|&i| !point.coords()[i].is_zero())
            .expect("a zero point is pinned");
        let half = point.coords()[i].scale(&rat(1, 2));
        SingletonOutcome::NotIsolated {
            approach: point.minus(&unit(2, i, half))?,
        }
    };
    Ok(SingletonCertificate {
        point: point.clone(),
        outcome,
    })
}

/// The certificate for the point `(1, 1)`.
pub fn chron_pathology_witness(p: &Rational) -> Result<SingletonCertificate> {
    singleton_certificate(p, &ConeVec::from_ints(&[Some(1), Some(1)]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l1(n: usize) -> ChronInstance {
        ChronInstance::new(DiscreteCone::uniform(n), LpTag::int(1))
    }

    fn cv(xs: &[Option<u64>]) -> ConeVec {
        ConeVec::from_ints(xs)
    }

    #[test]
    fn basic_relation() {
        let inst = l1(2);
        let v = cv(&[Some(2), Some(3)]);
        assert!(!chron_rel(&inst, &v, &v).unwrap());
        let top = cv(&[None, None]);
        assert!(chron_rel(&inst, &top, &top).unwrap());
        assert!(chron_rel(&inst, &cv(&[Some(0), Some(0)]), &cv(&[Some(1), Some(0)])).unwrap());
        assert!(matches!(
            chron_rel(&inst, &cv(&[Some(1), Some(0)]), &cv(&[Some(0), Some(1)])),
            Err(Error::NotComparable(_))
        ));
    }

    #[test]
    fn negative_exponent_needs_every_coordinate() {
        let inst = ChronInstance::new(DiscreteCone::uniform(2), LpTag::int(-1));
        let v = cv(&[Some(0), Some(0)]);
        assert!(!inst.way_below(&v, &cv(&[Some(1), Some(0)])).unwrap());
        assert!(inst.way_below(&v, &cv(&[Some(1), Some(1)])).unwrap());
        assert!(inst
            .way_below(&cv(&[None, Some(0)]), &cv(&[None, Some(1)]))
            .unwrap());
    }

    #[test]
    fn laws_hold() {
        for tag in [
            LpTag::int(1),
            LpTag::power(rat(1, 2)).unwrap(),
            LpTag::int(-1),
            LpTag::NegInf,
        ] {
            let inst = ChronInstance::new(DiscreteCone::uniform(3), tag);
            let r = chron_laws(&inst, 400, 3).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(r.exercised(), "{r:?}");
        }
    }

    #[test]
    fn single_shrink() {
        let inst = l1(2);
        let spec = BasicOpenSpec::new(
            2,
            vec![cv(&[Some(0), Some(0)])],
            vec![cv(&[Some(6), Some(3)])],
        )
        .unwrap();
        let step = diamond_shrink(&inst, &spec, None).unwrap();
        assert!(step.certificate.holds(), "{:?}", step.certificate);
        assert_eq!(step.v_bar, cv(&[Some(2), Some(1)]));
        assert_eq!(step.w_bar, cv(&[Some(4), Some(2)]));
        assert_eq!(
            step.midpoint,
            ConeVec(vec![ExtNonneg::ratio(3, 1), ExtNonneg::ratio(3, 2)])
        );
    }

    #[test]
    fn empty_open_rejected() {
        let inst = l1(2);
        let p = cv(&[Some(1), Some(1)]);
        let spec = BasicOpenSpec::new(2, vec![p.clone()], vec![p.clone()]).unwrap();
        assert!(matches!(
            diamond_shrink(&inst, &spec, None),
            Err(Error::EmptyOpen)
        ));
        let ok = BasicOpenSpec::new(2, vec![p.clone()], vec![]).unwrap();
        assert!(matches!(
            diamond_shrink(&inst, &ok, Some(&p)),
            Err(Error::EmptyOpen)
        ));
    }

    #[test]
    fn ten_iterations_nest() {
        let inst = ChronInstance::new(DiscreteCone::uniform(3), LpTag::power(rat(1, 2)).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let spec = random_open_spec(&inst, &mut rng, 2, 2).unwrap();
            let chain = iterate_shrink(&inst, &spec, 10).unwrap();
            assert!(chain.certified(), "{spec:?}");
            assert!(chain.first_midpoint_in_all);
        }
    }

    #[test]
    fn unbounded_above() {
        let inst = l1(2);
        let spec = BasicOpenSpec::new(2, vec![cv(&[Some(1), Some(2)])], vec![]).unwrap();
        let chain = iterate_shrink(&inst, &spec, 5).unwrap();
        assert!(chain.certified());
        assert_eq!(chain.common_point, cv(&[None, None]));
    }

    #[test]
    fn singletons() {
        let half = rat(1, 2);
        let c = chron_pathology_witness(&half).unwrap();
        assert!(c.is_isolated());
        for pt in [
            cv(&[Some(0), Some(0)]),
            cv(&[None, None]),
            cv(&[Some(0), None]),
            cv(&[Some(3), None]),
            cv(&[Some(2), Some(5)]),
        ] {
            assert!(
                singleton_certificate(&half, &pt).unwrap().is_isolated(),
                "{pt}"
            );
        }
        let edge = singleton_certificate(&half, &cv(&[Some(0), Some(4)])).unwrap();
        assert_eq!(
            edge.outcome,
            SingletonOutcome::NotIsolated {
                approach: cv(&[Some(0), Some(2)])
            }
        );
        assert!(singleton_certificate(&rat(1, 1), &cv(&[Some(1), Some(1)])).is_err());
    }
}
