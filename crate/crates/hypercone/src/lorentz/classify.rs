//! Where increasing sequences of Minkowski space `R x Q^d` (Euclidean norm) end up in
//! its directed completion: at a point, at future time infinity, or at a point
//! `(c, w)` of future null infinity.

use num::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::causal::{check_unit, BanachNorm, CausalPoint};
use crate::error::{Error, Result};
use crate::extreal::{rat, rational_serde, Rational};
use crate::poset::claim::{ClaimBudget, CompletionClaim};

/// An increasing sequence, indexed from `n = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum RaySequence {
    Constant {
        point: CausalPoint,
    },
    /// `base + n (time_rate, space_rate * direction)`, with `0 <= space_rate <= time_rate`.
    Ray {
        base: CausalPoint,
        #[serde(with = "rational_serde")]
        time_rate: Rational,
        #[serde(with = "rational_serde")]
        space_rate: Rational,
        #[serde(with = "rational_serde::vec")]
        direction: Vec<Rational>,
    },
    /// Step `i >= 1` moves by `scale * ratio^i` in time and along `directions[(i - 1) mod m]`.
    CauchyTail {
        base: CausalPoint,
        #[serde(with = "rational_serde")]
        ratio: Rational,
        #[serde(with = "rational_serde", default = "one")]
        scale: Rational,
        #[serde(with = "rational_serde::matrix")]
        directions: Vec<Vec<Rational>>,
    },
    /// Floating-point terms `(t, v)`, classified from their last increments.
    Explicit {
        points: Vec<(f64, Vec<f64>)>,
    },
}

fn one() -> Rational {
    rat(1, 1)
}

/// An element of the completion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Limit {
    Point(CausalPoint),
    TimeInfinity,
    NullInfinity {
        #[serde(with = "rational_serde")]
        c: Rational,
        #[serde(with = "rational_serde::vec")]
        w: Vec<Rational>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub limit: Limit,
    /// Read off a closed form rather than estimated from finitely many terms.
    pub exact: bool,
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RaySequence {
    pub fn dim(&self) -> usize {
        match self {
            RaySequence::Constant { point }
            | RaySequence::Ray { base: point, .. }
            | RaySequence::CauchyTail { base: point, .. } => point.v.len(),
            RaySequence::Explicit { points } => points.first().map_or(0, |p| p.1.len()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        let same_dim = |u: &[Rational]| {
            if u.len() == d {
                Ok(())
            } else {
                Err(Error::Dimension {
                    expected: d,
                    found: u.len(),
                })
            }
        };
        match self {
            RaySequence::Constant { .. } => Ok(()),
            RaySequence::Ray {
                time_rate,
                space_rate,
                direction,
                ..
            } => {
                same_dim(direction)?;
                check_unit(direction, BanachNorm::L2)?;
                if space_rate.is_negative() || space_rate > time_rate {
                    return Err(Error::NotMonotone(1));
                }
                Ok(())
            }
            RaySequence::CauchyTail {
                ratio,
                scale,
                directions,
                ..
            } => {
                if directions.is_empty() {
                    return Err(Error::Input("a Cauchy tail needs a direction".into()));
                }
                for u in directions {
                    same_dim(u)?;
                    check_unit(u, BanachNorm::L2)?;
                }
                if ratio.is_negative() || *ratio >= one() || scale.is_negative() {
                    return Err(Error::NotSummable);
                }
                Ok(())
            }
            RaySequence::Explicit { points } => {
                if let Some(p) = points.iter().find(|p| p.1.len() != d) {
                    return Err(Error::Dimension {
                        expected: d,
                        found: p.1.len(),
                    });
                }
                if points
                    .iter()
                    .any(|p| !p.0.is_finite() || p.1.iter().any(|x| !x.is_finite()))
                {
                    return Err(Error::Input("explicit terms must be finite".into()));
                }
                Ok(())
            }
        }
    }

    /// Term `n` of a closed-form family.
    pub fn term(&self, n: usize) -> Option<CausalPoint> {
        match self {
            RaySequence::Constant { point } => Some(point.clone()),
            RaySequence::Ray {
                base,
                time_rate,
                space_rate,
                direction,
            } => {
                let k = rat(n as i64, 1);
                let step = &k * space_rate;
                Some(CausalPoint::new(
                    &base.t + &k * time_rate,
                    base.v
                        .iter()
                        .zip(direction)
                        .map(|(a, u)| a + u * &step)
                        .collect(),
                ))
            }
            RaySequence::CauchyTail {
                base,
                ratio,
                scale,
                directions,
            } => {
                let mut p = base.clone();
                let mut step = scale.clone();
                for i in 1..=n {
                    step *= ratio;
                    p.t += &step;
                    p.v.iter_mut()
                        .zip(&directions[(i - 1) % directions.len()])
                        .for_each(|(a, u)| *a += u * &step);
                }
                Some(p)
            }
            RaySequence::Explicit { .. } => None,
        }
    }

    /// The same sequence with its first `m` terms dropped.
    pub fn shifted(&self, m: usize) -> RaySequence {
        match self {
            RaySequence::Constant { .. } => self.clone(),
            RaySequence::Ray {
                time_rate,
                space_rate,
                direction,
                ..
            } => RaySequence::Ray {
                base: self.term(m).expect("closed form"),
                time_rate: time_rate.clone(),
                space_rate: space_rate.clone(),
                direction: direction.clone(),
            },
            RaySequence::CauchyTail {
                ratio,
                scale,
                directions,
                ..
            } => {
                let k = directions.len();
                RaySequence::CauchyTail {
                    base: self.term(m).expect("closed form"),
                    ratio: ratio.clone(),
                    scale: scale * num::pow(ratio.clone(), m),
                    directions: (0..k).map(|j| directions[(j + m) % k].clone()).collect(),
                }
            }
            RaySequence::Explicit { points } => RaySequence::Explicit {
                points: points.iter().skip(m).cloned().collect(),
            },
        }
    }

    /// The supremum inside `R x Q^d`, when there is one.
    pub fn sup_in_space(&self) -> Option<CausalPoint> {
        match self {
            RaySequence::Constant { point } => Some(point.clone()),
            RaySequence::Ray {
                base, time_rate, ..
            } if time_rate.is_zero() => Some(base.clone()),
            RaySequence::CauchyTail {
                base,
                ratio,
                scale,
                directions,
            } => {
                let m = directions.len();
                let denom = one() - num::pow(ratio.clone(), m);
                let mut p = base.clone();
                for (j, u) in directions.iter().enumerate() {
                    let weight = scale * num::pow(ratio.clone(), j + 1) / &denom;
                    p.t += &weight;
                    p.v.iter_mut().zip(u).for_each(|(a, b)| *a += b * &weight);
                }
                Some(p)
            }
            _ => None,
        }
    }

    /// Whether `a` lies below the limit, decided from `lim_n (t_n - t_a - |v_n - v_a|) >= 0`.
    pub fn eventually_above(&self, a: &CausalPoint) -> bool {
        match self {
            RaySequence::Ray {
                base,
                time_rate,
                space_rate,
                direction,
            } if !time_rate.is_zero() => {
                if space_rate < time_rate {
                    true
                } else {
                    // |w + k u| = k + <w, u> + O(1/k) for a unit vector u.
                    let offset: Vec<Rational> =
                        base.v.iter().zip(&a.v).map(|(x, y)| x - y).collect();
                    &base.t - &a.t - dot(&offset, direction) >= Rational::zero()
                }
            }
            RaySequence::Explicit { .. } => false,
            other => a.leq(
                &other.sup_in_space().expect("bounded family"),
                BanachNorm::L2,
            ),
        }
    }
}

/// Settings for sequences without a closed form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Detection {
    pub tol: f64,
    /// Number of trailing increments examined.
    pub window: usize,
}

impl Default for Detection {
    fn default() -> Self {
        Detection {
            tol: 1e-9,
            window: 8,
        }
    }
}

fn exact_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite")
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn classify_numeric(points: &[(f64, Vec<f64>)], det: &Detection) -> Result<Classification> {
    for (i, w) in points.windows(2).enumerate() {
        let gap: Vec<f64> = w[1].1.iter().zip(&w[0].1).map(|(a, b)| a - b).collect();
        if norm2(&gap) > w[1].0 - w[0].0 + det.tol {
            return Err(Error::NotMonotone(i + 1));
        }
    }
    if points.len() <= det.window {
        return Err(Error::Inconclusive(det.window));
    }
    let tail = &points[points.len() - det.window - 1..];
    let dt: Vec<f64> = tail.windows(2).map(|w| w[1].0 - w[0].0).collect();
    let dc: Vec<f64> = tail
        .windows(2)
        .map(|w| (w[1].0 - norm2(&w[1].1)) - (w[0].0 - norm2(&w[0].1)))
        .collect();
    let (last_t, last_v) = tail.last().expect("nonempty");
    if dt.iter().all(|&x| x <= det.tol) {
        return Ok(Classification {
            limit: Limit::Point(CausalPoint::new(
                exact_f64(*last_t),
                last_v.iter().map(|&x| exact_f64(x)).collect(),
            )),
            exact: false,
        });
    }
    let direction = |v: &[f64]| -> Vec<f64> {
        let n = norm2(v);
        v.iter().map(|x| x / n).collect()
    };
    if dc.iter().all(|x| x.abs() <= det.tol) && tail.iter().all(|p| norm2(&p.1) > 0.0) {
        let w0 = direction(&tail[0].1);
        let w1 = direction(last_v);
        let drift: Vec<f64> = w1.iter().zip(&w0).map(|(a, b)| a - b).collect();
        if norm2(&drift) <= det.tol {
            return Ok(Classification {
                limit: Limit::NullInfinity {
                    c: exact_f64(last_t - norm2(last_v)),
                    w: w1.into_iter().map(exact_f64).collect(),
                },
                exact: false,
            });
        }
    }
    let (lo, hi) = dc
        .iter()
        .fold((f64::INFINITY, 0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if lo > det.tol && lo >= 0.5 * hi {
        return Ok(Classification {
            limit: Limit::TimeInfinity,
            exact: false,
        });
    }
    Err(Error::Inconclusive(det.window))
}

/// Locate the limit of an increasing sequence in the completion.
pub fn classify_directed(seq: &RaySequence, det: &Detection) -> Result<Classification> {
    seq.validate()?;
    let exact = |limit| Ok(Classification { limit, exact: true });
    match seq {
        RaySequence::Explicit { points } => classify_numeric(points, det),
        RaySequence::Ray {
            base,
            time_rate,
            space_rate,
            direction,
        } if !time_rate.is_zero() => {
            if space_rate < time_rate {
                exact(Limit::TimeInfinity)
            } else {
                exact(Limit::NullInfinity {
                    c: &base.t - dot(&base.v, direction),
                    w: direction.clone(),
                })
            }
        }
        other => exact(Limit::Point(other.sup_in_space().expect("bounded family"))),
    }
}

/// The order of the completion: points by causality, a point below `(c, w)` when
/// `<v, w> >= t - c`, null points along a common direction by `c`, and time infinity on top.
pub fn limit_leq(a: &Limit, b: &Limit) -> bool {
    match (a, b) {
        (_, Limit::TimeInfinity) => true,
        (Limit::TimeInfinity, _) => false,
        (Limit::Point(p), Limit::Point(q)) => p.leq(q, BanachNorm::L2),
        (Limit::Point(p), Limit::NullInfinity { c, w }) => dot(&p.v, w) >= &p.t - c,
        (Limit::NullInfinity { .. }, Limit::Point(_)) => false,
        (Limit::NullInfinity { c, w }, Limit::NullInfinity { c: c2, w: w2 }) => w == w2 && c <= c2,
    }
}

/// Rational points of the unit circle.
pub fn pythagorean_directions() -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for (a, b, c) in [
        (1, 0, 1),
        (3, 4, 5),
        (4, 3, 5),
        (5, 12, 13),
        (12, 5, 13),
        (8, 15, 17),
    ] {
        for (sa, sb) in [(1, 1), (-1, 1), (1, -1), (-1, -1)] {
            let u = vec![rat(sa * a, c), rat(sb * b, c)];
            if !out.contains(&u) {
                out.push(u);
            }
        }
        let swapped = vec![rat(b, c), rat(a, c)];
        if !out.contains(&swapped) {
            out.push(swapped);
        }
    }
    out
}

/// Minkowski space `R x Q^2` completed by future null infinity and future time infinity.
pub struct MinkowskiClaim;

fn small(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-8..=8), rng.gen_range(1..=2))
}

fn random_point(rng: &mut ChaCha8Rng) -> CausalPoint {
    CausalPoint::new(small(rng), vec![small(rng), small(rng)])
}

fn random_ray(rng: &mut ChaCha8Rng) -> RaySequence {
    let dirs = pythagorean_directions();
    let pick = |rng: &mut ChaCha8Rng| dirs[rng.gen_range(0..dirs.len())].clone();
    match rng.gen_range(0..4) {
        0 => RaySequence::Constant {
            point: random_point(rng),
        },
        1 => {
            let rate = rat(rng.gen_range(1..=3), rng.gen_range(1..=2));
            RaySequence::Ray {
                base: random_point(rng),
                space_rate: rate.clone(),
                time_rate: rate,
                direction: pick(rng),
            }
        }
        2 => {
            let time_rate = rat(rng.gen_range(1..=3), 1);
            let space_rate = &time_rate * rat(rng.gen_range(0..4), 4);
            RaySequence::Ray {
                base: random_point(rng),
                time_rate,
                space_rate,
                direction: pick(rng),
            }
        }
        _ => {
            let n = rng.gen_range(1..=3);
            RaySequence::CauchyTail {
                base: random_point(rng),
                ratio: rat(rng.gen_range(1..=2), 3),
                scale: rat(rng.gen_range(1..=4), 2),
                directions: (0..n).map(|_| pick(rng)).collect(),
            }
        }
    }
}

impl CompletionClaim for MinkowskiClaim {
    type X = CausalPoint;
    type Y = Limit;
    type Chain = RaySequence;

    fn name(&self) -> String {
        "Minkowski space with future null and time infinity".into()
    }
    fn embed(&self, x: &CausalPoint) -> Limit {
        Limit::Point(x.clone())
    }
    fn x_leq(&self, a: &CausalPoint, b: &CausalPoint) -> bool {
        a.leq(b, BanachNorm::L2)
    }
    fn y_leq(&self, a: &Limit, b: &Limit) -> bool {
        limit_leq(a, b)
    }
    fn term(&self, chain: &RaySequence, n: usize) -> CausalPoint {
        chain.term(n).expect("closed-form family")
    }
    fn x_sup(&self, chain: &RaySequence) -> Option<CausalPoint> {
        chain.sup_in_space()
    }
    fn y_sup(&self, chain: &RaySequence) -> Option<Limit> {
        classify_directed(chain, &Detection::default())
            .ok()
            .map(|c| c.limit)
    }
    fn x_in_hat(&self, chain: &RaySequence, a: &CausalPoint) -> bool {
        chain.eventually_above(a)
    }
    fn chains(&self, b: &ClaimBudget, rng: &mut ChaCha8Rng) -> Vec<RaySequence> {
        (0..b.chains).map(|_| random_ray(rng)).collect()
    }
    fn points(&self, b: &ClaimBudget, rng: &mut ChaCha8Rng) -> Vec<CausalPoint> {
        (0..b.points).map(|_| random_point(rng)).collect()
    }
    fn targets(&self, b: &ClaimBudget, rng: &mut ChaCha8Rng) -> Vec<(Limit, RaySequence)> {
        let dirs = pythagorean_directions();
        (0..b.chains / 4)
            .map(|i| match i % 3 {
                0 => {
                    let (c, w) = (small(rng), dirs[rng.gen_range(0..dirs.len())].clone());
                    // Start on the null hyperplane `t - <v, w> = c`.
                    let v = vec![small(rng), small(rng)];
                    let t = &c + dot(&v, &w);
                    let seq = RaySequence::Ray {
                        base: CausalPoint::new(t, v),
                        time_rate: one(),
                        space_rate: one(),
                        direction: w.clone(),
                    };
                    (Limit::NullInfinity { c, w }, seq)
                }
                1 => (
                    Limit::TimeInfinity,
                    RaySequence::Ray {
                        base: random_point(rng),
                        time_rate: rat(2, 1),
                        space_rate: one(),
                        direction: dirs[0].clone(),
                    },
                ),
                _ => {
                    let target = random_point(rng);
                    (
                        Limit::Point(target.clone()),
                        RaySequence::Constant { point: target },
                    )
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::claim::check_completion_claim;

    fn u() -> Vec<Rational> {
        vec![rat(3, 5), rat(4, 5)]
    }

    #[test]
    fn the_three_families() {
        let det = Detection::default();
        let p = CausalPoint::ints(2, &[1, 1]);
        let c = classify_directed(&RaySequence::Constant { point: p.clone() }, &det).unwrap();
        assert_eq!(c.limit, Limit::Point(p));
        let null = RaySequence::Ray {
            base: CausalPoint::new(rat(1, 1), vec![rat(0, 1), rat(0, 1)]),
            time_rate: one(),
            space_rate: one(),
            direction: u(),
        };
        assert_eq!(
            null.term(4).unwrap(),
            CausalPoint::new(rat(5, 1), vec![rat(12, 5), rat(16, 5)])
        );
        assert_eq!(
            classify_directed(&null, &det).unwrap().limit,
            Limit::NullInfinity {
                c: rat(1, 1),
                w: u()
            }
        );
        let time = RaySequence::Ray {
            base: CausalPoint::ints(0, &[0, 0]),
            time_rate: rat(2, 1),
            space_rate: one(),
            direction: u(),
        };
        assert_eq!(
            classify_directed(&time, &det).unwrap().limit,
            Limit::TimeInfinity
        );
        for seq in [null, time] {
            for m in [1, 5, 17] {
                assert_eq!(
                    classify_directed(&seq.shifted(m), &det).unwrap(),
                    classify_directed(&seq, &det).unwrap()
                );
            }
        }
    }

    #[test]
    fn cauchy_tail_shift() {
        let seq = RaySequence::CauchyTail {
            base: CausalPoint::ints(0, &[0, 0]),
            ratio: rat(1, 2),
            scale: one(),
            directions: vec![u(), vec![rat(1, 1), rat(0, 1)]],
        };
        let limit = classify_directed(&seq, &Detection::default()).unwrap();
        assert_eq!(
            limit.limit,
            Limit::Point(CausalPoint::new(
                rat(1, 1),
                vec![rat(3, 5) * rat(2, 3) + rat(1, 3), rat(4, 5) * rat(2, 3)]
            ))
        );
        assert_eq!(
            classify_directed(&seq.shifted(3), &Detection::default()).unwrap(),
            limit
        );
        assert_eq!(seq.shifted(3).term(2), seq.term(5));
    }

    #[test]
    fn numeric_detection() {
        let det = Detection::default();
        let null: Vec<(f64, Vec<f64>)> = (1..40)
            .map(|k| (k as f64, vec![0.6 * (k - 1) as f64, 0.8 * (k - 1) as f64]))
            .collect();
        let c = classify_directed(&RaySequence::Explicit { points: null }, &det).unwrap();
        assert!(!c.exact);
        assert!(matches!(c.limit, Limit::NullInfinity { .. }));
        let time: Vec<(f64, Vec<f64>)> = (0..20)
            .map(|k| (2.0 * k as f64, vec![k as f64, 0.0]))
            .collect();
        assert_eq!(
            classify_directed(&RaySequence::Explicit { points: time }, &det)
                .unwrap()
                .limit,
            Limit::TimeInfinity
        );
        let slow: Vec<(f64, Vec<f64>)> =
            (1..20).map(|k| (1.0 - 1.0 / k as f64, vec![0.0])).collect();
        assert_eq!(
            classify_directed(&RaySequence::Explicit { points: slow }, &det),
            Err(Error::Inconclusive(8))
        );
        let bad = vec![(0.0, vec![0.0]), (1.0, vec![2.0])];
        assert_eq!(
            classify_directed(&RaySequence::Explicit { points: bad }, &det),
            Err(Error::NotMonotone(1))
        );
    }

    #[test]
    fn completion_claim_holds() {
        let r = check_completion_claim(&MinkowskiClaim, &ClaimBudget::default());
        assert!(r.passed(), "{:?}", r.verdict);
        assert!(r.density_witnesses > 0 && r.criterion_pairs > 0);
    }
}
