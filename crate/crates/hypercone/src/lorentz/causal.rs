use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::triangle::{tri_norm, TriangleNorm};
use crate::error::{Error, Result};
use crate::extreal::{rat, rational_serde, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BanachNorm {
    L1,
    L2,
    LInf,
}

impl BanachNorm {
    pub fn dual(self) -> BanachNorm {
        match self {
            BanachNorm::L1 => BanachNorm::LInf,
            BanachNorm::L2 => BanachNorm::L2,
            BanachNorm::LInf => BanachNorm::L1,
        }
    }

    pub fn eval(self, v: &[f64]) -> f64 {
        match self {
            BanachNorm::L1 => v.iter().map(|x| x.abs()).sum(),
            BanachNorm::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            BanachNorm::LInf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }

    /// Exact test of `||v|| <= bound`.
    pub fn within(self, v: &[Rational], bound: &Rational) -> bool {
        if bound.is_negative() {
            return false;
        }
        match self {
            BanachNorm::L1 => v.iter().map(|x| x.abs()).sum::<Rational>() <= *bound,
            BanachNorm::L2 => v.iter().map(|x| x * x).sum::<Rational>() <= bound * bound,
            BanachNorm::LInf => v.iter().all(|x| x.abs() <= *bound),
        }
    }

    /// A unit vector `u` with `m . u = ||m||_*`.
    pub fn dual_attainer(self, m: &[f64]) -> Vec<f64> {
        let d = m.len();
        match self {
            BanachNorm::L1 => {
                let i = (0..d)
                    .max_by(|&a, &b| m[a].abs().total_cmp(&m[b].abs()))
                    .unwrap_or(0);
                (0..d)
                    .map(|j| {
                        if j == i {
                            if m[i] < 0.0 {
                                -1.0
                            } else {
                                1.0
                            }
                        } else {
                            0.0
                        }
                    })
                    .collect()
            }
            BanachNorm::L2 => {
                let len = BanachNorm::L2.eval(m);
                if len == 0.0 {
                    vec![0.0; d]
                } else {
                    m.iter().map(|x| x / len).collect()
                }
            }
            BanachNorm::LInf => m
                .iter()
                .map(|x| if *x < 0.0 { -1.0 } else { 1.0 })
                .collect(),
        }
    }
}

/// A point of `R x Q^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CausalPoint {
    #[serde(with = "rational_serde")]
    pub t: Rational,
    #[serde(with = "rational_serde::vec")]
    pub v: Vec<Rational>,
}

impl CausalPoint {
    pub fn new(t: Rational, v: Vec<Rational>) -> Self {
        CausalPoint { t, v }
    }

    pub fn ints(t: i64, v: &[i64]) -> Self {
        CausalPoint {
            t: rat(t, 1),
            v: v.iter().map(|&x| rat(x, 1)).collect(),
        }
    }

    /// `self <= other`, i.e. `||other.v - self.v|| <= other.t - self.t`.
    pub fn leq(&self, other: &CausalPoint, norm: BanachNorm) -> bool {
        let diff: Vec<Rational> = other.v.iter().zip(&self.v).map(|(a, b)| a - b).collect();
        norm.within(&diff, &(&other.t - &self.t))
    }
}

/// `hn(t, v) = |(t, ||v||)|` on the future cone `t >= ||v||`.
pub fn lorentz_norm(banach: BanachNorm, tri: &TriangleNorm, t: f64, v: &[f64]) -> Result<f64> {
    let len = banach.eval(v);
    if len > t {
        return Err(Error::NotCausal);
    }
    tri_norm(tri, t, len)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReverseTriangleReport {
    pub pairs: usize,
    pub failures: usize,
    /// Smallest `hn(a + b) - hn(a) - hn(b)` relative to `hn(a + b)`.
    pub worst_margin: f64,
}

fn random_future(rng: &mut impl Rng, banach: BanachNorm, d: usize) -> (f64, Vec<f64>) {
    let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let len = banach.eval(&v);
    // Some pairs sit exactly on the light cone.
    let t = if rng.gen_bool(0.1) {
        len
    } else {
        len + rng.gen_range(0.0..3.0)
    };
    (t, v)
}

/// `hn(a + b) >= hn(a) + hn(b)` on random pairs of the future cone.
pub fn reverse_triangle_audit(
    banach: BanachNorm,
    tri: &TriangleNorm,
    d: usize,
    pairs: usize,
    tol: f64,
    seed: u64,
) -> Result<ReverseTriangleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ReverseTriangleReport {
        pairs,
        failures: 0,
        worst_margin: f64::INFINITY,
    };
    for _ in 0..pairs {
        let (ta, va) = random_future(&mut rng, banach, d);
        let (tb, vb) = random_future(&mut rng, banach, d);
        let sum: Vec<f64> = va.iter().zip(&vb).map(|(a, b)| a + b).collect();
        let whole = lorentz_norm(banach, tri, ta + tb, &sum)?;
        let parts = lorentz_norm(banach, tri, ta, &va)? + lorentz_norm(banach, tri, tb, &vb)?;
        let margin = (whole - parts) / whole.max(1.0);
        report.worst_margin = report.worst_margin.min(margin);
        if margin < -tol {
            report.failures += 1;
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositiveFunctional {
    pub s: f64,
    pub m: Vec<f64>,
    pub banach: BanachNorm,
    pub dual_norm: f64,
    /// `||m||_* <= s`.
    pub bounded: bool,
    /// `ts - m . v >= 0` at every sampled causal point.
    pub positive_on_samples: bool,
    pub witness: Option<(f64, Vec<f64>)>,
    pub agree: bool,
}

/// Positivity of `(t, v) -> ts - m . v` on the future cone, sampled on `{1} x unit ball`
/// plus the closed-form maximizer of `m . v`, against the dual-norm bound.
pub fn positive_functional_audit(
    s: f64,
    m: &[f64],
    banach: BanachNorm,
    samples: usize,
    seed: u64,
) -> PositiveFunctional {
    let d = m.len();
    let dual_norm = banach.dual().eval(m);
    let tol = 1e-12 * s.abs().max(dual_norm).max(1.0);
    let bounded = dual_norm <= s + tol;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates = vec![vec![0.0; d], banach.dual_attainer(m)];
    for _ in 0..samples {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let len = banach.eval(&v);
        if len > 0.0 {
            candidates.push(v.iter().map(|x| x / len).collect());
        }
    }
    let witness = candidates
        .into_iter()
        .find(|v| s - m.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() < -tol)
        .map(|v| (1.0, v));
    let positive_on_samples = witness.is_none();
    PositiveFunctional {
        s,
        m: m.to_vec(),
        banach,
        dual_norm,
        bounded,
        positive_on_samples,
        agree: bounded == positive_on_samples,
        witness,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositiveAuditSummary {
    pub cases: usize,
    pub positive: usize,
    pub disagreements: usize,
}

/// Random `(s, m)` across the three norms, half of them on or near the boundary.
pub fn positive_functional_suite(cases: usize, seed: u64) -> PositiveAuditSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = PositiveAuditSummary {
        cases,
        positive: 0,
        disagreements: 0,
    };
    for i in 0..cases {
        let banach = [BanachNorm::L1, BanachNorm::L2, BanachNorm::LInf][i % 3];
        let d = rng.gen_range(1..=4);
        let m: Vec<f64> = (0..d)
            .map(|_| rng.gen_range(-4i32..=4) as f64 / 2.0)
            .collect();
        let dual = banach.dual().eval(&m);
        let s = match rng.gen_range(0..3) {
            0 => dual,
            1 => dual * rng.gen_range(0.5..1.0),
            _ => dual + rng.gen_range(0.0..1.0),
        };
        let audit = positive_functional_audit(s, &m, banach, 32, seed ^ i as u64);
        summary.positive += usize::from(audit.bounded);
        summary.disagreements += usize::from(!audit.agree);
    }
    summary
}

/// The causal chain built from a summable path `x_n` and its supremum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompletenessPair {
    /// `(t_n, x_n)` for the first few `n`, with `t_n` the length travelled so far.
    pub chain: Vec<CausalPoint>,
    pub sup: CausalPoint,
    pub chain_increasing: bool,
    pub sup_is_upper_bound: bool,
    /// Distance from the last listed term to the supremum, in `t` and in space.
    pub residual: (f64, f64),
}

/// `x_n = x_0 + sum_{i <= n} ratio^i u_{(i - 1) mod m}` for unit vectors `u` of `norm`.
pub fn completeness_pair(
    x0: &[Rational],
    ratio: &Rational,
    directions: &[Vec<Rational>],
    norm: BanachNorm,
    terms: usize,
) -> Result<CompletenessPair> {
    if ratio.is_negative() || *ratio >= rat(1, 1) {
        return Err(Error::NotSummable);
    }
    let m = directions.len();
    if m == 0 {
        return Err(Error::Input("at least one direction is needed".into()));
    }
    if let Some(u) = directions.iter().find(|u| u.len() != x0.len()) {
        return Err(Error::Dimension {
            expected: x0.len(),
            found: u.len(),
        });
    }
    for u in directions {
        check_unit(u, norm)?;
    }
    let mut chain = vec![CausalPoint::new(Rational::zero(), x0.to_vec())];
    let mut step = rat(1, 1);
    for i in 1..terms {
        step *= ratio;
        let prev = chain.last().expect("nonempty").clone();
        let u = &directions[(i - 1) % m];
        chain.push(CausalPoint::new(
            &prev.t + &step,
            prev.v.iter().zip(u).map(|(a, b)| a + b * &step).collect(),
        ));
    }
    let denom = rat(1, 1) - num::pow(ratio.clone(), m);
    let mut limit = x0.to_vec();
    let mut total = Rational::zero();
    for (j, u) in directions.iter().enumerate() {
        let weight = num::pow(ratio.clone(), j + 1) / &denom;
        total += &weight;
        limit.iter_mut().zip(u).for_each(|(a, b)| *a += b * &weight);
    }
    let sup = CausalPoint::new(total, limit);
    let chain_increasing = chain.windows(2).all(|w| w[0].leq(&w[1], norm));
    let sup_is_upper_bound = chain.iter().all(|p| p.leq(&sup, norm));
    let last = chain.last().expect("nonempty");
    let to_f = |x: &Rational| num::ToPrimitive::to_f64(x).unwrap_or(f64::NAN);
    let gap: Vec<f64> = sup
        .v
        .iter()
        .zip(&last.v)
        .map(|(a, b)| to_f(&(a - b)))
        .collect();
    let residual = (to_f(&(&sup.t - &last.t)), norm.eval(&gap));
    Ok(CompletenessPair {
        chain,
        sup,
        chain_increasing,
        sup_is_upper_bound,
        residual,
    })
}

/// Exact unit-norm check.
pub fn check_unit(u: &[Rational], norm: BanachNorm) -> Result<()> {
    let one = rat(1, 1);
    let unit = match norm {
        BanachNorm::L1 => u.iter().map(|x| x.abs()).sum::<Rational>() == one,
        BanachNorm::L2 => u.iter().map(|x| x * x).sum::<Rational>() == one,
        BanachNorm::LInf => u.iter().map(|x| x.abs()).max() == Some(one),
    };
    if unit {
        Ok(())
    } else {
        Err(Error::Input(format!(
            "direction {u:?} is not a unit vector"
        )))
    }
}
