use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{check_probability, lp_norm, norm_f64, probability, weights_f64, LpTag};
use crate::cone::{ConeVec, DiscreteCone};
use crate::error::{Error, Result};
use crate::extreal::{rat, ExtNonneg};
use crate::mcp::{check_mcp, ChainMap, ConeChains, McpBudget, McpReport, Trend, TrendChain};

#[derive(Clone, Debug)]
pub struct HolderAuditConfig {
    /// Pairs sampled per exponent.
    pub cases: usize,
    pub max_n: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for HolderAuditConfig {
    fn default() -> Self {
        HolderAuditConfig {
            cases: 10_000,
            max_n: 4,
            seed: 0x401d,
            tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolderFailure {
    pub p: LpTag,
    pub mu: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub pairing: f64,
    pub product: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolderReport {
    pub exponents: Vec<LpTag>,
    pub checked: usize,
    /// Pairs where some coordinate of `f` or `g` is `0` or `inf`.
    pub boundary: usize,
    /// Smallest `pairing / product` seen over pairs with a finite positive product.
    pub tightest_ratio: f64,
    pub per_exponent: Vec<ExponentSummary>,
    pub failures: Vec<HolderFailure>,
}

/// One row of the audit, aggregated over the pairs of a single exponent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentSummary {
    pub p: LpTag,
    pub q: LpTag,
    pub checked: usize,
    pub boundary: usize,
    pub tightest_ratio: f64,
    pub failures: usize,
}

impl HolderReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// The per-exponent rows as CSV with a header line.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Input(format!("csv: {e}"));
        w.write_record([
            "p",
            "q",
            "checked",
            "boundary",
            "tightest_ratio",
            "failures",
        ])
        .map_err(io)?;
        for row in &self.per_exponent {
            w.write_record([
                row.p.to_string(),
                row.q.to_string(),
                row.checked.to_string(),
                row.boundary.to_string(),
                row.tightest_ratio.to_string(),
                row.failures.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Input(format!("csv: {e}")))
    }
}

fn sample_entry(rng: &mut impl Rng) -> f64 {
    match rng.gen_range(0..10) {
        0 => 0.0,
        1 => f64::INFINITY,
        _ => rng.gen_range(1..60) as f64 / rng.gen_range(1..9) as f64,
    }
}

fn product(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

/// `<f, g> >= ||f||_p ||g||_q` on random pairs for each exponent and its conjugate.
pub fn reverse_holder_audit(cfg: &HolderAuditConfig, exponents: &[LpTag]) -> HolderReport {
    let results: Vec<(usize, bool, f64, Option<HolderFailure>)> = exponents
        .par_iter()
        .enumerate()
        .flat_map_iter(|(e, p)| {
            let q = p.conjugate();
            (0..cfg.cases).map(move |i| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ ((e as u64) << 40) ^ i as u64);
                let n = rng.gen_range(1..=cfg.max_n);
                let parts: Vec<i64> = (0..n).map(|_| rng.gen_range(1..6)).collect();
                let mu = weights_f64(&probability(&parts).expect("positive parts"));
                let f: Vec<f64> = (0..n).map(|_| sample_entry(&mut rng)).collect();
                let g: Vec<f64> = (0..n).map(|_| sample_entry(&mut rng)).collect();
                let boundary = f.iter().chain(&g).any(|&x| x == 0.0 || x.is_infinite());
                let pairing: f64 = mu
                    .iter()
                    .zip(f.iter().zip(&g))
                    .map(|(m, (&a, &b))| m * product(a, b))
                    .sum();
                let prod = product(norm_f64(&mu, &f, p), norm_f64(&mu, &g, &q));
                let ok = if prod.is_infinite() {
                    pairing.is_infinite()
                } else {
                    pairing >= prod * (1.0 - cfg.tol)
                };
                let ratio = if prod > 0.0 && prod.is_finite() {
                    pairing / prod
                } else {
                    f64::INFINITY
                };
                let failure = (!ok).then(|| HolderFailure {
                    p: p.clone(),
                    mu,
                    f,
                    g,
                    pairing,
                    product: prod,
                });
                (e, boundary, ratio, failure)
            })
        })
        .collect();
    let per_exponent = exponents
        .iter()
        .enumerate()
        .map(|(e, p)| {
            let rows = || results.iter().filter(move |r| r.0 == e);
            ExponentSummary {
                p: p.clone(),
                q: p.conjugate(),
                checked: rows().count(),
                boundary: rows().filter(|r| r.1).count(),
                tightest_ratio: rows().map(|r| r.2).fold(f64::INFINITY, f64::min),
                failures: rows().filter(|r| r.3.is_some()).count(),
            }
        })
        .collect();
    HolderReport {
        exponents: exponents.to_vec(),
        checked: results.len(),
        boundary: results.iter().filter(|r| r.1).count(),
        tightest_ratio: results.iter().map(|r| r.2).fold(f64::INFINITY, f64::min),
        per_exponent,
        failures: results.into_iter().filter_map(|r| r.3).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct L0Report {
    pub plus: f64,
    pub minus: f64,
    /// `1 / ||1/f||_{0-}` and `1 / ||1/f||_{0+}`.
    pub plus_via_reciprocal: f64,
    pub minus_via_reciprocal: f64,
    pub reciprocal_identity: bool,
    /// `(||fg||_0, ||f||_0 ||g||_0)` when a bounded positive `g` was supplied.
    pub product: Option<(f64, f64)>,
    pub product_identity: Option<bool>,
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn recip(x: f64) -> f64 {
    if x == 0.0 {
        f64::INFINITY
    } else if x.is_infinite() {
        0.0
    } else {
        1.0 / x
    }
}

/// The reciprocal identities between `0+` and `0-`, and the product rule on bounded positive vectors.
pub fn l0_identities(cone: &DiscreteCone, f: &ConeVec, g: Option<&ConeVec>) -> Result<L0Report> {
    check_probability(cone)?;
    cone.check(f)?;
    let mu = weights_f64(cone);
    let ff: Vec<f64> = f.coords().iter().map(ExtNonneg::to_f64).collect();
    let inv: Vec<f64> = ff.iter().map(|&x| recip(x)).collect();
    let plus = norm_f64(&mu, &ff, &LpTag::ZeroPlus);
    let minus = norm_f64(&mu, &ff, &LpTag::ZeroMinus);
    let plus_via_reciprocal = recip(norm_f64(&mu, &inv, &LpTag::ZeroMinus));
    let minus_via_reciprocal = recip(norm_f64(&mu, &inv, &LpTag::ZeroPlus));
    let reciprocal_identity =
        close(plus, plus_via_reciprocal, 1e-12) && close(minus, minus_via_reciprocal, 1e-12);
    let (product, product_identity) = match g {
        Some(g) => {
            cone.check(g)?;
            let bounded = |v: &ConeVec| v.coords().iter().all(|x| !x.is_zero() && !x.is_inf());
            if bounded(f) && bounded(g) {
                let gg: Vec<f64> = g.coords().iter().map(ExtNonneg::to_f64).collect();
                let fg: Vec<f64> = ff.iter().zip(&gg).map(|(a, b)| a * b).collect();
                let lhs = norm_f64(&mu, &fg, &LpTag::ZeroPlus);
                let rhs = plus * norm_f64(&mu, &gg, &LpTag::ZeroPlus);
                (Some((lhs, rhs)), Some(close(lhs, rhs, 1e-12)))
            } else {
                (None, None)
            }
        }
        None => (None, None),
    };
    Ok(L0Report {
        plus,
        minus,
        plus_via_reciprocal,
        minus_via_reciprocal,
        reciprocal_identity,
        product,
        product_identity,
    })
}

/// Norms of the indicators of `{1..k}`, `k = 1..=window`, under uniform weights.
///
/// For negative exponents every proper indicator has norm zero while the full one has norm one.
pub fn lp_mcp_counterexample(window: usize, tag: &LpTag) -> Vec<f64> {
    let cone = DiscreteCone::new(vec![rat(1, window as i64); window]).expect("positive weights");
    (1..=window)
        .map(|k| {
            let f = ConeVec(
                (0..window)
                    .map(|i| {
                        if i < k {
                            ExtNonneg::one()
                        } else {
                            ExtNonneg::zero()
                        }
                    })
                    .collect(),
            );
            lp_norm(&cone, &f, tag).expect("probability weights").value
        })
        .collect()
}

/// `||f_n||_q` for `f_n = 1 + inf * [i/N <= 1/n]`, `n = 2..=window`, under uniform weights.
pub fn mcp_family_norms(window: usize, q: &LpTag) -> Vec<f64> {
    let mu = vec![1.0 / window as f64; window];
    (2..=window)
        .map(|n| {
            let f: Vec<f64> = (1..=window)
                .map(|i| if i * n <= window { f64::INFINITY } else { 1.0 })
                .collect();
            norm_f64(&mu, &f, q)
        })
        .collect()
}

/// `g -> ||g + f||_p` on `[0, inf]^n`.
#[derive(Clone, Debug)]
pub struct ShiftedNorm {
    pub mu: Vec<f64>,
    pub shift: Vec<f64>,
    pub tag: LpTag,
    chains: ConeChains,
}

impl ShiftedNorm {
    pub fn new(cone: &DiscreteCone, shift: &ConeVec, tag: LpTag) -> Result<Self> {
        cone.check(shift)?;
        Ok(ShiftedNorm {
            mu: weights_f64(cone),
            shift: shift.coords().iter().map(ExtNonneg::to_f64).collect(),
            tag,
            chains: ConeChains { n: cone.dim() },
        })
    }

    fn eval(&self, g: &[f64]) -> f64 {
        let moved: Vec<f64> = g.iter().zip(&self.shift).map(|(a, b)| a + b).collect();
        norm_f64(&self.mu, &moved, &self.tag)
    }
}

impl ChainMap for ShiftedNorm {
    type Source = ConeChains;
    type Value = f64;

    fn name(&self) -> String {
        format!("g -> ||g + f||_{}", self.tag)
    }

    fn source(&self) -> &ConeChains {
        &self.chains
    }

    fn apply(&self, g: &ConeVec) -> f64 {
        self.eval(&g.coords().iter().map(ExtNonneg::to_f64).collect::<Vec<_>>())
    }

    fn value_leq(&self, a: &f64, b: &f64) -> bool {
        a <= b || close(*a, *b, 1e-12)
    }

    /// Each shifted coordinate is eventually positive or identically zero, so its
    /// power converges to the power of the limit; the norm is then read off those limits.
    fn image_sup(&self, chain: &TrendChain) -> f64 {
        let limits: Vec<f64> = chain
            .coords
            .iter()
            .map(|t| match t {
                Trend::Grow { .. } => f64::INFINITY,
                other if !other.eventually_positive() => 0.0,
                other => other.limit().to_f64(),
            })
            .collect();
        self.eval(&limits)
    }

    fn adversarial(&self) -> Vec<TrendChain> {
        // The creeping chain `(1 - 1/k)` starts at zero, where negative powers blow up.
        let n = self.mu.len();
        vec![TrendChain::new(
            (0..n).map(|_| Trend::rise(rat(1, 1), rat(1, 1))).collect(),
        )]
    }
}

/// Chain audit of the shifted norm.
pub fn shifted_norm_audit(
    cone: &DiscreteCone,
    shift: &ConeVec,
    tag: LpTag,
    budget: &McpBudget,
) -> Result<McpReport> {
    check_mcp(&ShiftedNorm::new(cone, shift, tag)?, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reverse_holder_small() {
        let cfg = HolderAuditConfig {
            cases: 500,
            ..Default::default()
        };
        let tags: Vec<LpTag> = ["-2", "-1", "-1/2", "1/2", "1", "0+", "-inf"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let r = reverse_holder_audit(&cfg, &tags);
        assert!(r.passed(), "{:?}", r.failures.first());
        assert!(r.boundary > 0);
        assert!(r.tightest_ratio >= 1.0 - 1e-9);
        assert_eq!(
            r.per_exponent.iter().map(|e| e.checked).sum::<usize>(),
            r.checked
        );
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + tags.len());
        assert!(text.starts_with("p,q,checked"));
    }

    #[test]
    fn l0_examples() {
        let half = probability(&[1, 1]).unwrap();
        let r = l0_identities(
            &half,
            &ConeVec(vec![ExtNonneg::zero(), ExtNonneg::inf()]),
            None,
        )
        .unwrap();
        assert!(r.reciprocal_identity);
        assert_eq!((r.plus, r.minus), (f64::INFINITY, 0.0));
        let r = l0_identities(
            &half,
            &ConeVec::from_ints(&[Some(1), Some(4)]),
            Some(&ConeVec::from_ints(&[Some(2), Some(2)])),
        )
        .unwrap();
        assert_eq!(r.product_identity, Some(true));
        assert!((r.product.unwrap().0 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn window_chain() {
        assert_eq!(
            lp_mcp_counterexample(4, &LpTag::int(-1)),
            vec![0.0, 0.0, 0.0, 1.0]
        );
        assert_eq!(
            lp_mcp_counterexample(4, &LpTag::int(1)),
            vec![0.25, 0.5, 0.75, 1.0]
        );
    }

    #[test]
    fn family_norms_stay_in_range() {
        for q in ["-1", "-2", "-1/2"] {
            let q: LpTag = q.parse().unwrap();
            let bound = 2f64.powf(-1.0 / q.exponent_f64());
            for x in mcp_family_norms(64, &q) {
                assert!((1.0..=bound * (1.0 + 1e-12)).contains(&x), "{x}");
            }
        }
    }

    #[test]
    fn shifted_norm_respects_chains() {
        let cone = probability(&[1, 1, 2]).unwrap();
        let shift = ConeVec::from_ints(&[Some(1), Some(1), Some(1)]);
        let r = shifted_norm_audit(&cone, &shift, LpTag::int(-1), &McpBudget::new(64)).unwrap();
        assert!(r.passed(), "{:?}", r.counterexample());
    }
}
