use itertools::Itertools;
use serde::Serialize;

use super::{check_probability, lp_norm, norm_f64, weights_f64, LpTag};
use crate::cone::{ConeVec, DiscreteCone};
use crate::error::{Error, Result};
use crate::extreal::ExtNonneg;
use crate::homext::DualVector;

/// A dual vector attaining the norm of `f`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualAttain {
    pub tag: LpTag,
    pub conjugate: LpTag,
    pub g: Vec<f64>,
    pub norm_f: f64,
    /// `||g||_q`, which should be one.
    pub norm_g: f64,
    pub pairing: f64,
    /// `|pairing - norm_f| / norm_f`.
    pub gap: f64,
}

fn pairing_f64(mu: &[f64], f: &[f64], g: &[f64]) -> f64 {
    mu.iter()
        .zip(f.iter().zip(g))
        .map(|(m, (&a, &b))| if a == 0.0 || b == 0.0 { 0.0 } else { m * a * b })
        .sum()
}

fn relative_gap(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// The minimizer of `<f, g>` over `||g||_q >= 1` for strictly positive finite `f`.
pub fn dual_attain(cone: &DiscreteCone, f: &ConeVec, tag: &LpTag) -> Result<DualAttain> {
    cone.check(f)?;
    if tag.is_logarithmic() {
        check_probability(cone)?;
    }
    if f.coords().iter().any(|x| x.is_zero() || x.is_inf()) {
        return Err(Error::BoundaryCase);
    }
    let mu = weights_f64(cone);
    let ff: Vec<f64> = f.coords().iter().map(ExtNonneg::to_f64).collect();
    let norm_f = norm_f64(&mu, &ff, tag);
    let conjugate = tag.conjugate();
    let g: Vec<f64> = match tag {
        LpTag::NegInf => {
            let low = f.coords().iter().min().expect("nonempty");
            let mass: f64 = f
                .coords()
                .iter()
                .zip(&mu)
                .filter(|(x, _)| *x == low)
                .map(|(_, m)| m)
                .sum();
            f.coords()
                .iter()
                .map(|x| if x == low { 1.0 / mass } else { 0.0 })
                .collect()
        }
        LpTag::ZeroPlus | LpTag::ZeroMinus => ff.iter().map(|x| norm_f / x).collect(),
        LpTag::Power(_) => {
            let p = tag.exponent_f64();
            ff.iter().map(|x| (x / norm_f).powf(p - 1.0)).collect()
        }
    };
    let norm_g = norm_f64(&mu, &g, &conjugate);
    let pairing = pairing_f64(&mu, &ff, &g);
    Ok(DualAttain {
        tag: tag.clone(),
        conjugate,
        gap: relative_gap(pairing, norm_f),
        g,
        norm_f,
        norm_g,
        pairing,
    })
}

/// `inf <f, g> / ||g||_q` over grids of step `1 / 2^k` on `(0, 4]^n`, one entry per level.
///
/// The grids are nested, so the infima cannot increase from one level to the next.
pub fn dual_grid_infima(
    cone: &DiscreteCone,
    f: &ConeVec,
    tag: &LpTag,
    levels: u32,
) -> Result<Vec<f64>> {
    cone.check(f)?;
    if cone.dim() > 3 {
        return Err(Error::Input(
            "grid oracle supports at most three coordinates".into(),
        ));
    }
    if tag.is_logarithmic() {
        check_probability(cone)?;
    }
    let mu = weights_f64(cone);
    let ff: Vec<f64> = f.coords().iter().map(ExtNonneg::to_f64).collect();
    let q = tag.conjugate();
    Ok((2..2 + levels)
        .map(|k| {
            let per = 4 * (1usize << k);
            let step = 1.0 / (1usize << k) as f64;
            (0..cone.dim())
                .map(|_| (1..=per).map(move |j| j as f64 * step))
                .multi_cartesian_product()
                .filter_map(|g| {
                    let ng = norm_f64(&mu, &g, &q);
                    (ng > 0.0 && ng.is_finite()).then(|| pairing_f64(&mu, &ff, &g) / ng)
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorNorm {
    /// `||f||_p` where `p` is conjugate to the source exponent.
    pub closed_form: f64,
    /// Smallest value found on the sample grid; never below the closed form.
    pub grid_inf: f64,
    pub grid_points: usize,
}

/// `inf { L(v) : ||v||_source >= 1 }` for `L = L_f`.
pub fn operator_norm(l: &DualVector, source: &LpTag) -> Result<OperatorNorm> {
    let cone = &l.cone;
    if source.is_logarithmic() {
        check_probability(cone)?;
    }
    if l.f.coords().iter().all(ExtNonneg::is_zero) {
        return Ok(OperatorNorm {
            closed_form: 0.0,
            grid_inf: 0.0,
            grid_points: 0,
        });
    }
    let closed_form = lp_norm(cone, &l.f, &source.conjugate())?.value;
    let mu = weights_f64(cone);
    let ff: Vec<f64> = l.f.coords().iter().map(ExtNonneg::to_f64).collect();
    let mut values: Vec<f64> = (1..=8).map(|j| j as f64 / 4.0).collect();
    values.push(0.0);
    values.push(f64::INFINITY);
    let per_coord = if cone.dim() <= 3 {
        values
    } else {
        vec![0.0, 0.5, 1.0, 2.0, f64::INFINITY]
    };
    let (mut grid_inf, mut grid_points) = (f64::INFINITY, 0);
    for v in (0..cone.dim())
        .map(|_| per_coord.iter().cloned())
        .multi_cartesian_product()
    {
        let nv = norm_f64(&mu, &v, source);
        if nv == 0.0 {
            continue;
        }
        grid_points += 1;
        let lv = pairing_f64(&mu, &ff, &v);
        // On a ray of infinite norm every positive multiple is admissible.
        let candidate = if nv.is_infinite() {
            if lv.is_finite() {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            lv / nv
        };
        grid_inf = grid_inf.min(candidate);
    }
    Ok(OperatorNorm {
        closed_form,
        grid_inf,
        grid_points,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BidualVerdict {
    /// Equality within tolerance.
    Equal,
    /// Only the inequality `hn** >= hn` was confirmed.
    AtLeast,
    /// Gap recorded without a verdict.
    Unasserted,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BidualAudit {
    pub norm: f64,
    pub bidual: f64,
    pub gap: f64,
    pub verdict: BidualVerdict,
}

/// Compare `hn(f)` with the norm of `f` seen as a functional on the dual.
///
/// Interior vectors use the attaining dual vector and its own dual norm. Boundary
/// vectors fall back to the grid infimum, which can only overestimate the bidual norm.
pub fn bidual_audit(cone: &DiscreteCone, f: &ConeVec, tag: &LpTag) -> Result<BidualAudit> {
    let norm = lp_norm(cone, f, tag)?.value;
    let exponent = tag.exponent_f64();
    let negative = !tag.is_logarithmic() && exponent < 0.0;
    match dual_attain(cone, f, tag) {
        Ok(inner) => {
            let dual_norm = inner.norm_g;
            let bidual = inner.pairing / dual_norm;
            let gap = relative_gap(bidual, norm);
            let verdict = if negative {
                BidualVerdict::Unasserted
            } else if gap <= 1e-8 {
                BidualVerdict::Equal
            } else {
                BidualVerdict::AtLeast
            };
            Ok(BidualAudit {
                norm,
                bidual,
                gap,
                verdict,
            })
        }
        Err(Error::BoundaryCase) => {
            let infima = dual_grid_infima(cone, f, tag, 3)?;
            let bidual = *infima.last().expect("three levels");
            let verdict = if negative {
                BidualVerdict::Unasserted
            } else if bidual >= norm * (1.0 - 1e-9) {
                BidualVerdict::AtLeast
            } else {
                return Err(Error::PreconditionFailed(format!(
                    "grid value {bidual} lies below the norm {norm}"
                )));
            };
            Ok(BidualAudit {
                norm,
                bidual,
                gap: relative_gap(bidual, norm),
                verdict,
            })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extreal::rat;
    use crate::hypernorm::probability;

    fn half() -> DiscreteCone {
        probability(&[1, 1]).unwrap()
    }

    #[test]
    fn constant_vector() {
        let d = dual_attain(
            &half(),
            &ConeVec::from_ints(&[Some(3), Some(3)]),
            &"1/2".parse().unwrap(),
        )
        .unwrap();
        assert!(d.g.iter().all(|x| (x - 1.0).abs() < 1e-12));
        assert!((d.pairing - 3.0).abs() < 1e-12);
    }

    #[test]
    fn minus_one() {
        let f = ConeVec::from_ints(&[Some(1), Some(4)]);
        let d = dual_attain(&half(), &f, &LpTag::int(-1)).unwrap();
        assert!((d.pairing - 1.6).abs() < 1e-12 && (d.norm_g - 1.0).abs() < 1e-12);
        let infima = dual_grid_infima(&half(), &f, &LpTag::int(-1), 3).unwrap();
        assert!(infima.windows(2).all(|w| w[1] <= w[0]));
        assert!(infima.iter().all(|&x| x >= 1.6 * (1.0 - 1e-9)));
        assert!(infima[2] - 1.6 < infima[0] - 1.6 + 1e-15);
    }

    #[test]
    fn geometric_mean() {
        let f = ConeVec::from_ints(&[Some(1), Some(4)]);
        let d = dual_attain(&half(), &f, &LpTag::ZeroPlus).unwrap();
        assert!((d.g[0] - 2.0).abs() < 1e-12 && (d.g[1] - 0.5).abs() < 1e-12);
        assert!((d.pairing - 2.0).abs() < 1e-12);
    }

    #[test]
    fn essential_infimum_and_sum() {
        let cone = DiscreteCone::new(vec![rat(1, 3), rat(2, 3)]).unwrap();
        let f = ConeVec::from_ints(&[Some(5), Some(2)]);
        let d = dual_attain(&cone, &f, &LpTag::NegInf).unwrap();
        assert!(d.gap < 1e-12 && (d.norm_g - 1.0).abs() < 1e-12);
        let d = dual_attain(&cone, &f, &LpTag::int(1)).unwrap();
        assert!(d.gap < 1e-12);
    }

    #[test]
    fn boundary_vectors_are_rejected() {
        let f = ConeVec::from_ints(&[Some(0), Some(1)]);
        assert_eq!(
            dual_attain(&half(), &f, &LpTag::int(-1)),
            Err(Error::BoundaryCase)
        );
    }

    #[test]
    fn operator_norms() {
        let cone = half();
        let zero = DualVector::new(cone.clone(), ConeVec::zeros(2)).unwrap();
        assert_eq!(
            operator_norm(&zero, &LpTag::int(-1)).unwrap().closed_form,
            0.0
        );
        let l = DualVector::new(cone, ConeVec::from_ints(&[Some(1), Some(4)])).unwrap();
        let source: LpTag = "1/2".parse().unwrap();
        let op = operator_norm(&l, &source).unwrap();
        assert!((op.closed_form - 1.6).abs() < 1e-12);
        assert!(op.grid_inf >= op.closed_form * (1.0 - 1e-9));
    }

    #[test]
    fn bidual() {
        let p: LpTag = "1/2".parse().unwrap();
        let a = bidual_audit(&half(), &ConeVec::from_ints(&[Some(1), Some(1)]), &p).unwrap();
        assert_eq!(a.verdict, BidualVerdict::Equal);
        let a = bidual_audit(&half(), &ConeVec::from_ints(&[Some(2), Some(7)]), &p).unwrap();
        assert_eq!(a.verdict, BidualVerdict::Equal);
        let a = bidual_audit(&half(), &ConeVec::from_ints(&[Some(0), Some(1)]), &p).unwrap();
        assert_eq!(a.verdict, BidualVerdict::AtLeast);
    }
}
