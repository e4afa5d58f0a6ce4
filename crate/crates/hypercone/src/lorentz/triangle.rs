//! Norms on the triangle `T = { (t, x) : 0 <= x <= t }` and their duals under the
//! pairing `(t, x), (s, y) -> ts - xy`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 1-homogeneous norm on `T`, stored through its profile `h(r) = |(1, r)|` on `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TriangleNorm {
    /// `(t^p - x^p)^(1/p)` for finite `p >= 1`.
    Lp { p: f64 },
    /// `t`.
    Time,
    /// Piecewise linear profile through `(i / (n-1), values[i])`.
    Tabulated { values: Vec<f64> },
    /// `+inf` away from the origin.
    Infinite,
}

impl TriangleNorm {
    /// `|.|_p` for `p` in `[1, inf]`.
    pub fn lp(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            Ok(TriangleNorm::Time)
        } else if p >= 1.0 {
            Ok(TriangleNorm::Lp { p })
        } else {
            Err(Error::Input(format!("triangle norms need p >= 1, got {p}")))
        }
    }

    pub fn tabulated(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 || values.iter().any(|v| v.is_nan() || *v < 0.0) {
            return Err(Error::Input(
                "a tabulated profile needs at least two nonnegative values".into(),
            ));
        }
        Ok(TriangleNorm::Tabulated { values })
    }

    /// The conjugate `|.|_q` with `1/p + 1/q = 1`, when this is an `Lp` norm.
    pub fn conjugate(&self) -> Option<TriangleNorm> {
        match self {
            TriangleNorm::Lp { p } if *p == 1.0 => Some(TriangleNorm::Time),
            TriangleNorm::Lp { p } => Some(TriangleNorm::Lp { p: p / (p - 1.0) }),
            TriangleNorm::Time => Some(TriangleNorm::Lp { p: 1.0 }),
            _ => None,
        }
    }

    /// `h(r) = |(1, r)|`.
    pub fn profile(&self, r: f64) -> f64 {
        self.profile_near(r, 1.0 - r)
    }

    /// `h(r)` given also `delta = 1 - r`, which keeps precision next to the null edge.
    pub fn profile_near(&self, r: f64, delta: f64) -> f64 {
        match self {
            TriangleNorm::Lp { p } if *p == 1.0 => delta,
            TriangleNorm::Lp { p } if delta < 0.5 => {
                (-(p * (-delta).ln_1p()).exp_m1()).max(0.0).powf(1.0 / p)
            }
            TriangleNorm::Lp { p } => (1.0 - r.powf(*p)).max(0.0).powf(1.0 / p),
            TriangleNorm::Time => 1.0,
            TriangleNorm::Infinite => f64::INFINITY,
            TriangleNorm::Tabulated { values } => {
                let n = values.len() - 1;
                let from_end = delta * n as f64;
                if from_end <= 1.0 {
                    return values[n] + from_end * (values[n - 1] - values[n]);
                }
                let pos = r * n as f64;
                let i = (pos.floor() as usize).min(n - 1);
                let frac = pos - i as f64;
                values[i] * (1.0 - frac) + values[i + 1] * frac
            }
        }
    }
}

pub fn check_triangle(t: f64, x: f64) -> Result<()> {
    if t.is_finite() && x.is_finite() && 0.0 <= x && x <= t {
        Ok(())
    } else {
        Err(Error::OutsideTriangle(t, x))
    }
}

/// `|(t, x)|`, zero at the origin.
pub fn tri_norm(norm: &TriangleNorm, t: f64, x: f64) -> Result<f64> {
    check_triangle(t, x)?;
    Ok(match norm {
        _ if t == 0.0 => 0.0,
        TriangleNorm::Lp { p } if *p == 1.0 => t - x,
        TriangleNorm::Lp { p } => (t.powf(*p) - x.powf(*p)).max(0.0).powf(1.0 / p),
        other => t * other.profile(x / t),
    })
}

const GOLDEN_STEPS: usize = 90;
/// Distance from the null edge at which the infimum is probed when it is not attained.
const EDGE_PROBE: f64 = 1e-300;

/// `inf_r (s - r y) / h(r)` over `r` in `[0, 1]`, given `y` and `gap = s - y`, reading `h = inf`
/// as value `0` and skipping `h = 0`. The profile receives `r` and `1 - r`.
///
/// A grid locates the minimum and golden sections refine it, which is exact for concave
/// profiles since the ratio is then quasiconvex. When the infimum is only approached as
/// `r -> 1`, the probe at `1 - r = EDGE_PROBE` recovers it.
fn level_infimum(h: &dyn Fn(f64, f64) -> f64, y: f64, gap: f64, grid: usize) -> f64 {
    let ratio = |r: f64, delta: f64| {
        let hr = h(r, delta);
        if hr.is_infinite() {
            0.0
        } else if hr <= 0.0 {
            f64::INFINITY
        } else {
            (gap + delta * y).max(0.0) / hr
        }
    };
    let n = grid.max(2);
    let node = |i: usize| (i as f64 / n as f64, (n - i) as f64 / n as f64);
    let (best, mut value) = (0..=n).map(|i| (i, ratio(node(i).0, node(i).1))).fold(
        (0, f64::INFINITY),
        |acc, (i, v)| if v < acc.1 { (i, v) } else { acc },
    );
    if value == 0.0 {
        return value;
    }
    value = value.min(ratio(1.0, EDGE_PROBE));
    if value.is_infinite() {
        return value;
    }
    let (mut lo, mut hi) = (node(best.saturating_sub(1)).0, node((best + 1).min(n)).0);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..GOLDEN_STEPS {
        let a = hi - phi * (hi - lo);
        let b = lo + phi * (hi - lo);
        let (fa, fb) = (ratio(a, 1.0 - a), ratio(b, 1.0 - b));
        value = value.min(fa).min(fb);
        if fa <= fb {
            hi = b;
        } else {
            lo = a;
        }
    }
    value
}

/// `|(s, y)|_* = inf { ts - xy : |(t, x)| >= 1 }`.
pub fn tri_dual(norm: &TriangleNorm, s: f64, y: f64, grid: usize) -> Result<f64> {
    check_triangle(s, y)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    Ok(level_infimum(
        &|r, d| norm.profile_near(r, d),
        y,
        s - y,
        grid,
    ))
}

/// `|(t, x)|_**`, nesting two level-set minimizations.
pub fn tri_bidual(norm: &TriangleNorm, t: f64, x: f64, grid: usize) -> Result<f64> {
    check_triangle(t, x)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let dual_profile =
        |r: f64, delta: f64| level_infimum(&|u, d| norm.profile_near(u, d), r, delta, grid);
    Ok(level_infimum(&dual_profile, x, t - x, grid))
}

/// Whether the profile is non-increasing at the grid nodes.
pub fn is_x_decreasing(norm: &TriangleNorm, grid: usize) -> bool {
    let values: Vec<f64> = (0..=grid)
        .map(|i| norm.profile(i as f64 / grid as f64))
        .collect();
    values.windows(2).all(|w| w[1] <= w[0] + 1e-15)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BidualReport {
    pub x_decreasing: bool,
    pub points: usize,
    pub max_gap: f64,
    /// The sample point with the largest gap, with `|.|` and `|.|_**` there.
    pub witness: Option<(f64, f64, f64, f64)>,
    pub fixed_point: bool,
}

/// Compare `|.|_**` with `|.|` at the points `(1, i / samples)`.
pub fn bidual_fixed_point(
    norm: &TriangleNorm,
    samples: usize,
    grid: usize,
    tol: f64,
) -> Result<BidualReport> {
    let mut report = BidualReport {
        x_decreasing: is_x_decreasing(norm, grid),
        points: 0,
        max_gap: 0.0,
        witness: None,
        fixed_point: true,
    };
    for i in 0..samples {
        let x = i as f64 / samples as f64;
        let a = tri_norm(norm, 1.0, x)?;
        let b = tri_bidual(norm, 1.0, x, grid)?;
        report.points += 1;
        let gap = if a == b {
            0.0
        } else if a.is_infinite() || b.is_infinite() {
            f64::INFINITY
        } else {
            (a - b).abs()
        };
        if report.witness.is_none() || gap > report.max_gap {
            report.max_gap = gap;
            report.witness = Some((1.0, x, a, b));
        }
    }
    report.fixed_point = report.max_gap <= tol;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualityAudit {
    pub norm: TriangleNorm,
    pub conjugate: TriangleNorm,
    pub points: usize,
    /// Largest `| |.|_* - |.|_q |` relative to `max(1, |.|_q)`.
    pub dual_error: f64,
    /// Largest `| |.|_** - |.| |` on the same scale.
    pub bidual_error: f64,
}

/// Dual and bidual of an `Lp` triangle norm against the closed forms on the points
/// `(1 + i/k, j/k (1 + i/k))` of a `k x k` lattice, `k = ceil(sqrt(points))`.
pub fn triangle_duality_audit(
    norm: &TriangleNorm,
    points: usize,
    grid: usize,
) -> Result<DualityAudit> {
    let conjugate = norm
        .conjugate()
        .ok_or_else(|| Error::Input("closed-form duals exist only for Lp norms".into()))?;
    let k = (points as f64).sqrt().ceil() as usize;
    let mut audit = DualityAudit {
        norm: norm.clone(),
        conjugate: conjugate.clone(),
        points: 0,
        dual_error: 0.0,
        bidual_error: 0.0,
    };
    for i in 0..k {
        for j in 0..=k {
            let t = 1.0 + i as f64 / k as f64;
            let x = t * j as f64 / k as f64;
            let scaled = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
            audit.dual_error = audit.dual_error.max(scaled(
                tri_dual(norm, t, x, grid)?,
                tri_norm(&conjugate, t, x)?,
            ));
            audit.bidual_error = audit
                .bidual_error
                .max(scaled(tri_bidual(norm, t, x, grid)?, tri_norm(norm, t, x)?));
            audit.points += 1;
        }
    }
    Ok(audit)
}
