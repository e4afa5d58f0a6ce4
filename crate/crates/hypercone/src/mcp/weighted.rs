use itertools::Itertools;
use serde::Serialize;

use super::instances::DualFunctional;
use super::{check_mcp, McpBudget, McpReport};
use crate::cone::{ConeVec, DiscreteCone};
use crate::error::{Error, Result};
use crate::extreal::{rat, ExtNonneg};

/// `g -> sum_{i in S} mu_i w_i g_i`, or `inf` as soon as `g` is nonzero somewhere off `S`.
#[derive(Clone, Debug)]
pub struct WeightedFunctionalSpec {
    pub cone: DiscreteCone,
    pub w: ConeVec,
    pub support: Vec<bool>,
}

impl WeightedFunctionalSpec {
    pub fn new(cone: DiscreteCone, w: ConeVec, support: Vec<bool>) -> Result<Self> {
        cone.check(&w)?;
        if support.len() != cone.dim() {
            return Err(Error::Dimension {
                expected: cone.dim(),
                found: support.len(),
            });
        }
        Ok(WeightedFunctionalSpec { cone, w, support })
    }

    pub fn eval(&self, g: &ConeVec) -> ExtNonneg {
        let mut total = ExtNonneg::zero();
        for (i, gi) in g.coords().iter().enumerate() {
            if self.support[i] {
                total = &total + &(&self.w.coords()[i] * gi).scale(&self.cone.weights()[i]);
            } else if !gi.is_zero() {
                return ExtNonneg::inf();
            }
        }
        total
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightedProjection {
    /// The projected functional is the pairing with `f`.
    pub f: ConeVec,
    pub mcp: McpReport,
    /// The pairing with `f` stays below the input on the sample grid.
    pub below_on_grid: bool,
    /// Raising any finite coordinate of `f` breaks the bound at the matching unit vector.
    pub maximal: bool,
    pub grid_points: usize,
}

fn unit(n: usize, i: usize) -> ConeVec {
    let mut v = ConeVec::zeros(n);
    v.0[i] = ExtNonneg::one();
    v
}

/// Largest dual vector whose pairing stays below the weighted functional.
///
/// Pairings are determined by their values on unit vectors, so `f_i = L(e_i) / mu_i`
/// is the only candidate; it is then audited on a grid and by the chain checker.
pub fn pr_project_weighted(
    spec: &WeightedFunctionalSpec,
    budget: &McpBudget,
) -> Result<WeightedProjection> {
    let n = spec.cone.dim();
    let f = ConeVec(
        (0..n)
            .map(|i| {
                spec.eval(&unit(n, i))
                    .scale(&spec.cone.weights()[i].recip())
            })
            .collect(),
    );
    let grid_values = [
        ExtNonneg::zero(),
        ExtNonneg::ratio(1, 2),
        ExtNonneg::one(),
        ExtNonneg::int(3),
        ExtNonneg::inf(),
    ];
    let grid: Vec<ConeVec> = if n <= 5 {
        (0..n)
            .map(|_| grid_values.iter().cloned())
            .multi_cartesian_product()
            .map(ConeVec)
            .collect()
    } else {
        (0..n)
            .flat_map(|i| grid_values.iter().map(move |v| (i, v.clone())))
            .map(|(i, v)| {
                let mut g = ConeVec::zeros(n);
                g.0[i] = v;
                g
            })
            .collect()
    };
    let below_on_grid = grid
        .iter()
        .all(|g| spec.cone.pairing(&f, g) <= spec.eval(g));
    let maximal = (0..n).all(|i| match f.coords()[i].finite() {
        None => true,
        Some(fi) => {
            let mut bumped = f.clone();
            bumped.0[i] = ExtNonneg::new(fi + rat(1, 1)).expect("nonnegative");
            spec.cone.pairing(&bumped, &unit(n, i)) > spec.eval(&unit(n, i))
        }
    });
    let functional = DualFunctional::new(spec.cone.clone(), f.clone())?;
    let mcp = check_mcp(&functional, budget)?;
    Ok(WeightedProjection {
        f,
        mcp,
        below_on_grid,
        maximal,
        grid_points: grid.len(),
    })
}

/// A decreasing sequence in `[0, inf]^N` on which the sum does not pass to the infimum.
#[derive(Clone, Debug, Serialize)]
pub struct FilteredInfDemo {
    pub window: usize,
    /// `A_i` on the window: `i` zeros, then `inf`. Every coordinate past the window is `inf`.
    pub sets: Vec<ConeVec>,
    /// The sum of each `A_i` over all coordinates, including those past the window.
    pub values: Vec<ExtNonneg>,
    /// Sums restricted to the window.
    pub window_values: Vec<ExtNonneg>,
    pub filtered: bool,
    pub infimum: ConeVec,
    pub value_at_infimum: ExtNonneg,
    pub infimum_of_values: ExtNonneg,
}

impl FilteredInfDemo {
    pub fn pair(&self) -> (ExtNonneg, ExtNonneg) {
        (
            self.value_at_infimum.clone(),
            self.infimum_of_values.clone(),
        )
    }
}

pub fn filtered_inf_demo(window: usize) -> Result<FilteredInfDemo> {
    if window == 0 {
        return Err(Error::Input(
            "the window needs at least one coordinate".into(),
        ));
    }
    let sets: Vec<ConeVec> = (1..=window)
        .map(|i| {
            ConeVec(
                (1..=window)
                    .map(|j| {
                        if j <= i {
                            ExtNonneg::zero()
                        } else {
                            ExtNonneg::inf()
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    let tail = ExtNonneg::inf();
    let values: Vec<ExtNonneg> = sets
        .iter()
        .map(|a| a.coords().iter().cloned().sum::<ExtNonneg>() + tail.clone())
        .collect();
    let window_values: Vec<ExtNonneg> = sets
        .iter()
        .map(|a| a.coords().iter().cloned().sum())
        .collect();
    let filtered = sets.windows(2).all(|w| w[1].leq(&w[0]));
    // Coordinate j vanishes from A_j on, so the infimum over all i is zero everywhere.
    let infimum = ConeVec::inf_of(window, &sets);
    let value_at_infimum: ExtNonneg = infimum.coords().iter().cloned().sum();
    let infimum_of_values = values.iter().cloned().min().unwrap_or_else(ExtNonneg::inf);
    Ok(FilteredInfDemo {
        window,
        sets,
        values,
        window_values,
        filtered,
        infimum,
        value_at_infimum,
        infimum_of_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(n: usize) -> DiscreteCone {
        DiscreteCone::uniform(n)
    }

    #[test]
    fn full_support_returns_weights() {
        let w = ConeVec::from_ints(&[Some(2), Some(0), Some(5)]);
        let spec = WeightedFunctionalSpec::new(uniform(3), w.clone(), vec![true; 3]).unwrap();
        let p = pr_project_weighted(&spec, &McpBudget::new(64)).unwrap();
        assert_eq!(p.f, w);
        assert!(p.mcp.passed() && p.below_on_grid && p.maximal);
    }

    #[test]
    fn missing_first_index() {
        let n = 4;
        let spec = WeightedFunctionalSpec::new(
            uniform(n),
            ConeVec(vec![ExtNonneg::one(); n]),
            vec![false, true, true, true],
        )
        .unwrap();
        let p = pr_project_weighted(&spec, &McpBudget::new(64)).unwrap();
        assert_eq!(p.f, ConeVec::from_ints(&[None, Some(1), Some(1), Some(1)]));
        assert!(p.mcp.passed() && p.below_on_grid && p.maximal);
    }

    #[test]
    fn empty_support() {
        let spec = WeightedFunctionalSpec::new(
            DiscreteCone::new(vec![rat(1, 3), rat(2, 1)]).unwrap(),
            ConeVec::from_ints(&[Some(4), Some(1)]),
            vec![false, false],
        )
        .unwrap();
        let p = pr_project_weighted(&spec, &McpBudget::new(16)).unwrap();
        assert_eq!(p.f, ConeVec::infs(2));
        assert_eq!(spec.eval(&ConeVec::zeros(2)), ExtNonneg::zero());
    }

    #[test]
    fn weights_divide_out() {
        let spec = WeightedFunctionalSpec::new(
            DiscreteCone::new(vec![rat(1, 2), rat(3, 1)]).unwrap(),
            ConeVec(vec![ExtNonneg::ratio(3, 4), ExtNonneg::int(2)]),
            vec![true, true],
        )
        .unwrap();
        let p = pr_project_weighted(&spec, &McpBudget::new(16)).unwrap();
        assert_eq!(p.f, spec.w);
    }

    #[test]
    fn filtered_infimum_obstruction() {
        let d = filtered_inf_demo(4).unwrap();
        assert_eq!(d.pair(), (ExtNonneg::zero(), ExtNonneg::inf()));
        assert!(d.filtered);
        assert_eq!(d.window_values.last(), Some(&ExtNonneg::zero()));
        assert_eq!(d.sets[0], ConeVec::from_ints(&[Some(0), None, None, None]));
    }
}
