//! One-direction-at-a-time extension of a linear map from a subwedge.
//!
//! The value assigned to a new direction `v` is
//! `inf { (M(c) + psi(d)) - (M(a) + phi(b)) : a + v + b <= c + d }`
//! over `a, c` in the current subwedge and `b, d` in the ambient wedge. With
//! linear bounds every term is linear in the unknowns, so the infimum is the
//! optimum of a single rational LP. An empty feasible set gives `inf`.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::lp::{LinearProgram, LpOutcome, Relation};
use super::DualVector;
use crate::cone::{ConeVec, DiscreteCone};
use crate::error::{Error, Result};
use crate::extreal::{rat, rational_serde, ExtNonneg, Rational};
use crate::mcp::{pr_project_weighted, McpBudget, McpReport, WeightedFunctionalSpec};

/// Largest `generators + dimension` accepted by the LP-backed routines.
pub const SIZE_CAP: usize = 12;

/// A finitely generated subwedge of `Q_{>=0}^n` and the values of a linear map on its generators.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubwedgeSpec {
    pub generators: Vec<GeneratorValue>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorValue {
    #[serde(with = "rational_serde::vec")]
    pub g: Vec<Rational>,
    #[serde(with = "rational_serde")]
    pub value: Rational,
}

impl SubwedgeSpec {
    pub fn new(pairs: Vec<(Vec<Rational>, Rational)>) -> Self {
        SubwedgeSpec {
            generators: pairs
                .into_iter()
                .map(|(g, value)| GeneratorValue { g, value })
                .collect(),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.generators.len() + n > SIZE_CAP {
            return Err(Error::ProblemTooLarge(SIZE_CAP));
        }
        for gv in &self.generators {
            if gv.g.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: gv.g.len(),
                });
            }
            if gv.g.iter().any(Signed::is_negative) || gv.value.is_negative() {
                return Err(Error::Input(
                    "generators and their values must be nonnegative".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Lower bound: the zero map or a pairing with a finite weight vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "w", rename_all = "snake_case")]
pub enum LowerBound {
    Zero,
    Weighted(ConeVec),
}

/// Upper bound: the map that is `inf` off the origin, or a pairing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "h", rename_all = "snake_case")]
pub enum UpperBound {
    Infinite,
    Dual(ConeVec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundPair {
    pub lower: LowerBound,
    pub upper: UpperBound,
}

impl BoundPair {
    pub fn trivial() -> Self {
        BoundPair {
            lower: LowerBound::Zero,
            upper: UpperBound::Infinite,
        }
    }

    /// Both bounds as weight vectors on `cone`.
    pub fn weights(&self, cone: &DiscreteCone) -> Result<(ConeVec, ConeVec)> {
        let n = cone.dim();
        let lower = match &self.lower {
            LowerBound::Zero => ConeVec::zeros(n),
            LowerBound::Weighted(w) => {
                cone.check(w)?;
                if !w.is_finite() {
                    return Err(Error::Input(
                        "the lower bound must have finite weights".into(),
                    ));
                }
                w.clone()
            }
        };
        let upper = match &self.upper {
            UpperBound::Infinite => ConeVec::infs(n),
            UpperBound::Dual(h) => {
                cone.check(h)?;
                h.clone()
            }
        };
        Ok((lower, upper))
    }
}

/// The minimizing pair behind an extension value, in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtensionWitness {
    #[serde(with = "rational_serde::vec")]
    pub a: Vec<Rational>,
    #[serde(with = "rational_serde::vec")]
    pub b: Vec<Rational>,
    #[serde(with = "rational_serde::vec")]
    pub c: Vec<Rational>,
    #[serde(with = "rational_serde::vec")]
    pub d: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtensionStep {
    pub value: ExtNonneg,
    /// Absent when no admissible pair exists and the value is `inf`.
    pub witness: Option<ExtensionWitness>,
}

/// A subwedge `{ sum_k z_k dir_k : coupling . z >= 0 }` of an ambient wedge `{ x : rows . x >= 0 }`,
/// with a linear map given on the directions.
#[derive(Clone, Debug)]
pub(crate) struct Engine {
    pub ambient: Vec<Vec<Rational>>,
    pub dirs: Vec<Vec<Rational>>,
    pub free: Vec<bool>,
    pub coupling: Vec<Vec<Rational>>,
    pub values: Vec<Rational>,
    /// Directions on which the map is `inf`. Pairs using them never lower the infimum.
    pub infinite: Vec<Vec<Rational>>,
    /// `mu_i w_i` per coordinate, when the lower bound is not zero.
    pub lower: Option<Vec<Rational>>,
    /// `mu_i h_i` per coordinate, `None` where the upper bound is infinite.
    pub upper: Option<Vec<Option<Rational>>>,
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, Copy)]
enum Col {
    A(usize, bool),
    C(usize, bool),
    B(usize),
    D(usize),
}

impl Engine {
    pub fn orthant(cone: &DiscreteCone, spec: &SubwedgeSpec, bounds: &BoundPair) -> Result<Self> {
        let n = cone.dim();
        spec.validate(n)?;
        let (w, h) = bounds.weights(cone)?;
        let mu = cone.weights();
        let lower = match bounds.lower {
            LowerBound::Zero => None,
            LowerBound::Weighted(_) => Some(
                (0..n)
                    .map(|i| w.coords()[i].finite().expect("checked finite") * &mu[i])
                    .collect(),
            ),
        };
        let upper = match bounds.upper {
            UpperBound::Infinite => None,
            UpperBound::Dual(_) => Some(
                (0..n)
                    .map(|i| h.coords()[i].finite().map(|x| x * &mu[i]))
                    .collect(),
            ),
        };
        Ok(Engine {
            ambient: (0..n).map(|i| unit(n, i)).collect(),
            dirs: spec.generators.iter().map(|g| g.g.clone()).collect(),
            free: vec![false; spec.generators.len()],
            coupling: Vec::new(),
            values: spec.generators.iter().map(|g| g.value.clone()).collect(),
            infinite: Vec::new(),
            lower,
            upper,
        })
    }

    fn dim(&self) -> usize {
        self.ambient.first().map_or(0, Vec::len)
    }

    fn columns(&self) -> Vec<Col> {
        let mut cols = Vec::new();
        for side in 0..2 {
            for (k, &free) in self.free.iter().enumerate() {
                let make = |neg| {
                    if side == 0 {
                        Col::A(k, neg)
                    } else {
                        Col::C(k, neg)
                    }
                };
                cols.push(make(false));
                if free {
                    cols.push(make(true));
                }
            }
        }
        if let Some(lower) = &self.lower {
            cols.extend((0..lower.len()).map(Col::B));
        }
        if let Some(upper) = &self.upper {
            cols.extend(
                upper
                    .iter()
                    .enumerate()
                    .filter(|(_, h)| h.is_some())
                    .map(|(i, _)| Col::D(i)),
            );
        }
        cols
    }

    /// Contribution of one column to the ambient point `c + d - a - b`.
    fn ambient_image(&self, col: Col) -> Vec<Rational> {
        let n = self.dim();
        let signed = |dir: &Vec<Rational>, positive: bool| -> Vec<Rational> {
            dir.iter()
                .map(|x| if positive { x.clone() } else { -x })
                .collect()
        };
        match col {
            Col::A(k, neg) => signed(&self.dirs[k], neg),
            Col::C(k, neg) => signed(&self.dirs[k], !neg),
            Col::B(i) => signed(&unit(n, i), false),
            Col::D(i) => unit(n, i),
        }
    }

    fn cost(&self, col: Col) -> Rational {
        match col {
            Col::A(k, neg) => {
                if neg {
                    self.values[k].clone()
                } else {
                    -self.values[k].clone()
                }
            }
            Col::C(k, neg) => {
                if neg {
                    -self.values[k].clone()
                } else {
                    self.values[k].clone()
                }
            }
            Col::B(i) => -self.lower.as_ref().expect("lower column")[i].clone(),
            Col::D(i) => self.upper.as_ref().expect("upper column")[i]
                .clone()
                .expect("finite upper column"),
        }
    }

    /// The LP over pairs with `a + v + b <= c + d`; `v = None` means `v = 0` with normalization.
    fn program(&self, v: Option<&[Rational]>) -> (LinearProgram, Vec<Col>) {
        let cols = self.columns();
        let mut lp = LinearProgram::new(cols.iter().map(|&c| self.cost(c)).collect());
        let images: Vec<Vec<Rational>> = cols.iter().map(|&c| self.ambient_image(c)).collect();
        for row in &self.ambient {
            let coeffs = images.iter().map(|img| dot(row, img)).collect();
            let rhs = v.map_or_else(Rational::zero, |v| dot(row, v));
            lp.add(coeffs, Relation::Ge, rhs);
        }
        for side in 0..2 {
            for row in &self.coupling {
                let coeffs = cols
                    .iter()
                    .map(|&c| match c {
                        Col::A(k, neg) if side == 0 => {
                            if neg {
                                -row[k].clone()
                            } else {
                                row[k].clone()
                            }
                        }
                        Col::C(k, neg) if side == 1 => {
                            if neg {
                                -row[k].clone()
                            } else {
                                row[k].clone()
                            }
                        }
                        _ => Rational::zero(),
                    })
                    .collect();
                lp.add(coeffs, Relation::Ge, Rational::zero());
            }
        }
        if v.is_none() {
            lp.add(vec![rat(1, 1); cols.len()], Relation::Le, rat(1, 1));
        }
        (lp, cols)
    }

    fn witness(&self, cols: &[Col], x: &[Rational]) -> ExtensionWitness {
        let n = self.dim();
        let mut w = ExtensionWitness {
            a: vec![Rational::zero(); n],
            b: vec![Rational::zero(); n],
            c: vec![Rational::zero(); n],
            d: vec![Rational::zero(); n],
        };
        for (&col, xj) in cols.iter().zip(x) {
            if xj.is_zero() {
                continue;
            }
            let (target, dir, sign) = match col {
                Col::A(k, neg) => (&mut w.a, self.dirs[k].clone(), neg),
                Col::C(k, neg) => (&mut w.c, self.dirs[k].clone(), neg),
                Col::B(i) => (&mut w.b, unit(n, i), false),
                Col::D(i) => (&mut w.d, unit(n, i), false),
            };
            for (t, y) in target.iter_mut().zip(&dir) {
                if sign {
                    *t -= xj * y;
                } else {
                    *t += xj * y;
                }
            }
        }
        w
    }

    /// Fails when some `a + b <= c + d` has `M(a) + phi(b) > M(c) + psi(d)`.
    pub fn check_hypothesis(&self) -> Result<()> {
        let (lp, cols) = self.program(None);
        match lp.solve_lexmin() {
            LpOutcome::Optimal { value, x } if value.is_negative() => {
                let w = self.witness(&cols, &x);
                Err(Error::HypothesisFailed(format!(
                    "a = {}, b = {}, c = {}, d = {} with a + b <= c + d but the left side exceeds the right by {}",
                    show(&w.a),
                    show(&w.b),
                    show(&w.c),
                    show(&w.d),
                    -value
                )))
            }
            LpOutcome::Optimal { .. } => Ok(()),
            other => {
                unreachable!("the normalized hypothesis program is feasible and bounded: {other:?}")
            }
        }
    }

    pub fn step(&self, v: &[Rational]) -> Result<ExtensionStep> {
        if v.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: v.len(),
            });
        }
        let (lp, cols) = self.program(Some(v));
        match lp.solve_lexmin() {
            LpOutcome::Infeasible => Ok(ExtensionStep {
                value: ExtNonneg::inf(),
                witness: None,
            }),
            LpOutcome::Unbounded => Err(Error::HypothesisFailed(
                "the extension program is unbounded below".into(),
            )),
            LpOutcome::Optimal { value, x } => Ok(ExtensionStep {
                value: ExtNonneg::new(value)
                    .map_err(|_| Error::HypothesisFailed("negative extension value".into()))?,
                witness: Some(self.witness(&cols, &x)),
            }),
        }
    }

    /// Add `v` as a new direction carrying `value`.
    pub fn absorb(&mut self, v: Vec<Rational>, value: &ExtNonneg) {
        match value.finite() {
            Some(x) => {
                self.dirs.push(v);
                self.free.push(false);
                self.values.push(x.clone());
                for row in &mut self.coupling {
                    row.push(Rational::zero());
                }
            }
            None => self.infinite.push(v),
        }
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<Rational> {
    (0..n).map(|j| rat(i64::from(i == j), 1)).collect()
}

pub(crate) fn show(v: &[Rational]) -> String {
    format!(
        "({})",
        v.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    )
}

/// The value forced on `v` by the spec and bounds, checking the extension hypothesis first.
pub fn extension_step(
    cone: &DiscreteCone,
    spec: &SubwedgeSpec,
    bounds: &BoundPair,
    v: &[Rational],
) -> Result<ExtensionStep> {
    if v.iter().any(Signed::is_negative) {
        return Err(Error::Input("the new direction must be nonnegative".into()));
    }
    let engine = Engine::orthant(cone, spec, bounds)?;
    engine.check_hypothesis()?;
    engine.step(v)
}

#[derive(Clone, Debug, Serialize)]
pub struct Extension {
    pub dual: DualVector,
    /// `(i, value at e_i)` in the order the unit vectors were added.
    pub steps: Vec<(usize, ExtNonneg)>,
    pub extends: bool,
    pub within_bounds: bool,
    pub grid_points: usize,
    pub projection_mcp: McpReport,
}

/// Extend along `e_{order[0]}, e_{order[1]}, ...` and read off the representing vector.
pub fn extend_all(
    cone: &DiscreteCone,
    spec: &SubwedgeSpec,
    bounds: &BoundPair,
    order: &[usize],
) -> Result<Extension> {
    let n = cone.dim();
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::Input(format!(
                "basis order {order:?} is not a permutation of 0..{n}"
            )));
        }
    }
    if order.len() != n {
        return Err(Error::Input(format!(
            "basis order {order:?} is not a permutation of 0..{n}"
        )));
    }
    let mut engine = Engine::orthant(cone, spec, bounds)?;
    engine.check_hypothesis()?;
    let mut steps = Vec::with_capacity(n);
    let mut at_units = vec![ExtNonneg::zero(); n];
    for &i in order {
        let e = unit(n, i);
        let step = engine.step(&e)?;
        engine.absorb(e, &step.value);
        at_units[i] = step.value.clone();
        steps.push((i, step.value));
    }
    let f = ConeVec(
        (0..n)
            .map(|i| at_units[i].scale(&cone.weights()[i].recip()))
            .collect(),
    );
    let projected = pr_project_weighted(
        &WeightedFunctionalSpec::new(cone.clone(), f.clone(), vec![true; n])?,
        &McpBudget::new(32),
    )?;
    let dual = DualVector::new(cone.clone(), projected.f)?;
    let extends = spec
        .generators
        .iter()
        .all(|g| dual.eval_rational(&g.g) == ExtNonneg::new(g.value.clone()).expect("nonnegative"));
    let (lower, upper) = bounds.weights(cone)?;
    let grid = sample_grid(n);
    let within_bounds = grid.iter().all(|g| {
        let value = dual.eval(g);
        cone.pairing(&lower, g) <= value && value <= cone.pairing(&upper, g)
    });
    Ok(Extension {
        dual,
        steps,
        extends,
        within_bounds,
        grid_points: grid.len(),
        projection_mcp: projected.mcp,
    })
}

/// `{0, 1/2, 1, 3, inf}^n` for small `n`, scaled unit vectors otherwise.
pub(crate) fn sample_grid(n: usize) -> Vec<ConeVec> {
    use itertools::Itertools;
    let values = [
        ExtNonneg::zero(),
        ExtNonneg::ratio(1, 2),
        ExtNonneg::one(),
        ExtNonneg::int(3),
        ExtNonneg::inf(),
    ];
    if n <= 4 {
        (0..n)
            .map(|_| values.iter().cloned())
            .multi_cartesian_product()
            .map(ConeVec)
            .collect()
    } else {
        (0..n)
            .cartesian_product(values.iter().cloned())
            .map(|(i, x)| {
                let mut g = ConeVec::zeros(n);
                g.0[i] = x;
                g
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn diagonal_generator() {
        let cone = DiscreteCone::uniform(2);
        let spec = SubwedgeSpec::new(vec![(q(&[1, 1]), rat(2, 1))]);
        let step = extension_step(&cone, &spec, &BoundPair::trivial(), &q(&[1, 0])).unwrap();
        assert_eq!(step.value, ExtNonneg::int(2));
        let w = step.witness.unwrap();
        assert_eq!((w.a, w.c), (q(&[0, 0]), q(&[1, 1])));
    }

    #[test]
    fn values_inside_the_subwedge_are_kept() {
        let cone = DiscreteCone::uniform(3);
        let spec = SubwedgeSpec::new(vec![(q(&[1, 2, 0]), rat(3, 1)), (q(&[0, 1, 1]), rat(1, 1))]);
        let step = extension_step(&cone, &spec, &BoundPair::trivial(), &q(&[2, 5, 1])).unwrap();
        assert_eq!(step.value, ExtNonneg::int(7));
    }

    #[test]
    fn uncovered_direction_is_infinite() {
        let cone = DiscreteCone::uniform(2);
        let spec = SubwedgeSpec::new(vec![(q(&[1, 0]), rat(1, 1))]);
        let step = extension_step(&cone, &spec, &BoundPair::trivial(), &q(&[0, 1])).unwrap();
        assert_eq!(
            step,
            ExtensionStep {
                value: ExtNonneg::inf(),
                witness: None
            }
        );
    }

    #[test]
    fn non_monotone_values_fail_the_hypothesis() {
        let cone = DiscreteCone::uniform(2);
        let spec = SubwedgeSpec::new(vec![(q(&[1, 0]), rat(3, 1)), (q(&[1, 1]), rat(1, 1))]);
        let err = extension_step(&cone, &spec, &BoundPair::trivial(), &q(&[0, 1])).unwrap_err();
        assert!(matches!(err, Error::HypothesisFailed(_)), "{err}");
    }

    #[test]
    fn pinned_bounds() {
        let cone = DiscreteCone::new(vec![rat(1, 2), rat(2, 1), rat(1, 1)]).unwrap();
        let f = ConeVec(vec![
            ExtNonneg::int(3),
            ExtNonneg::ratio(1, 2),
            ExtNonneg::int(2),
        ]);
        let spec = SubwedgeSpec::new(vec![(q(&[1, 1, 0]), rat(5, 2))]);
        let bounds = BoundPair {
            lower: LowerBound::Weighted(f.clone()),
            upper: UpperBound::Dual(f.clone()),
        };
        let ext = extend_all(&cone, &spec, &bounds, &[2, 0, 1]).unwrap();
        assert_eq!(ext.dual.f, f);
        assert!(ext.extends && ext.within_bounds && ext.projection_mcp.passed());
    }

    #[test]
    fn both_orders_are_admissible() {
        let cone = DiscreteCone::uniform(2);
        let spec = SubwedgeSpec::new(vec![(q(&[1, 1]), rat(2, 1))]);
        let a = extend_all(&cone, &spec, &BoundPair::trivial(), &[0, 1]).unwrap();
        let b = extend_all(&cone, &spec, &BoundPair::trivial(), &[1, 0]).unwrap();
        assert_eq!(a.dual.f, ConeVec::from_ints(&[Some(2), Some(0)]));
        assert_eq!(b.dual.f, ConeVec::from_ints(&[Some(0), Some(2)]));
        assert!(a.extends && b.extends && a.within_bounds && b.within_bounds);
    }

    #[test]
    fn size_cap() {
        let cone = DiscreteCone::uniform(6);
        let gens = (0..7).map(|_| (vec![rat(1, 1); 6], rat(1, 1))).collect();
        let err = extension_step(
            &cone,
            &SubwedgeSpec::new(gens),
            &BoundPair::trivial(),
            &vec![rat(1, 1); 6],
        )
        .unwrap_err();
        assert_eq!(err, Error::ProblemTooLarge(SIZE_CAP));
    }
}
