//! Classical Hahn–Banach for polyhedral sublinear functionals, obtained by
//! extending `(t, v) -> t - T(v)` over the future cone `{ (t, v) : t >= p(v) }`.

use num::Zero;
use serde::{Deserialize, Serialize};

use super::extend::{show, unit, Engine, SIZE_CAP};
use super::lp::{LinearProgram, LpOutcome, Relation};
use crate::error::{Error, Result};
use crate::extreal::{rat, rational_serde, Rational};

/// `p(v) = max_j forms[j] . v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polyhedral {
    #[serde(with = "rational_serde::matrix")]
    pub forms: Vec<Vec<Rational>>,
}

impl Polyhedral {
    pub fn new(forms: Vec<Vec<Rational>>) -> Result<Self> {
        let d = forms
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Input("p needs at least one linear form".into()))?;
        if d == 0 {
            return Err(Error::Input("p must act on a nonzero dimension".into()));
        }
        if let Some(bad) = forms.iter().find(|f| f.len() != d) {
            return Err(Error::Dimension {
                expected: d,
                found: bad.len(),
            });
        }
        Ok(Polyhedral { forms })
    }

    /// `sum_i |x_i|`, the max of the `2^d` sign patterns.
    pub fn l1(d: usize) -> Self {
        let forms = (0..1u32 << d)
            .map(|mask| {
                (0..d)
                    .map(|i| rat(if mask >> i & 1 == 1 { -1 } else { 1 }, 1))
                    .collect()
            })
            .collect();
        Polyhedral { forms }
    }

    pub fn dim(&self) -> usize {
        self.forms[0].len()
    }

    pub fn eval(&self, v: &[Rational]) -> Rational {
        self.forms
            .iter()
            .map(|f| dot(f, v))
            .max()
            .expect("nonempty")
    }

    /// Whether `form . v <= p(v)` for all `v`, i.e. `form` is a convex combination of the forms.
    pub fn dominates(&self, form: &[Rational]) -> bool {
        self.dominates_on(
            &(0..self.dim())
                .map(|i| unit(self.dim(), i))
                .collect::<Vec<_>>(),
            form,
        )
    }

    /// Whether `values . y <= p(sum_i y_i basis_i)` for all `y`.
    fn dominates_on(&self, basis: &[Vec<Rational>], values: &[Rational]) -> bool {
        let k = self.forms.len();
        let mut lp = LinearProgram::new(vec![Rational::zero(); k]);
        lp.add(vec![rat(1, 1); k], Relation::Eq, rat(1, 1));
        for (b, t) in basis.iter().zip(values) {
            lp.add(
                self.forms.iter().map(|f| dot(f, b)).collect(),
                Relation::Eq,
                t.clone(),
            );
        }
        matches!(lp.solve(), LpOutcome::Optimal { .. })
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HahnBanach {
    /// The extension on the standard basis.
    #[serde(with = "rational_serde::vec")]
    pub extension: Vec<Rational>,
    /// Values of the extended map at `(p(u), u)` for `u = e_1, -e_1, e_2, ...`.
    #[serde(with = "rational_serde::vec")]
    pub future_values: Vec<Rational>,
    /// The values read at `e_i` and `-e_i` are negatives of each other.
    pub linear: bool,
    pub extends: bool,
    /// Exact certificate that the extension lies below `p` everywhere.
    pub dominated: bool,
    pub grid_points: usize,
    pub grid_ok: bool,
}

/// Extend `T`, given on `basis` by `values`, to all of `Q^d` below `p`.
pub fn hahn_banach(
    p: &Polyhedral,
    basis: &[Vec<Rational>],
    values: &[Rational],
) -> Result<HahnBanach> {
    let d = p.dim();
    if p.forms.len() + d + 1 > SIZE_CAP {
        return Err(Error::ProblemTooLarge(SIZE_CAP));
    }
    if basis.len() != values.len() {
        return Err(Error::Input(format!(
            "{} basis vectors but {} values",
            basis.len(),
            values.len()
        )));
    }
    if let Some(bad) = basis.iter().find(|b| b.len() != d) {
        return Err(Error::Dimension {
            expected: d,
            found: bad.len(),
        });
    }
    if !p.dominates_on(basis, values) {
        return Err(Error::PreconditionFailed(
            "T exceeds p somewhere on the subspace".into(),
        ));
    }

    // Coordinates (t, v) in Q^{1+d}; F is cut out by t - form . v >= 0.
    let ambient: Vec<Vec<Rational>> = p
        .forms
        .iter()
        .map(|f| {
            std::iter::once(rat(1, 1))
                .chain(f.iter().map(|x| -x))
                .collect()
        })
        .collect();
    let lift = |v: &[Rational], t: Rational| -> Vec<Rational> {
        std::iter::once(t).chain(v.iter().cloned()).collect()
    };
    let mut dirs = vec![lift(&vec![Rational::zero(); d], rat(1, 1))];
    dirs.extend(basis.iter().map(|b| lift(b, Rational::zero())));
    let coupling = p
        .forms
        .iter()
        .map(|f| {
            std::iter::once(rat(1, 1))
                .chain(basis.iter().map(|b| -dot(f, b)))
                .collect()
        })
        .collect();
    let mut engine_values = vec![rat(1, 1)];
    engine_values.extend(values.iter().map(|t| -t));
    let mut engine = Engine {
        ambient,
        free: vec![true; dirs.len()],
        dirs,
        coupling,
        values: engine_values,
        infinite: Vec::new(),
        lower: None,
        upper: None,
    };
    engine.check_hypothesis()?;

    let mut extension = Vec::with_capacity(d);
    let mut future_values = Vec::with_capacity(2 * d);
    let mut linear = true;
    for i in 0..d {
        let mut read = Vec::with_capacity(2);
        for sign in [1, -1] {
            let u: Vec<Rational> = unit(d, i).into_iter().map(|x| x * rat(sign, 1)).collect();
            let top = p.eval(&u);
            let point = lift(&u, top.clone());
            let step = engine.step(&point)?;
            let value = step.value.finite().cloned().ok_or_else(|| {
                Error::HypothesisFailed(format!("extension is infinite at {}", show(&point)))
            })?;
            engine.absorb(point, &step.value);
            read.push(top - &value);
            future_values.push(value);
        }
        linear &= read[0] == -read[1].clone();
        extension.push(read[0].clone());
    }

    let extends = basis
        .iter()
        .zip(values)
        .all(|(b, t)| dot(&extension, b) == *t);
    let dominated = p.dominates(&extension);
    let (mut grid_points, mut grid_ok) = (0, true);
    for k in [1i64, 2, 4] {
        for v in lattice_points(d, k) {
            grid_points += 1;
            grid_ok &= dot(&extension, &v) <= p.eval(&v);
        }
    }
    Ok(HahnBanach {
        extension,
        future_values,
        linear,
        extends,
        dominated,
        grid_points,
        grid_ok,
    })
}

/// `{-1, -1 + 1/k, ..., 1}^d`.
fn lattice_points(d: usize, k: i64) -> Vec<Vec<Rational>> {
    use itertools::Itertools;
    (0..d)
        .map(|_| (-k..=k).map(move |j| rat(j, k)))
        .multi_cartesian_product()
        .collect()
}
