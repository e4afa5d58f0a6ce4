//! Dense two-phase simplex over exact rationals.
//!
//! Pivoting follows Bland's rule, so the method terminates on degenerate
//! problems. [`LinearProgram::solve_lexmin`] additionally returns the
//! lexicographically smallest optimal point, which makes outputs reproducible
//! when the optimum is not unique.

use num::{Signed, Zero};

use crate::extreal::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rel: Relation,
    pub rhs: Rational,
}

/// Minimize `objective . x` subject to the constraints and `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

struct Tableau {
    /// Each row holds the column coefficients followed by the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, obj: &mut [Rational], r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &p;
        }
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut [Rational]| {
            let f = row[c].clone();
            if !f.is_zero() {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(obj);
        self.basis[r] = c;
    }

    /// Reduced-cost row for `cost`, with the negated objective value in the last slot.
    fn objective_row(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut obj: Vec<Rational> = cost.to_vec();
        obj.push(Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if !cb.is_zero() {
                for (x, y) in obj.iter_mut().zip(row) {
                    *x -= cb * y;
                }
            }
        }
        obj
    }

    /// Returns `false` when the objective is unbounded below.
    fn optimize(&mut self, obj: &mut [Rational], active: &[bool]) -> bool {
        loop {
            let Some(entering) = (0..self.cols).find(|&j| active[j] && obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(Rational, usize, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = &row[entering];
                if a.is_positive() {
                    let ratio = &row[self.cols] / a;
                    let better = match &best {
                        None => true,
                        Some((r, b, _)) => ratio < *r || (ratio == *r && self.basis[i] < *b),
                    };
                    if better {
                        best = Some((ratio, self.basis[i], i));
                    }
                }
            }
            match best {
                Some((_, _, r)) => self.pivot(obj, r, entering),
                None => return false,
            }
        }
    }
}

impl LinearProgram {
    pub fn new(objective: Vec<Rational>) -> Self {
        LinearProgram {
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, rel: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.vars(), "constraint width");
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    pub fn solve(&self) -> LpOutcome {
        let n = self.vars();
        let m = self.constraints.len();
        // Normalize to nonnegative right-hand sides.
        let normalized: Vec<Constraint> = self
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    Constraint {
                        coeffs: c.coeffs.iter().map(|x| -x).collect(),
                        rel: match c.rel {
                            Relation::Le => Relation::Ge,
                            Relation::Ge => Relation::Le,
                            Relation::Eq => Relation::Eq,
                        },
                        rhs: -c.rhs.clone(),
                    }
                } else {
                    c.clone()
                }
            })
            .collect();
        let slacks = normalized.iter().filter(|c| c.rel != Relation::Eq).count();
        let artificials = normalized.iter().filter(|c| c.rel != Relation::Le).count();
        let cols = n + slacks + artificials;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut s, mut a) = (n, n + slacks);
        for c in &normalized {
            let mut row = vec![Rational::zero(); cols + 1];
            row[..n].clone_from_slice(&c.coeffs);
            row[cols] = c.rhs.clone();
            match c.rel {
                Relation::Le => {
                    row[s] = Rational::from_integer(1.into());
                    basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = Rational::from_integer((-1).into());
                    s += 1;
                    row[a] = Rational::from_integer(1.into());
                    basis.push(a);
                    a += 1;
                }
                Relation::Eq => {
                    row[a] = Rational::from_integer(1.into());
                    basis.push(a);
                    a += 1;
                }
            }
            rows.push(row);
        }
        let mut t = Tableau { rows, basis, cols };
        let is_artificial = |j: usize| j >= n + slacks;

        if artificials > 0 {
            let phase1: Vec<Rational> = (0..cols)
                .map(|j| Rational::from_integer(if is_artificial(j) { 1 } else { 0 }.into()))
                .collect();
            let mut obj = t.objective_row(&phase1);
            t.optimize(&mut obj, &vec![true; cols]);
            if !obj[cols].is_zero() {
                return LpOutcome::Infeasible;
            }
            // Drive remaining artificials out of the basis, dropping redundant rows.
            let mut r = 0;
            while r < t.rows.len() {
                if is_artificial(t.basis[r]) {
                    match (0..n + slacks).find(|&j| !t.rows[r][j].is_zero()) {
                        Some(j) => t.pivot(&mut obj, r, j),
                        None => {
                            t.rows.remove(r);
                            t.basis.remove(r);
                            continue;
                        }
                    }
                }
                r += 1;
            }
        }

        let mut cost = self.objective.clone();
        cost.resize(cols, Rational::zero());
        let mut obj = t.objective_row(&cost);
        let active: Vec<bool> = (0..cols).map(|j| !is_artificial(j)).collect();
        if !t.optimize(&mut obj, &active) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rational::zero(); n];
        for (row, &b) in t.rows.iter().zip(&t.basis) {
            if b < n {
                x[b] = row[cols].clone();
            }
        }
        LpOutcome::Optimal {
            value: -obj[cols].clone(),
            x,
        }
    }

    /// Optimal value together with the lexicographically smallest optimal point.
    pub fn solve_lexmin(&self) -> LpOutcome {
        let first = self.solve();
        let LpOutcome::Optimal { value, .. } = &first else {
            return first;
        };
        let n = self.vars();
        let mut pinned = self.clone();
        pinned.add(self.objective.clone(), Relation::Eq, value.clone());
        let mut x = Vec::with_capacity(n);
        for j in 0..n {
            let mut probe = pinned.clone();
            probe.objective = unit(n, j);
            match probe.solve() {
                LpOutcome::Optimal { value: xj, .. } => {
                    pinned.add(unit(n, j), Relation::Eq, xj.clone());
                    x.push(xj);
                }
                other => unreachable!("a bounded coordinate of a feasible face: {other:?}"),
            }
        }
        LpOutcome::Optimal {
            value: value.clone(),
            x,
        }
    }
}

fn unit(n: usize, j: usize) -> Vec<Rational> {
    (0..n)
        .map(|i| Rational::from_integer(if i == j { 1 } else { 0 }.into()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extreal::rat;

    fn q(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18
        let mut lp = LinearProgram::new(q(&[-3, -5]));
        lp.add(q(&[1, 0]), Relation::Le, rat(4, 1));
        lp.add(q(&[0, 2]), Relation::Le, rat(12, 1));
        lp.add(q(&[3, 2]), Relation::Le, rat(18, 1));
        assert_eq!(
            lp.solve(),
            LpOutcome::Optimal {
                value: rat(-36, 1),
                x: q(&[2, 6])
            }
        );
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(q(&[1]));
        lp.add(q(&[1]), Relation::Ge, rat(2, 1));
        lp.add(q(&[1]), Relation::Le, rat(1, 1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(q(&[-1, 0]));
        lp.add(q(&[1, -1]), Relation::Le, rat(1, 1));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn negative_right_hand_sides_and_equalities() {
        // min x + y s.t. -x - y <= -3, x - y = 1
        let mut lp = LinearProgram::new(q(&[1, 1]));
        lp.add(q(&[-1, -1]), Relation::Le, rat(-3, 1));
        lp.add(q(&[1, -1]), Relation::Eq, rat(1, 1));
        assert_eq!(
            lp.solve(),
            LpOutcome::Optimal {
                value: rat(3, 1),
                x: q(&[2, 1])
            }
        );
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut lp = LinearProgram::new(q(&[1, 2]));
        lp.add(q(&[1, 1]), Relation::Eq, rat(2, 1));
        lp.add(q(&[2, 2]), Relation::Eq, rat(4, 1));
        assert_eq!(
            lp.solve(),
            LpOutcome::Optimal {
                value: rat(2, 1),
                x: q(&[2, 0])
            }
        );
    }

    #[test]
    fn lexmin_breaks_ties() {
        // Every point on x + y = 1 is optimal; the smallest is (0, 1).
        let mut lp = LinearProgram::new(q(&[1, 1]));
        lp.add(q(&[1, 1]), Relation::Ge, rat(1, 1));
        let LpOutcome::Optimal { value, x } = lp.solve_lexmin() else {
            panic!()
        };
        assert_eq!(value, rat(1, 1));
        assert_eq!(x, q(&[0, 1]));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example cycles under the largest-coefficient rule.
        let mut lp = LinearProgram::new(vec![rat(-3, 4), rat(150, 1), rat(-1, 50), rat(6, 1)]);
        lp.add(
            vec![rat(1, 4), rat(-60, 1), rat(-1, 25), rat(9, 1)],
            Relation::Le,
            rat(0, 1),
        );
        lp.add(
            vec![rat(1, 2), rat(-90, 1), rat(-1, 50), rat(3, 1)],
            Relation::Le,
            rat(0, 1),
        );
        lp.add(q(&[0, 0, 1, 0]), Relation::Le, rat(1, 1));
        assert_eq!(lp.solve().value(), Some(&rat(-1, 20)));
    }
}
