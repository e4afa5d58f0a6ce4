//! The discrete cone `[0, inf]^n` with positive weights, and a catalog of
//! two-dimensional cones that behave badly in instructive ways.
//!
//! Everything on [`ConeVec`] is coordinatewise. Suprema and infima of any
//! family exist, so the cone has joins and the lattice difference `w - v` is
//! defined whenever `v <= w`.

pub mod catalog;
pub mod ddp;
pub mod laws;

use std::fmt;

use num::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extreal::{ExtNonneg, Rational};

pub use catalog::{
    catalog_cone_query, roman_sup_check, CatalogAnswer, CatalogCone, CatalogPoint, RomanReport,
    WitnessChain,
};
pub use ddp::{approximating_chain, ddp_split, DdpSplit};
pub use laws::{
    decomposition_witness, lattice_law_suite, Decomposition, LawReport, LawSuiteConfig,
};

/// A vector of `[0, inf]` coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConeVec(pub Vec<ExtNonneg>);

impl ConeVec {
    pub fn zeros(n: usize) -> Self {
        ConeVec(vec![ExtNonneg::zero(); n])
    }

    pub fn infs(n: usize) -> Self {
        ConeVec(vec![ExtNonneg::inf(); n])
    }

    /// Integer coordinates, `None` meaning `inf`.
    pub fn from_ints(xs: &[Option<u64>]) -> Self {
        ConeVec(
            xs.iter()
                .map(|x| x.map_or_else(ExtNonneg::inf, ExtNonneg::int))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[ExtNonneg] {
        &self.0
    }

    pub(crate) fn same_len(&self, other: &Self) -> Result<()> {
        if self.len() == other.len() {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: self.len(),
                found: other.len(),
            })
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&ExtNonneg, &ExtNonneg) -> ExtNonneg) -> Self {
        assert_eq!(self.len(), other.len(), "cone vectors of different length");
        ConeVec(self.0.iter().zip(&other.0).map(|(a, b)| f(a, b)).collect())
    }

    fn map(&self, f: impl Fn(&ExtNonneg) -> ExtNonneg) -> Self {
        ConeVec(self.0.iter().map(f).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, lambda: &Rational) -> Self {
        self.map(|a| a.scale(lambda))
    }

    pub fn meet(&self, other: &Self) -> Self {
        self.zip_with(other, ExtNonneg::min_of)
    }

    pub fn join(&self, other: &Self) -> Self {
        self.zip_with(other, ExtNonneg::max_of)
    }

    pub fn eps(&self) -> Self {
        self.map(ExtNonneg::eps)
    }

    /// `inf * self`: every nonzero coordinate becomes `inf`.
    pub fn inf_mul(&self) -> Self {
        self.map(|a| &ExtNonneg::inf() * a)
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// The largest `z` with `v + z = self`.
    pub fn minus(&self, v: &Self) -> Result<Self> {
        self.same_len(v)?;
        if !v.leq(self) {
            return Err(Error::NotComparable(format!("{v} is not below {self}")));
        }
        Ok(ConeVec(
            self.0
                .iter()
                .zip(&v.0)
                .map(|(a, b)| a.monus(b))
                .collect::<Result<_>>()?,
        ))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|a| !a.is_inf())
    }

    pub fn sup_of<'a>(n: usize, family: impl IntoIterator<Item = &'a ConeVec>) -> Self {
        family
            .into_iter()
            .fold(Self::zeros(n), |acc, v| acc.join(v))
    }

    /// Coordinatewise infimum; the empty family has infimum `inf`.
    pub fn inf_of<'a>(n: usize, family: impl IntoIterator<Item = &'a ConeVec>) -> Self {
        family.into_iter().fold(Self::infs(n), |acc, v| acc.meet(v))
    }
}

impl fmt::Display for ConeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for ConeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `[0, inf]^n` with strictly positive weights `mu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteCone {
    mu: Vec<Rational>,
}

impl DiscreteCone {
    pub fn new(mu: Vec<Rational>) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::Input(
                "a discrete cone needs at least one index".into(),
            ));
        }
        if let Some(bad) = mu.iter().find(|m| !m.is_positive()) {
            return Err(Error::Input(format!(
                "weight {bad} is not strictly positive"
            )));
        }
        Ok(DiscreteCone { mu })
    }

    pub fn uniform(n: usize) -> Self {
        Self::new(vec![Rational::from_integer(1.into()); n]).expect("n > 0")
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.mu
    }

    pub fn check(&self, v: &ConeVec) -> Result<()> {
        if v.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: self.dim(),
                found: v.len(),
            })
        }
    }

    /// `sum_i mu_i f_i g_i` with `0 * inf = 0`.
    pub fn pairing(&self, f: &ConeVec, g: &ConeVec) -> ExtNonneg {
        self.mu
            .iter()
            .zip(f.0.iter().zip(&g.0))
            .map(|(m, (a, b))| (a * b).scale(m))
            .sum()
    }
}

/// Wire format: `{"mu": [...], "v": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightedVec {
    pub mu: Vec<ExtNonneg>,
    pub v: ConeVec,
}

impl WeightedVec {
    pub fn into_parts(self) -> Result<(DiscreteCone, ConeVec)> {
        let mu = self
            .mu
            .iter()
            .map(|m| {
                m.finite()
                    .cloned()
                    .ok_or_else(|| Error::Input("weights must be finite".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let cone = DiscreteCone::new(mu)?;
        cone.check(&self.v)?;
        Ok((cone, self.v))
    }
}

/// Everything [`cone_ops`] computes for one pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeOps {
    pub sum: ConeVec,
    pub scaled: ConeVec,
    pub meet: ConeVec,
    pub join: ConeVec,
    pub eps: ConeVec,
    pub inf_mul: ConeVec,
    /// `w - v`, present only when `v <= w`.
    pub difference: Option<ConeVec>,
}

/// The basic operations on a pair. The difference is `None` when `v` is not below `w`;
/// call [`ConeVec::minus`] directly to get the error instead.
pub fn cone_ops(v: &ConeVec, w: &ConeVec, lambda: &Rational) -> Result<ConeOps> {
    v.same_len(w)?;
    if lambda.is_negative() {
        return Err(Error::Input(format!("scalar {lambda} is negative")));
    }
    Ok(ConeOps {
        sum: v.add(w),
        scaled: v.scale(lambda),
        meet: v.meet(w),
        join: v.join(w),
        eps: v.eps(),
        inf_mul: v.inf_mul(),
        difference: if v.leq(w) { Some(w.minus(v)?) } else { None },
    })
}
