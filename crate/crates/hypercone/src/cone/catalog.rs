//! Six small two-dimensional cones and wedges.
//!
//! | id | carrier                                   |
//! |----|-------------------------------------------|
//! | a  | `[0, inf]^2`                              |
//! | b  | `{0} ∪ (0, inf]^2`                        |
//! | c  | `[0, inf)^2 ∪ {inf}`                      |
//! | d  | `{0} ∪ (0, inf)^2 ∪ {inf}`                |
//! | e  | `{0} ∪ R × (0, inf)`                      |
//! | f  | `({0} × [0, inf)) ∪ ((0, inf) × R)`       |
//!
//! In every case `v <= w` means `v + z = w` for some `z` in the carrier, and the
//! functional attached to `(lambda, eta)` is `(a, b) -> lambda a + eta b` with `0 * inf = 0`.

use std::fmt;
use std::str::FromStr;

use num::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extreal::{rat, ExtNonneg, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CatalogCone {
    Closed,
    OpenWithZero,
    FiniteWithTop,
    OpenWithZeroAndTop,
    HalfPlane,
    Lexicographic,
}

impl CatalogCone {
    pub const ALL: [CatalogCone; 6] = [
        CatalogCone::Closed,
        CatalogCone::OpenWithZero,
        CatalogCone::FiniteWithTop,
        CatalogCone::OpenWithZeroAndTop,
        CatalogCone::HalfPlane,
        CatalogCone::Lexicographic,
    ];

    pub fn id(self) -> char {
        match self {
            CatalogCone::Closed => 'a',
            CatalogCone::OpenWithZero => 'b',
            CatalogCone::FiniteWithTop => 'c',
            CatalogCone::OpenWithZeroAndTop => 'd',
            CatalogCone::HalfPlane => 'e',
            CatalogCone::Lexicographic => 'f',
        }
    }

    /// Cones with extended coordinates use [`CatalogPoint::Ext`]; the two real wedges use
    /// [`CatalogPoint::Real`].
    pub fn is_extended(self) -> bool {
        !matches!(self, CatalogCone::HalfPlane | CatalogCone::Lexicographic)
    }

    pub fn zero(self) -> CatalogPoint {
        if self.is_extended() {
            CatalogPoint::Ext(ExtNonneg::zero(), ExtNonneg::zero())
        } else {
            CatalogPoint::Real(Rational::zero(), Rational::zero())
        }
    }

    pub fn contains(self, p: &CatalogPoint) -> bool {
        use CatalogCone::*;
        match (self, p) {
            (Closed, CatalogPoint::Ext(..)) => true,
            (OpenWithZero, CatalogPoint::Ext(a, b)) => {
                (a.is_zero() && b.is_zero()) || (!a.is_zero() && !b.is_zero())
            }
            (FiniteWithTop, CatalogPoint::Ext(a, b)) => a.is_inf() == b.is_inf(),
            (OpenWithZeroAndTop, CatalogPoint::Ext(a, b)) => {
                (a.is_zero() && b.is_zero())
                    || (a.is_inf() && b.is_inf())
                    || (!a.is_zero() && !b.is_zero() && !a.is_inf() && !b.is_inf())
            }
            (HalfPlane, CatalogPoint::Real(a, b)) => {
                (a.is_zero() && b.is_zero()) || b.is_positive()
            }
            (Lexicographic, CatalogPoint::Real(a, b)) => {
                a.is_positive() || (a.is_zero() && !b.is_negative())
            }
            _ => false,
        }
    }

    pub fn add(self, p: &CatalogPoint, q: &CatalogPoint) -> CatalogPoint {
        match (p, q) {
            (CatalogPoint::Ext(a, b), CatalogPoint::Ext(c, d)) => CatalogPoint::Ext(a + c, b + d),
            (CatalogPoint::Real(a, b), CatalogPoint::Real(c, d)) => {
                CatalogPoint::Real(a + c, b + d)
            }
            _ => panic!("points of different kinds"),
        }
    }

    pub fn scale(self, lambda: &Rational, p: &CatalogPoint) -> CatalogPoint {
        match p {
            CatalogPoint::Ext(a, b) => CatalogPoint::Ext(a.scale(lambda), b.scale(lambda)),
            CatalogPoint::Real(a, b) => CatalogPoint::Real(a * lambda, b * lambda),
        }
    }

    /// `p <= q`: some element of the carrier added to `p` gives `q`.
    pub fn leq(self, p: &CatalogPoint, q: &CatalogPoint) -> bool {
        match (p, q) {
            (CatalogPoint::Real(a, b), CatalogPoint::Real(c, d)) => {
                self.contains(&CatalogPoint::Real(c - a, d - b))
            }
            (CatalogPoint::Ext(a, b), CatalogPoint::Ext(c, d)) => {
                let (Some(xs), Some(ys)) = (gap_candidates(a, c), gap_candidates(b, d)) else {
                    return false;
                };
                xs.iter().any(|x| {
                    ys.iter()
                        .any(|y| self.contains(&CatalogPoint::Ext(x.clone(), y.clone())))
                })
            }
            _ => false,
        }
    }

    pub fn lt(self, p: &CatalogPoint, q: &CatalogPoint) -> bool {
        p != q && self.leq(p, q)
    }
}

/// The values `z` with `from + z = to`, up to the distinction zero / finite positive / infinite.
fn gap_candidates(from: &ExtNonneg, to: &ExtNonneg) -> Option<Vec<ExtNonneg>> {
    match (from.is_inf(), to.is_inf()) {
        (true, true) => Some(vec![ExtNonneg::zero(), ExtNonneg::one(), ExtNonneg::inf()]),
        (true, false) => None,
        (false, true) => Some(vec![ExtNonneg::inf()]),
        (false, false) => to.monus(from).ok().map(|z| vec![z]),
    }
}

impl FromStr for CatalogCone {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CatalogCone::ALL
            .into_iter()
            .find(|c| s.trim().eq_ignore_ascii_case(&c.id().to_string()))
            .ok_or_else(|| Error::UnknownCatalogId(s.to_string()))
    }
}

impl fmt::Display for CatalogCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CatalogPoint {
    Ext(ExtNonneg, ExtNonneg),
    Real(Rational, Rational),
}

impl Serialize for CatalogPoint {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CatalogPoint::Ext(a, b) => [a, b].serialize(serializer),
            CatalogPoint::Real(a, b) => [a.to_string(), b.to_string()].serialize(serializer),
        }
    }
}

impl fmt::Display for CatalogPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogPoint::Ext(a, b) => write!(f, "({a}, {b})"),
            CatalogPoint::Real(a, b) => write!(f, "({a}, {b})"),
        }
    }
}

fn ext(a: Rational, b: Rational) -> CatalogPoint {
    CatalogPoint::Ext(
        ExtNonneg::new(a).expect("nonnegative"),
        ExtNonneg::new(b).expect("nonnegative"),
    )
}

fn top() -> CatalogPoint {
    CatalogPoint::Ext(ExtNonneg::inf(), ExtNonneg::inf())
}

/// `lambda a + eta b` on an extended point.
pub fn pair_value(lambda: &ExtNonneg, eta: &ExtNonneg, p: &CatalogPoint) -> Option<ExtNonneg> {
    match p {
        CatalogPoint::Ext(a, b) => Some(&(lambda * a) + &(eta * b)),
        CatalogPoint::Real(..) => None,
    }
}

/// An increasing sequence whose image under a functional stays below the
/// functional's value at the supremum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessChain {
    pub description: String,
    /// First terms of the sequence.
    pub terms: Vec<CatalogPoint>,
    pub sup: CatalogPoint,
    pub values: Vec<ExtNonneg>,
    /// Every value lies at or below this bound.
    pub value_bound: ExtNonneg,
    pub sup_value: ExtNonneg,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogAnswer {
    pub cone: CatalogCone,
    pub lambda: ExtNonneg,
    pub eta: ExtNonneg,
    /// Whether `(a, b) -> lambda a + eta b` is a linear map into `[0, inf]`.
    pub is_cone_element_functional: bool,
    /// `None` when the pair does not define a functional.
    pub has_mcp: Option<bool>,
    pub witness: Option<WitnessChain>,
}

const WITNESS_TERMS: i64 = 16;

/// `(n, 0)` for `n = 1, 2, ...`, or its mirror image, in the cone with finite square and a top.
fn unbounded_axis_chain(mirror: bool) -> Vec<CatalogPoint> {
    (1..=WITNESS_TERMS)
        .map(|n| {
            let (a, b) = (rat(n, 1), rat(0, 1));
            if mirror {
                ext(b, a)
            } else {
                ext(a, b)
            }
        })
        .collect()
}

/// `(n, 1 - 1/n)` for `n = 2, 3, ...`, or its mirror image. Both coordinates increase
/// strictly, which is what the order of the open square demands.
fn creeping_chain(mirror: bool) -> Vec<CatalogPoint> {
    (2..=WITNESS_TERMS + 1)
        .map(|n| {
            let (a, b) = (rat(n, 1), rat(n - 1, n));
            if mirror {
                ext(b, a)
            } else {
                ext(a, b)
            }
        })
        .collect()
}

fn witness(
    description: String,
    terms: Vec<CatalogPoint>,
    lambda: &ExtNonneg,
    eta: &ExtNonneg,
    bound: ExtNonneg,
) -> WitnessChain {
    let values = terms
        .iter()
        .map(|p| pair_value(lambda, eta, p).expect("extended point"))
        .collect();
    let sup_value = pair_value(lambda, eta, &top()).expect("extended point");
    WitnessChain {
        description,
        terms,
        sup: top(),
        values,
        value_bound: bound,
        sup_value,
    }
}

/// Classify the functional `(lambda, eta)` on catalog cone `id`.
pub fn catalog_cone_query(id: &str, lambda: &ExtNonneg, eta: &ExtNonneg) -> Result<CatalogAnswer> {
    let cone: CatalogCone = id.parse()?;
    let (l0, e0) = (lambda.is_zero(), eta.is_zero());
    let (is_functional, has_mcp, witness) = match cone {
        CatalogCone::Closed | CatalogCone::OpenWithZero => (true, Some(true), None),
        CatalogCone::FiniteWithTop => {
            // Exactly one coefficient vanishing lets a chain escape along the other axis.
            if l0 != e0 {
                let w = witness(
                    if l0 { "(n, 0)".into() } else { "(0, n)".into() },
                    unbounded_axis_chain(!l0),
                    lambda,
                    eta,
                    ExtNonneg::zero(),
                );
                (true, Some(false), Some(w))
            } else {
                (true, Some(true), None)
            }
        }
        CatalogCone::OpenWithZeroAndTop => {
            // An infinite coefficient already sends every nonzero point to inf.
            let escapes =
                |zero: bool, other: &ExtNonneg| zero && !other.is_zero() && !other.is_inf();
            if escapes(l0, eta) || escapes(e0, lambda) {
                let coefficient = if l0 { eta } else { lambda };
                let w = witness(
                    if l0 {
                        "(n, 1 - 1/n)".into()
                    } else {
                        "(1 - 1/n, n)".into()
                    },
                    creeping_chain(!l0),
                    lambda,
                    eta,
                    coefficient.clone(),
                );
                (true, Some(false), Some(w))
            } else {
                (true, Some(true), None)
            }
        }
        // Positivity on (-t, 1) and (t, 1) for all t forces lambda = 0.
        CatalogCone::HalfPlane => (l0, l0.then_some(true), None),
        // Positivity on (1, -t) for all t forces eta = 0.
        CatalogCone::Lexicographic => (e0, e0.then_some(true), None),
    };
    Ok(CatalogAnswer {
        cone,
        lambda: lambda.clone(),
        eta: eta.clone(),
        is_cone_element_functional: is_functional,
        has_mcp,
        witness,
    })
}

impl WitnessChain {
    /// Check the chain against the cone's own order: increasing, no finite point of a
    /// probe grid bounds it (so its supremum is the top), and its values stay at or
    /// below `value_bound < sup_value`.
    pub fn verify(&self, cone: CatalogCone) -> bool {
        let increasing = self.terms.windows(2).all(|w| cone.lt(&w[0], &w[1]));
        let inside = self.terms.iter().all(|p| cone.contains(p));
        let probes = (0..=10).flat_map(|i| (0..=10).map(move |j| ext(rat(i, 1), rat(j, 1))));
        let no_finite_bound = probes
            .filter(|q| cone.contains(q))
            .all(|q| self.terms.iter().any(|p| !cone.leq(p, &q)));
        let bounded_by_top = self.terms.iter().all(|p| cone.leq(p, &self.sup));
        let values_low =
            self.values.iter().all(|v| *v <= self.value_bound) && self.value_bound < self.sup_value;
        increasing && inside && no_finite_bound && bounded_by_top && values_low
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RomanReport {
    /// `lambda (1, 0)` for the sampled `lambda < 1`.
    pub samples: Vec<CatalogPoint>,
    pub unit_is_upper_bound: bool,
    pub rival: CatalogPoint,
    pub rival_is_upper_bound: bool,
    pub rival_below_unit: bool,
    /// In `[0, inf]^n`, `v` is the least upper bound of `{eta v : eta < 1}` on every sample.
    pub discrete_axiom_holds: bool,
}

impl RomanReport {
    /// `(1, 0)` fails to be the least upper bound in the lexicographic wedge while the
    /// discrete cone behaves.
    pub fn passed(&self) -> bool {
        self.unit_is_upper_bound
            && self.rival_is_upper_bound
            && self.rival_below_unit
            && self.discrete_axiom_holds
    }
}

/// `{eta v : eta < 1}` has least upper bound `v` in `[0, inf]^n`: `v` bounds it, and any
/// coordinate `u_i < v_i` is beaten by `eta = (1 + u_i / v_i) / 2`.
fn discrete_scaling_sup(v: &super::ConeVec) -> bool {
    let etas: Vec<Rational> = (1..=32).map(|k| rat(k, k + 1)).collect();
    let bounds = etas.iter().all(|eta| v.scale(eta).leq(v));
    let least = v.coords().iter().all(|x| match x.finite() {
        None => true,
        Some(x) if x.is_zero() => true,
        Some(x) => {
            let below = x * rat(9, 10);
            let eta = (rat(1, 1) + &below / x) / rat(2, 1);
            eta < rat(1, 1) && x * &eta > below
        }
    });
    bounds && least
}

pub fn roman_sup_check() -> RomanReport {
    let cone = CatalogCone::Lexicographic;
    let unit = CatalogPoint::Real(rat(1, 1), rat(0, 1));
    let rival = CatalogPoint::Real(rat(1, 1), rat(-1, 1));
    let samples: Vec<_> = (0..32).map(|k| cone.scale(&rat(k, k + 1), &unit)).collect();
    let unit_is_upper_bound = samples.iter().all(|p| cone.leq(p, &unit));
    let rival_is_upper_bound = samples.iter().all(|p| cone.leq(p, &rival));
    let rival_below_unit = cone.lt(&rival, &unit);

    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
    let discrete_axiom_holds = (0..200).all(|_| {
        let n = rng.gen_range(1..5);
        discrete_scaling_sup(&super::laws::sample_vec(&mut rng, n))
    });
    RomanReport {
        samples,
        unit_is_upper_bound,
        rival,
        rival_is_upper_bound,
        rival_below_unit,
        discrete_axiom_holds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: u64) -> ExtNonneg {
        ExtNonneg::int(n)
    }

    #[test]
    fn unknown_id() {
        assert_eq!(
            catalog_cone_query("z", &e(1), &e(1)).unwrap_err(),
            Error::UnknownCatalogId("z".into())
        );
    }

    #[test]
    fn closed_square_always_passes() {
        for l in [e(0), e(2), ExtNonneg::inf()] {
            for m in [e(0), e(1), ExtNonneg::inf()] {
                let a = catalog_cone_query("a", &l, &m).unwrap();
                assert_eq!(a.has_mcp, Some(true));
                assert!(a.witness.is_none());
            }
        }
    }

    #[test]
    fn finite_square_axis_chain() {
        let a = catalog_cone_query("c", &e(0), &e(1)).unwrap();
        assert_eq!(a.has_mcp, Some(false));
        let w = a.witness.unwrap();
        assert_eq!(w.terms[2], ext(rat(3, 1), rat(0, 1)));
        assert!(w.values.iter().all(ExtNonneg::is_zero));
        assert!(w.verify(CatalogCone::FiniteWithTop));
        assert_eq!(
            catalog_cone_query("c", &ExtNonneg::inf(), &e(1))
                .unwrap()
                .has_mcp,
            Some(true)
        );
        assert_eq!(
            catalog_cone_query("c", &e(0), &e(0)).unwrap().has_mcp,
            Some(true)
        );
    }

    #[test]
    fn open_square_creeping_chain() {
        let a = catalog_cone_query("d", &e(0), &e(1)).unwrap();
        assert_eq!(a.has_mcp, Some(false));
        let w = a.witness.unwrap();
        assert_eq!(w.terms[0], ext(rat(2, 1), rat(1, 2)));
        assert!(w.verify(CatalogCone::OpenWithZeroAndTop));
        assert_eq!(
            catalog_cone_query("d", &e(0), &ExtNonneg::inf())
                .unwrap()
                .has_mcp,
            Some(true)
        );
        let mirrored = catalog_cone_query("d", &e(3), &e(0))
            .unwrap()
            .witness
            .unwrap();
        assert!(mirrored.verify(CatalogCone::OpenWithZeroAndTop));
    }

    #[test]
    fn open_square_order_is_strict_dominance() {
        let c = CatalogCone::OpenWithZeroAndTop;
        let p = ext(rat(1, 1), rat(1, 1));
        assert!(c.leq(&p, &ext(rat(2, 1), rat(3, 2))));
        assert!(!c.leq(&p, &ext(rat(2, 1), rat(1, 1))));
        assert!(c.leq(&p, &top()));
    }

    #[test]
    fn real_wedges_have_thin_duals() {
        assert!(
            catalog_cone_query("e", &e(0), &e(5))
                .unwrap()
                .is_cone_element_functional
        );
        assert!(
            !catalog_cone_query("e", &e(1), &e(5))
                .unwrap()
                .is_cone_element_functional
        );
        assert!(
            catalog_cone_query("f", &e(2), &e(0))
                .unwrap()
                .is_cone_element_functional
        );
        assert!(
            !catalog_cone_query("f", &e(2), &e(1))
                .unwrap()
                .is_cone_element_functional
        );
    }

    #[test]
    fn positivity_probe_agrees_with_real_wedge_duals() {
        for cone in [CatalogCone::HalfPlane, CatalogCone::Lexicographic] {
            for l in 0..4 {
                for m in 0..4 {
                    let probes = (-6..=6).flat_map(|a| {
                        (-60..=60).map(move |b| CatalogPoint::Real(rat(a, 1), rat(b, 2)))
                    });
                    let positive = probes.filter(|p| cone.contains(p)).all(|p| match &p {
                        CatalogPoint::Real(a, b) => !(rat(l, 1) * a + rat(m, 1) * b).is_negative(),
                        _ => unreachable!(),
                    });
                    let answer =
                        catalog_cone_query(&cone.id().to_string(), &e(l as u64), &e(m as u64))
                            .unwrap();
                    assert_eq!(
                        positive, answer.is_cone_element_functional,
                        "{cone} {l} {m}"
                    );
                }
            }
        }
    }

    #[test]
    fn lexicographic_unit_is_not_the_sup() {
        let r = roman_sup_check();
        assert!(r.passed(), "{r:?}");
    }
}
