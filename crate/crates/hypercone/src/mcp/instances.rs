use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::chains::{Trend, TrendChain};
use super::{ChainMap, ChainSource};
use crate::cone::{CatalogCone, CatalogPoint, ConeVec, DiscreteCone};
use crate::error::{Error, Result};
use crate::extreal::{rat, ExtNonneg};

/// Closed-form increasing sequences in `[0, inf]^n`, with coordinatewise suprema.
#[derive(Clone, Debug)]
pub struct ConeChains {
    pub n: usize,
}

impl ChainSource for ConeChains {
    type Point = ConeVec;
    type Chain = TrendChain;

    fn leq(&self, a: &ConeVec, b: &ConeVec) -> bool {
        a.leq(b)
    }

    fn term(&self, chain: &TrendChain, i: usize) -> ConeVec {
        chain.term(i)
    }

    fn sup(&self, chain: &TrendChain) -> ConeVec {
        chain.limit()
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> TrendChain {
        TrendChain::sample(rng, self.n)
    }
}

/// `g -> sum_i mu_i f_i g_i`.
#[derive(Clone, Debug)]
pub struct DualFunctional {
    pub cone: DiscreteCone,
    pub f: ConeVec,
    chains: ConeChains,
}

impl DualFunctional {
    pub fn new(cone: DiscreteCone, f: ConeVec) -> Result<Self> {
        cone.check(&f)?;
        let chains = ConeChains { n: cone.dim() };
        Ok(DualFunctional { cone, f, chains })
    }

    /// The plain sum `g -> sum_i g_i`.
    pub fn sum(n: usize) -> Self {
        Self::new(DiscreteCone::uniform(n), ConeVec(vec![ExtNonneg::one(); n]))
            .expect("matching lengths")
    }

    fn coefficients(&self) -> impl Iterator<Item = ExtNonneg> + '_ {
        self.f
            .coords()
            .iter()
            .zip(self.cone.weights())
            .map(|(f, m)| f.scale(m))
    }
}

impl ChainMap for DualFunctional {
    type Source = ConeChains;
    type Value = ExtNonneg;

    fn name(&self) -> String {
        format!("pairing with {}", self.f)
    }

    fn source(&self) -> &ConeChains {
        &self.chains
    }

    fn apply(&self, g: &ConeVec) -> ExtNonneg {
        self.cone.pairing(&self.f, g)
    }

    fn value_leq(&self, a: &ExtNonneg, b: &ExtNonneg) -> bool {
        a <= b
    }

    fn image_sup(&self, chain: &TrendChain) -> ExtNonneg {
        chain
            .coords
            .iter()
            .zip(self.coefficients())
            .map(|(t, c)| t.weighted_limit(&c))
            .sum()
    }

    fn adversarial(&self) -> Vec<TrendChain> {
        axis_chains(self.cone.dim())
    }
}

/// `(k, 0, ..., 0)` and its coordinate permutations: one coordinate escapes to infinity.
fn axis_chains(n: usize) -> Vec<TrendChain> {
    (0..n)
        .map(|i| {
            TrendChain::new(
                (0..n)
                    .map(|j| {
                        if i == j {
                            Trend::grow(rat(0, 1), rat(1, 1))
                        } else {
                            Trend::Const(ExtNonneg::zero())
                        }
                    })
                    .collect(),
            )
        })
        .collect()
}

/// `g -> inf` if some coordinate of `g` is infinite, else `0`.
///
/// Linear, but blind to sequences that only reach infinity in the limit.
#[derive(Clone, Debug)]
pub struct InfinitePart {
    chains: ConeChains,
}

impl InfinitePart {
    pub fn new(n: usize) -> Self {
        InfinitePart {
            chains: ConeChains { n },
        }
    }
}

impl ChainMap for InfinitePart {
    type Source = ConeChains;
    type Value = ExtNonneg;

    fn name(&self) -> String {
        "part at infinity of the sum".into()
    }

    fn source(&self) -> &ConeChains {
        &self.chains
    }

    fn apply(&self, g: &ConeVec) -> ExtNonneg {
        g.coords().iter().cloned().sum::<ExtNonneg>().eps()
    }

    fn value_leq(&self, a: &ExtNonneg, b: &ExtNonneg) -> bool {
        a <= b
    }

    fn image_sup(&self, chain: &TrendChain) -> ExtNonneg {
        // A term is infinite only through a constant infinite coordinate.
        if chain.coords.iter().any(|t| t.at(chain.first).is_inf()) {
            ExtNonneg::inf()
        } else {
            ExtNonneg::zero()
        }
    }

    fn adversarial(&self) -> Vec<TrendChain> {
        axis_chains(self.chains.n)
    }
}

/// Closed-form chains in one of the extended catalog cones.
#[derive(Clone, Debug)]
pub struct CatalogChains {
    pub cone: CatalogCone,
}

impl CatalogChains {
    pub fn new(cone: CatalogCone) -> Result<Self> {
        if !cone.is_extended() {
            return Err(Error::Input(format!(
                "catalog cone {cone} has no extended chains"
            )));
        }
        Ok(CatalogChains { cone })
    }

    fn point(v: ConeVec) -> CatalogPoint {
        let [a, b]: [ExtNonneg; 2] = v.0.try_into().expect("two coordinates");
        CatalogPoint::Ext(a, b)
    }

    /// `(k, 0)` and `(0, k)` escape along an axis; `(k, 1 - 1/k)` for `k >= 2` and its
    /// mirror increase strictly in both coordinates.
    pub fn witness_chains(&self) -> Vec<TrendChain> {
        let grow = || Trend::grow(rat(0, 1), rat(1, 1));
        let creep = || Trend::rise(rat(1, 1), rat(1, 1));
        let zero = || Trend::Const(ExtNonneg::zero());
        let mut out = Vec::new();
        if matches!(self.cone, CatalogCone::Closed | CatalogCone::FiniteWithTop) {
            out.push(TrendChain::new(vec![grow(), zero()]));
            out.push(TrendChain::new(vec![zero(), grow()]));
        }
        out.push(TrendChain::new(vec![grow(), creep()]).starting_at(2));
        out.push(TrendChain::new(vec![creep(), grow()]).starting_at(2));
        out
    }
}

impl ChainSource for CatalogChains {
    type Point = CatalogPoint;
    type Chain = TrendChain;

    fn leq(&self, a: &CatalogPoint, b: &CatalogPoint) -> bool {
        self.cone.leq(a, b)
    }

    fn term(&self, chain: &TrendChain, i: usize) -> CatalogPoint {
        Self::point(chain.term(i))
    }

    fn sup(&self, chain: &TrendChain) -> CatalogPoint {
        let limit = chain.limit();
        let collapses = matches!(
            self.cone,
            CatalogCone::FiniteWithTop | CatalogCone::OpenWithZeroAndTop
        );
        if collapses && !limit.is_finite() {
            CatalogPoint::Ext(ExtNonneg::inf(), ExtNonneg::inf())
        } else {
            Self::point(limit)
        }
    }

    /// Random chains that have a supremum in the cone at hand. In the open cones this
    /// rules out chains with two finite limits, which have no least upper bound.
    fn sample(&self, rng: &mut ChaCha8Rng) -> TrendChain {
        let grow = |rng: &mut ChaCha8Rng| {
            Trend::grow(rat(rng.gen_range(0..3), 1), rat(rng.gen_range(1..4), 1))
        };
        match self.cone {
            CatalogCone::Closed => TrendChain::sample(rng, 2),
            CatalogCone::FiniteWithTop => {
                let mut finite = || loop {
                    let t = Trend::sample(rng);
                    if !t.limit().is_inf() || matches!(t, Trend::Grow { .. }) {
                        break t;
                    }
                };
                TrendChain::new(vec![finite(), finite()])
            }
            _ => match rng.gen_range(0..3) {
                0 => {
                    let c = ExtNonneg::int(rng.gen_range(1..6));
                    TrendChain::new(vec![Trend::Const(c.clone()), Trend::Const(c)])
                }
                1 => TrendChain::new(vec![grow(rng), grow(rng)]),
                _ => {
                    let limit = rat(rng.gen_range(2..6), 1);
                    let creep = Trend::rise(limit.clone(), limit * rat(rng.gen_range(1..4), 4));
                    let g = grow(rng);
                    TrendChain::new(if rng.gen_bool(0.5) {
                        vec![g, creep]
                    } else {
                        vec![creep, g]
                    })
                }
            },
        }
    }
}

/// `(a, b) -> lambda a + eta b` on an extended catalog cone.
#[derive(Clone, Debug)]
pub struct CatalogFunctional {
    pub lambda: ExtNonneg,
    pub eta: ExtNonneg,
    chains: CatalogChains,
}

impl CatalogFunctional {
    pub fn new(cone: CatalogCone, lambda: ExtNonneg, eta: ExtNonneg) -> Result<Self> {
        Ok(CatalogFunctional {
            lambda,
            eta,
            chains: CatalogChains::new(cone)?,
        })
    }
}

impl ChainMap for CatalogFunctional {
    type Source = CatalogChains;
    type Value = ExtNonneg;

    fn name(&self) -> String {
        format!(
            "({}, {}) on catalog cone {}",
            self.lambda, self.eta, self.chains.cone
        )
    }

    fn source(&self) -> &CatalogChains {
        &self.chains
    }

    fn apply(&self, p: &CatalogPoint) -> ExtNonneg {
        crate::cone::catalog::pair_value(&self.lambda, &self.eta, p).expect("extended point")
    }

    fn value_leq(&self, a: &ExtNonneg, b: &ExtNonneg) -> bool {
        a <= b
    }

    fn image_sup(&self, chain: &TrendChain) -> ExtNonneg {
        &chain.coords[0].weighted_limit(&self.lambda) + &chain.coords[1].weighted_limit(&self.eta)
    }

    fn adversarial(&self) -> Vec<TrendChain> {
        self.chains.witness_chains()
    }
}

/// The identity of a chain source.
#[derive(Clone, Debug)]
pub struct Identity<S>(pub S);

impl<S: ChainSource> ChainMap for Identity<S> {
    type Source = S;
    type Value = S::Point;

    fn name(&self) -> String {
        "identity".into()
    }

    fn source(&self) -> &S {
        &self.0
    }

    fn apply(&self, x: &S::Point) -> S::Point {
        x.clone()
    }

    fn value_leq(&self, a: &S::Point, b: &S::Point) -> bool {
        self.0.leq(a, b)
    }

    fn image_sup(&self, chain: &S::Chain) -> S::Point {
        self.0.sup(chain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::catalog_cone_query;
    use crate::mcp::{check_mcp, McpBudget};

    #[test]
    fn sum_functional_passes() {
        let r = check_mcp(&DualFunctional::sum(4), &McpBudget::new(200)).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn infinite_weights_pass() {
        let f = ConeVec::from_ints(&[None, Some(0), Some(2)]);
        let m = DualFunctional::new(
            DiscreteCone::new(vec![rat(1, 2), rat(1, 1), rat(3, 1)]).unwrap(),
            f,
        )
        .unwrap();
        assert!(check_mcp(&m, &McpBudget::new(200)).unwrap().passed());
    }

    #[test]
    fn infinite_part_fails_on_axis_chain() {
        let r = check_mcp(&InfinitePart::new(3), &McpBudget::new(1)).unwrap();
        let c = r.counterexample().unwrap();
        assert_eq!(c.chain, "(1k, 0, 0)");
        assert_eq!(
            (c.value_at_sup.as_str(), c.sup_of_values.as_str()),
            ("inf", "0")
        );
    }

    #[test]
    fn identities_pass() {
        assert!(
            check_mcp(&Identity(ConeChains { n: 3 }), &McpBudget::new(100))
                .unwrap()
                .passed()
        );
        for cone in &CatalogCone::ALL[..4] {
            let id = Identity(CatalogChains::new(*cone).unwrap());
            assert!(
                check_mcp(&id, &McpBudget::new(100)).unwrap().passed(),
                "{cone}"
            );
        }
    }

    #[test]
    fn catalog_verdicts_match_classification() {
        let values = [
            ExtNonneg::zero(),
            ExtNonneg::ratio(1, 2),
            ExtNonneg::int(2),
            ExtNonneg::inf(),
        ];
        for cone in &CatalogCone::ALL[..4] {
            for l in &values {
                for e in &values {
                    let m = CatalogFunctional::new(*cone, l.clone(), e.clone()).unwrap();
                    let checked = check_mcp(&m, &McpBudget::new(64)).unwrap().passed();
                    let claimed = catalog_cone_query(&cone.id().to_string(), l, e)
                        .unwrap()
                        .has_mcp;
                    assert_eq!(Some(checked), claimed, "cone {cone} with ({l}, {e})");
                }
            }
        }
    }

    #[test]
    fn paper_chain_refutes_axis_functional() {
        let m = CatalogFunctional::new(
            CatalogCone::FiniteWithTop,
            ExtNonneg::zero(),
            ExtNonneg::one(),
        )
        .unwrap();
        let r = check_mcp(&m, &McpBudget::new(1)).unwrap();
        assert_eq!(r.counterexample().unwrap().chain, "(1k, 0)");
        let m = CatalogFunctional::new(
            CatalogCone::OpenWithZeroAndTop,
            ExtNonneg::zero(),
            ExtNonneg::one(),
        )
        .unwrap();
        let c = check_mcp(&m, &McpBudget::new(1))
            .unwrap()
            .counterexample()
            .unwrap()
            .clone();
        assert_eq!(c.chain, "(1k, 1 - 1/k) for k >= 2");
        assert_eq!(c.sup_of_values, "1");
    }
}
