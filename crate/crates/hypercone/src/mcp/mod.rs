//! Checking whether maps respect suprema of increasing sequences, and the
//! projection onto maps that do.
//!
//! On infinite sources a pass is relative to the chains that were tried: the
//! report says how many. Each instance registers its own known adversarial
//! chains, and these are always tried first.

pub mod chains;
pub mod finite;
pub mod instances;
pub mod weighted;

use std::fmt::{Debug, Display};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub use chains::{Trend, TrendChain};
pub use finite::{
    equivalences_audit, pr_project_finite, pr_random_audit, AuditReport, FiniteMap, MaskTables,
    PrAuditReport, PrReport,
};
pub use instances::{
    CatalogChains, CatalogFunctional, ConeChains, DualFunctional, Identity, InfinitePart,
};
pub use weighted::{
    filtered_inf_demo, pr_project_weighted, FilteredInfDemo, WeightedFunctionalSpec,
    WeightedProjection,
};

/// A poset whose chains come with declared suprema.
pub trait ChainSource: Sync {
    type Point: Clone + PartialEq + Display + Send;
    type Chain: Clone + Display + Send + Sync;

    fn leq(&self, a: &Self::Point, b: &Self::Point) -> bool;
    /// The `i`-th term, `i = 0, 1, ...`.
    fn term(&self, chain: &Self::Chain, i: usize) -> Self::Point;
    fn sup(&self, chain: &Self::Chain) -> Self::Point;
    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Chain;
}

/// A map out of a [`ChainSource`] that can also report the exact supremum of
/// the image of any of the source's chains.
pub trait ChainMap: Sync {
    type Source: ChainSource;
    type Value: Clone + PartialEq + Display + Send;

    fn name(&self) -> String;
    fn source(&self) -> &Self::Source;
    fn apply(&self, x: &<Self::Source as ChainSource>::Point) -> Self::Value;
    fn value_leq(&self, a: &Self::Value, b: &Self::Value) -> bool;
    fn image_sup(&self, chain: &<Self::Source as ChainSource>::Chain) -> Self::Value;
    /// Chains known to break maps of this kind.
    fn adversarial(&self) -> Vec<<Self::Source as ChainSource>::Chain> {
        Vec::new()
    }
}

#[derive(Clone, Debug)]
pub struct McpBudget {
    /// Random chains tried after the adversarial ones.
    pub chains: usize,
    /// Terms of each chain compared against its declared supremum.
    pub prefix: usize,
    pub seed: u64,
}

impl McpBudget {
    pub const MAX_CHAINS: usize = 1 << 20;
    pub const MAX_PREFIX: usize = 1 << 12;

    pub fn new(chains: usize) -> Self {
        McpBudget {
            chains,
            ..Self::default()
        }
    }
}

impl Default for McpBudget {
    fn default() -> Self {
        McpBudget {
            chains: 64,
            prefix: 24,
            seed: 7,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McpCounterexample {
    pub chain: String,
    pub terms: Vec<String>,
    pub images: Vec<String>,
    pub sup: String,
    /// The map at the supremum.
    pub value_at_sup: String,
    /// The supremum of the images.
    pub sup_of_values: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum McpVerdict {
    /// No counterexample among the chains tried.
    Pass {
        adversarial: usize,
        sampled: usize,
    },
    Fail(McpCounterexample),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McpReport {
    pub map: String,
    pub budget_relative: bool,
    pub verdict: McpVerdict,
}

impl McpReport {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, McpVerdict::Pass { .. })
    }

    pub fn counterexample(&self) -> Option<&McpCounterexample> {
        match &self.verdict {
            McpVerdict::Fail(c) => Some(c),
            McpVerdict::Pass { .. } => None,
        }
    }
}

fn check_chain<M: ChainMap>(
    map: &M,
    chain: &<M::Source as ChainSource>::Chain,
    prefix: usize,
) -> Result<Option<McpCounterexample>> {
    let src = map.source();
    let terms: Vec<_> = (0..prefix).map(|i| src.term(chain, i)).collect();
    let sup = src.sup(chain);
    if let Some(i) = terms.windows(2).position(|w| !src.leq(&w[0], &w[1])) {
        return Err(Error::NotMonotone(i + 1));
    }
    if let Some(t) = terms.iter().find(|t| !src.leq(t, &sup)) {
        return Err(Error::Input(format!(
            "declared supremum {sup} does not bound {t} in chain {chain}"
        )));
    }
    let images: Vec<_> = terms.iter().map(|t| map.apply(t)).collect();
    let at_sup = map.apply(&sup);
    let image_sup = map.image_sup(chain);
    let reason = if let Some(i) = images.windows(2).position(|w| !map.value_leq(&w[0], &w[1])) {
        Some(format!("image decreases at step {}", i + 1))
    } else if at_sup != image_sup {
        Some("value at the supremum differs from the supremum of the values".to_string())
    } else {
        None
    };
    Ok(reason.map(|reason| McpCounterexample {
        chain: chain.to_string(),
        terms: terms.iter().take(6).map(ToString::to_string).collect(),
        images: images.iter().take(6).map(ToString::to_string).collect(),
        sup: sup.to_string(),
        value_at_sup: at_sup.to_string(),
        sup_of_values: image_sup.to_string(),
        reason,
    }))
}

/// Try the map's adversarial chains, then `budget.chains` random ones.
pub fn check_mcp<M: ChainMap>(map: &M, budget: &McpBudget) -> Result<McpReport> {
    if budget.chains > McpBudget::MAX_CHAINS || budget.prefix > McpBudget::MAX_PREFIX {
        return Err(Error::BudgetExceeded(format!(
            "{} chains of {} terms; caps are {} and {}",
            budget.chains,
            budget.prefix,
            McpBudget::MAX_CHAINS,
            McpBudget::MAX_PREFIX
        )));
    }
    let prefix = budget.prefix.max(2);
    let adversarial = map.adversarial();
    let report = |verdict| McpReport {
        map: map.name(),
        budget_relative: true,
        verdict,
    };
    for chain in &adversarial {
        if let Some(c) = check_chain(map, chain, prefix)? {
            return Ok(report(McpVerdict::Fail(c)));
        }
    }
    let found = (0..budget.chains)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(i as u64));
            let chain = map.source().sample(&mut rng);
            check_chain(map, &chain, prefix)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .next();
    Ok(report(match found {
        Some(c) => McpVerdict::Fail(c),
        None => McpVerdict::Pass {
            adversarial: adversarial.len(),
            sampled: budget.chains,
        },
    }))
}
