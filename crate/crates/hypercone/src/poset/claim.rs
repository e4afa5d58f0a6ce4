//! Checking a claimed directed completion `j: X → Y` on samples.
//!
//! A claim describes both orders, a way to build increasing chains in `X` and
//! how to take suprema of their images in `Y`. The checker samples chains and
//! points and tests, in order: that `Y` has the supremum of every sampled chain
//! (directed completeness), that `j` keeps existing suprema (Mcp), that
//! `j(a) <= sup j(B)` holds exactly when `a` lies in the lower sup-closure of
//! `B` in `X`, and that the supplied density witnesses reach their targets.

use std::fmt::Debug;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::branch::{BranchPoset, Code, Engine, Generator, WindowConfig};
use super::finite::FinitePoset;

/// Sampling limits for claim and truncation checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimBudget {
    pub chains: usize,
    pub chain_len: usize,
    pub points: usize,
    pub seed: u64,
}

impl Default for ClaimBudget {
    fn default() -> Self {
        ClaimBudget {
            chains: 64,
            chain_len: 32,
            points: 32,
            seed: 7,
        }
    }
}

pub trait CompletionClaim {
    type X: Clone + Debug;
    type Y: Clone + Debug + PartialEq;
    /// An increasing sequence in `X`.
    type Chain: Clone + Debug;

    fn name(&self) -> String;
    fn embed(&self, x: &Self::X) -> Self::Y;
    fn x_leq(&self, a: &Self::X, b: &Self::X) -> bool;
    fn y_leq(&self, a: &Self::Y, b: &Self::Y) -> bool;
    fn term(&self, chain: &Self::Chain, n: usize) -> Self::X;
    /// Supremum of the chain inside `X`, if it has one there.
    fn x_sup(&self, chain: &Self::Chain) -> Option<Self::X>;
    /// Supremum of the image of the chain inside `Y`; `None` when there is none.
    fn y_sup(&self, chain: &Self::Chain) -> Option<Self::Y>;
    /// Membership of `a` in the lower sup-closure of the chain, decided in `X`.
    fn x_in_hat(&self, chain: &Self::Chain, a: &Self::X) -> bool;
    fn chains(&self, budget: &ClaimBudget, rng: &mut ChaCha8Rng) -> Vec<Self::Chain>;
    fn points(&self, budget: &ClaimBudget, rng: &mut ChaCha8Rng) -> Vec<Self::X>;
    /// Elements of `Y` paired with chains whose images should have them as supremum.
    fn targets(&self, budget: &ClaimBudget, rng: &mut ChaCha8Rng) -> Vec<(Self::Y, Self::Chain)>;
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ClaimVerdict {
    ConsistentWithinBudget,
    Counterexample(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimReport {
    pub name: String,
    pub chains_checked: usize,
    pub mcp_of_j: bool,
    pub density_witnesses: usize,
    pub criterion_pairs: usize,
    pub verdict: ClaimVerdict,
}

impl ClaimReport {
    pub fn passed(&self) -> bool {
        self.verdict == ClaimVerdict::ConsistentWithinBudget
    }
}

pub fn check_completion_claim<C: CompletionClaim>(claim: &C, budget: &ClaimBudget) -> ClaimReport {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut report = ClaimReport {
        name: claim.name(),
        chains_checked: 0,
        mcp_of_j: true,
        density_witnesses: 0,
        criterion_pairs: 0,
        verdict: ClaimVerdict::ConsistentWithinBudget,
    };
    let fail = |report: &mut ClaimReport, msg: String| {
        if report.passed() {
            report.verdict = ClaimVerdict::Counterexample(msg);
        }
    };
    let chains = claim.chains(budget, &mut rng);
    let points = claim.points(budget, &mut rng);
    for chain in chains.iter().take(budget.chains) {
        report.chains_checked += 1;
        for n in 1..budget.chain_len {
            if !claim.x_leq(&claim.term(chain, n - 1), &claim.term(chain, n)) {
                fail(
                    &mut report,
                    format!("chain {chain:?} decreases at step {n}"),
                );
            }
        }
        let Some(top) = claim.y_sup(chain) else {
            fail(
                &mut report,
                format!("the image of {chain:?} has no supremum in Y"),
            );
            continue;
        };
        for n in 0..budget.chain_len {
            if !claim.y_leq(&claim.embed(&claim.term(chain, n)), &top) {
                fail(
                    &mut report,
                    format!("claimed supremum {top:?} is below term {n} of {chain:?}"),
                );
            }
        }
        if let Some(s) = claim.x_sup(chain) {
            if claim.embed(&s) != top {
                report.mcp_of_j = false;
                fail(
                    &mut report,
                    format!("j moves the supremum of {chain:?}: j({s:?}) != {top:?}"),
                );
            }
        }
        for a in &points {
            report.criterion_pairs += 1;
            let in_y = claim.y_leq(&claim.embed(a), &top);
            let in_x = claim.x_in_hat(chain, a);
            if in_y != in_x {
                fail(
                    &mut report,
                    format!(
                        "B = {chain:?}, a = {a:?}: j(a) <= sup j(B) is {in_y} but a in hat(B) is {in_x}"
                    ),
                );
            }
        }
    }
    for (y, chain) in claim.targets(budget, &mut rng) {
        match claim.y_sup(&chain) {
            Some(s) if s == y => report.density_witnesses += 1,
            other => fail(
                &mut report,
                format!("density witness {chain:?} reaches {other:?}, not {y:?}"),
            ),
        }
    }
    report
}

/// Subsets of ℕ that are eventually periodic: a finite prefix followed by a repeated block.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodicSet {
    pub prefix: Vec<bool>,
    pub cycle: Vec<bool>,
}

impl PeriodicSet {
    pub fn finite(members: &[usize]) -> Self {
        let len = members.iter().max().map_or(0, |m| m + 1);
        let mut prefix = vec![false; len];
        for &m in members {
            prefix[m] = true;
        }
        PeriodicSet {
            prefix,
            cycle: vec![false],
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn is_finite(&self) -> bool {
        self.cycle.iter().all(|b| !b)
    }

    /// Indices past which both sets repeat with a common period.
    fn horizon(&self, other: &Self) -> usize {
        self.prefix.len().max(other.prefix.len()) + self.cycle.len() * other.cycle.len()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        (0..self.horizon(other)).all(|i| !self.contains(i) || other.contains(i))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let h = self.prefix.len().max(other.prefix.len());
        let p = self.cycle.len() * other.cycle.len();
        PeriodicSet {
            prefix: (0..h)
                .map(|i| self.contains(i) && other.contains(i))
                .collect(),
            cycle: (h..h + p)
                .map(|i| self.contains(i) && other.contains(i))
                .collect(),
        }
    }

    pub fn members_below(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|&i| self.contains(i)).collect()
    }
}

impl PartialEq for PeriodicSet {
    fn eq(&self, other: &Self) -> bool {
        self.is_subset(other) && other.is_subset(self)
    }
}

fn random_periodic(rng: &mut ChaCha8Rng) -> PeriodicSet {
    let plen = rng.gen_range(0..8);
    let clen = rng.gen_range(1..5);
    let mut s = PeriodicSet {
        prefix: (0..plen).map(|_| rng.gen_bool(0.5)).collect(),
        cycle: (0..clen).map(|_| rng.gen_bool(0.5)).collect(),
    };
    if rng.gen_bool(0.3) {
        s.cycle = vec![false];
    }
    s
}

/// Finite subsets of ℕ completed by all subsets, sampled through eventually periodic ones.
pub struct FiniteSubsetsClaim;

/// The chain `n ↦ start ∪ (target ∩ [0, n))`.
#[derive(Clone, Debug)]
pub struct GrowingSet {
    pub start: Vec<usize>,
    pub target: PeriodicSet,
}

impl CompletionClaim for FiniteSubsetsClaim {
    type X = Vec<usize>;
    type Y = PeriodicSet;
    type Chain = GrowingSet;

    fn name(&self) -> String {
        "finite subsets of ℕ in the power set".into()
    }
    fn embed(&self, x: &Vec<usize>) -> PeriodicSet {
        PeriodicSet::finite(x)
    }
    fn x_leq(&self, a: &Vec<usize>, b: &Vec<usize>) -> bool {
        a.iter().all(|i| b.contains(i))
    }
    fn y_leq(&self, a: &PeriodicSet, b: &PeriodicSet) -> bool {
        a.is_subset(b)
    }
    fn term(&self, c: &GrowingSet, n: usize) -> Vec<usize> {
        let mut v = c.target.members_below(n);
        for &s in &c.start {
            if !v.contains(&s) {
                v.push(s);
            }
        }
        v.sort_unstable();
        v
    }
    fn x_sup(&self, c: &GrowingSet) -> Option<Vec<usize>> {
        // The chain stabilises exactly when its target is finite.
        c.target
            .is_finite()
            .then(|| self.term(c, c.target.prefix.len()))
    }
    fn y_sup(&self, c: &GrowingSet) -> Option<PeriodicSet> {
        let s = PeriodicSet::finite(&c.start);
        let mut out = c.target.clone();
        let h = s.prefix.len().max(out.prefix.len()) + out.cycle.len();
        let cyc = out.cycle.clone();
        out.prefix = (0..h).map(|i| s.contains(i) || out.contains(i)).collect();
        out.cycle = (0..cyc.len())
            .map(|k| out.cycle[(h - c.target.prefix.len() + k) % cyc.len()])
            .collect();
        Some(out)
    }
    fn x_in_hat(&self, c: &GrowingSet, a: &Vec<usize>) -> bool {
        // Directed subsets of finite sets are finite, so the closure is the down-set.
        let n = a.iter().max().map_or(0, |m| m + 1);
        self.x_leq(a, &self.term(c, n))
    }
    fn chains(&self, b: &ClaimBudget, rng: &mut ChaCha8Rng) -> Vec<GrowingSet> {
        (0..b.chains)
            .map(|_| {
                let target = random_periodic(rng);
                let start = (0..rng.gen_range(0..3))
                    .map(|_| rng.gen_range(0..12))
                    .collect();
                GrowingSet { start, target }
            })
            .collect()
    }
    fn points(&self, b: &ClaimBudget, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
        (0..b.points)
            .map(|_| {
                let mut v: Vec<usize> = (0..rng.gen_range(0..4))
                    .map(|_| rng.gen_range(0..16))
                    .collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect()
    }
    fn targets(&self, b: &ClaimBudget, rng: &mut ChaCha8Rng) -> Vec<(PeriodicSet, GrowingSet)> {
        (0..b.chains / 4)
            .map(|_| {
                let t = random_periodic(rng);
                (
                    t.clone(),
                    GrowingSet {
                        start: vec![],
                        target: t,
                    },
                )
            })
            .collect()
    }
}

/// Finitely supported rational sequences, completed by `[0, ∞]`-valued sequences.
/// Completed elements are sampled as a finite prefix followed by a constant tail.
pub struct SequencesClaim;

/// Sequence in `[0, ∞]^ℕ` given by a prefix and a constant tail; `None` stands for `∞`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailSequence {
    pub prefix: Vec<Option<u32>>,
    pub tail: Option<u32>,
}

impl TailSequence {
    pub fn at(&self, i: usize) -> Option<u32> {
        self.prefix.get(i).copied().unwrap_or(self.tail)
    }

    fn le(a: Option<u32>, b: Option<u32>) -> bool {
        match (a, b) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(x), Some(y)) => x <= y,
        }
    }

    fn normal(&self) -> (Vec<Option<u32>>, Option<u32>) {
        let mut p = self.prefix.clone();
        while p.last() == Some(&self.tail) {
            p.pop();
        }
        (p, self.tail)
    }
}

/// The chain `n ↦ (min(target_i, n) for i < n, then 0)`.
#[derive(Clone, Debug)]
pub struct Truncations {
    pub target: TailSequence,
}

impl CompletionClaim for SequencesClaim {
    /// Finitely supported, integer valued for exactness.
    type X = Vec<u32>;
    type Y = (Vec<Option<u32>>, Option<u32>);
    type Chain = Truncations;

    fn name(&self) -> String {
        "finitely supported sequences in [0, ∞]^ℕ".into()
    }
    fn embed(&self, x: &Vec<u32>) -> Self::Y {
        TailSequence {
            prefix: x.iter().map(|&v| Some(v)).collect(),
            tail: Some(0),
        }
        .normal()
    }
    fn x_leq(&self, a: &Vec<u32>, b: &Vec<u32>) -> bool {
        a.iter()
            .enumerate()
            .all(|(i, &v)| v <= b.get(i).copied().unwrap_or(0))
    }
    fn y_leq(&self, a: &Self::Y, b: &Self::Y) -> bool {
        let (sa, sb) = (
            TailSequence {
                prefix: a.0.clone(),
                tail: a.1,
            },
            TailSequence {
                prefix: b.0.clone(),
                tail: b.1,
            },
        );
        let h = a.0.len().max(b.0.len()) + 1;
        (0..h).all(|i| TailSequence::le(sa.at(i), sb.at(i)))
    }
    fn term(&self, c: &Truncations, n: usize) -> Vec<u32> {
        (0..n)
            .map(|i| c.target.at(i).map_or(n as u32, |v| v.min(n as u32)))
            .collect()
    }
    fn x_sup(&self, c: &Truncations) -> Option<Vec<u32>> {
        let (p, tail) = c.target.normal();
        if tail != Some(0) || p.contains(&None) {
            return None;
        }
        Some(p.into_iter().map(|v| v.unwrap()).collect())
    }
    fn y_sup(&self, c: &Truncations) -> Option<Self::Y> {
        Some(c.target.normal())
    }
    fn x_in_hat(&self, c: &Truncations, a: &Vec<u32>) -> bool {
        // Closure of a chain of finitely supported sequences is its down-set;
        // a term late enough dominates `a` whenever any term does.
        let n = a.len().max(a.iter().copied().max().unwrap_or(0) as usize) + 1;
        self.x_leq(a, &self.term(c, n))
    }
    fn chains(&self, b: &ClaimBudget, rng: &mut ChaCha8Rng) -> Vec<Truncations> {
        (0..b.chains)
            .map(|_| Truncations {
                target: random_tail(rng),
            })
            .collect()
    }
    fn points(&self, b: &ClaimBudget, rng: &mut ChaCha8Rng) -> Vec<Vec<u32>> {
        (0..b.points)
            .map(|_| {
                (0..rng.gen_range(0..6))
                    .map(|_| rng.gen_range(0..6))
                    .collect()
            })
            .collect()
    }
    fn targets(&self, b: &ClaimBudget, rng: &mut ChaCha8Rng) -> Vec<(Self::Y, Truncations)> {
        (0..b.chains / 4)
            .map(|_| {
                let t = random_tail(rng);
                (t.normal(), Truncations { target: t })
            })
            .collect()
    }
}

fn random_tail(rng: &mut ChaCha8Rng) -> TailSequence {
    let val = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.2) {
            None
        } else {
            Some(rng.gen_range(0..5))
        }
    };
    let prefix = (0..rng.gen_range(0..6)).map(|_| val(rng)).collect();
    let tail = if rng.gen_bool(0.5) { Some(0) } else { val(rng) };
    TailSequence { prefix, tail }
}

/// Position on a discretised unit interval: `Below(k)` is `1 - 2^-k`, `One` is `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum UnitPoint {
    Below(u32),
    One,
}

/// Two copies of `[0,1)` claimed to be completed by two copies of `[0,1]`
/// sharing their right end. Density holds but the criterion fails across copies.
pub struct SharedEndClaim;

/// The chain `n ↦ (copy, Below(n))`.
#[derive(Clone, Copy, Debug)]
pub struct RisingInCopy {
    pub copy: u8,
}

impl CompletionClaim for SharedEndClaim {
    type X = (u8, u32);
    /// `None` is the shared right end.
    type Y = Option<(u8, u32)>;
    type Chain = RisingInCopy;

    fn name(&self) -> String {
        "two open intervals in two closed intervals with a shared end".into()
    }
    fn embed(&self, x: &(u8, u32)) -> Self::Y {
        Some(*x)
    }
    fn x_leq(&self, a: &(u8, u32), b: &(u8, u32)) -> bool {
        a.0 == b.0 && a.1 <= b.1
    }
    fn y_leq(&self, a: &Self::Y, b: &Self::Y) -> bool {
        match (a, b) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(x), Some(y)) => self.x_leq(x, y),
        }
    }
    fn term(&self, c: &RisingInCopy, n: usize) -> (u8, u32) {
        (c.copy, n as u32)
    }
    fn x_sup(&self, _: &RisingInCopy) -> Option<(u8, u32)> {
        None
    }
    fn y_sup(&self, _: &RisingInCopy) -> Option<Self::Y> {
        Some(None)
    }
    fn x_in_hat(&self, c: &RisingInCopy, a: &(u8, u32)) -> bool {
        a.0 == c.copy
    }
    fn chains(&self, _: &ClaimBudget, _: &mut ChaCha8Rng) -> Vec<RisingInCopy> {
        vec![RisingInCopy { copy: 0 }, RisingInCopy { copy: 1 }]
    }
    fn points(&self, _: &ClaimBudget, _: &mut ChaCha8Rng) -> Vec<(u8, u32)> {
        (0..4).flat_map(|k| [(0, k), (1, k)]).collect()
    }
    fn targets(&self, _: &ClaimBudget, _: &mut ChaCha8Rng) -> Vec<(Self::Y, RisingInCopy)> {
        vec![(None, RisingInCopy { copy: 0 })]
    }
}

/// `[0,1]` claimed to be completed by `[0,1] ∪ {1'}`, where `1'` bounds `[0,1)` but is unrelated to `1`.
pub struct RivalEndClaim;

impl CompletionClaim for RivalEndClaim {
    type X = UnitPoint;
    /// `None` is the rival point `1'`.
    type Y = Option<UnitPoint>;
    type Chain = ();

    fn name(&self) -> String {
        "closed interval inside closed interval with a rival end".into()
    }
    fn embed(&self, x: &UnitPoint) -> Self::Y {
        Some(*x)
    }
    fn x_leq(&self, a: &UnitPoint, b: &UnitPoint) -> bool {
        a <= b
    }
    fn y_leq(&self, a: &Self::Y, b: &Self::Y) -> bool {
        match (a, b) {
            (None, None) => true,
            (Some(UnitPoint::Below(_)), None) => true,
            (_, None) | (None, _) => false,
            (Some(x), Some(y)) => x <= y,
        }
    }
    fn term(&self, _: &(), n: usize) -> UnitPoint {
        UnitPoint::Below(n as u32)
    }
    fn x_sup(&self, _: &()) -> Option<UnitPoint> {
        Some(UnitPoint::One)
    }
    fn y_sup(&self, _: &()) -> Option<Self::Y> {
        // Both ends bound the image and neither is below the other.
        let bounds = [Some(UnitPoint::One), None];
        let least: Vec<_> = bounds
            .iter()
            .filter(|b| bounds.iter().all(|c| self.y_leq(b, c)))
            .collect();
        least.first().map(|b| **b)
    }
    fn x_in_hat(&self, _: &(), _: &UnitPoint) -> bool {
        true
    }
    fn chains(&self, _: &ClaimBudget, _: &mut ChaCha8Rng) -> Vec<()> {
        vec![()]
    }
    fn points(&self, _: &ClaimBudget, _: &mut ChaCha8Rng) -> Vec<UnitPoint> {
        vec![UnitPoint::Below(0), UnitPoint::One]
    }
    fn targets(&self, _: &ClaimBudget, _: &mut ChaCha8Rng) -> Vec<(Self::Y, ())> {
        vec![]
    }
}

/// The identity on a finite complete lattice.
pub struct FiniteIdentityClaim(pub FinitePoset);

impl CompletionClaim for FiniteIdentityClaim {
    type X = usize;
    type Y = usize;
    /// Strictly increasing list of elements; the chain repeats its last entry.
    type Chain = Vec<usize>;

    fn name(&self) -> String {
        format!("identity on a {}-element poset", self.0.len())
    }
    fn embed(&self, x: &usize) -> usize {
        *x
    }
    fn x_leq(&self, a: &usize, b: &usize) -> bool {
        self.0.leq(*a, *b)
    }
    fn y_leq(&self, a: &usize, b: &usize) -> bool {
        self.0.leq(*a, *b)
    }
    fn term(&self, c: &Vec<usize>, n: usize) -> usize {
        c[n.min(c.len() - 1)]
    }
    fn x_sup(&self, c: &Vec<usize>) -> Option<usize> {
        c.last().copied()
    }
    fn y_sup(&self, c: &Vec<usize>) -> Option<usize> {
        c.last().copied()
    }
    fn x_in_hat(&self, c: &Vec<usize>, a: &usize) -> bool {
        c.iter().any(|&x| self.0.leq(*a, x))
    }
    fn chains(&self, b: &ClaimBudget, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
        let n = self.0.len();
        (0..b.chains)
            .map(|_| {
                let mut c = vec![rng.gen_range(0..n)];
                loop {
                    let last = *c.last().unwrap();
                    let above: Vec<usize> = (0..n).filter(|&y| self.0.lt(last, y)).collect();
                    if above.is_empty() || rng.gen_bool(0.3) {
                        break c;
                    }
                    c.push(above[rng.gen_range(0..above.len())]);
                }
            })
            .collect()
    }
    fn points(&self, _: &ClaimBudget, _: &mut ChaCha8Rng) -> Vec<usize> {
        (0..self.0.len()).collect()
    }
    fn targets(&self, _: &ClaimBudget, _: &mut ChaCha8Rng) -> Vec<(usize, Vec<usize>)> {
        (0..self.0.len()).map(|x| (x, vec![x])).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TruncationReport {
    pub checked: usize,
    /// `(B, a)` pairs with `a <= tip B` but `a` outside the closure of `↓B ∩ ↓a`.
    pub failures: Vec<(String, Code)>,
}

impl TruncationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For each generator `B` with a tip and each core element `a` below it, test
/// whether `a` lies in the lower sup-closure of `↓B ∩ ↓a`.
pub fn truncation_check(
    y: &BranchPoset,
    sets: &[Generator],
    cfg: &WindowConfig,
) -> crate::Result<TruncationReport> {
    let window = y.window(cfg.k());
    let engine = Engine::new(y, &window, cfg.core);
    let mut report = TruncationReport {
        checked: 0,
        failures: Vec::new(),
    };
    for gen in sets {
        let Some(tip) = y.tip(gen, cfg)? else {
            continue;
        };
        let ti = window.index_of(&tip).expect("tip lies in the window");
        let b = window.subset(|c| gen.contains(c));
        let down_b = engine.down(&b);
        for a in engine.below(ti).iter() {
            if !window.in_core(&window.elems[a], cfg.core) {
                continue;
            }
            report.checked += 1;
            let meet = down_b.intersection(engine.below(a));
            if !engine.hat(&meet).contains(a) {
                report
                    .failures
                    .push((format!("{gen:?}"), window.elems[a].clone()));
            }
        }
    }
    Ok(report)
}

/// Meet-map form for the power set: for finite `b` and a growing chain `D`,
/// `sup(d ∩ b) = (sup D) ∩ b`. Returns the number of checked pairs and the first failure.
pub fn power_set_meet_check(budget: &ClaimBudget) -> (usize, Option<String>) {
    let claim = FiniteSubsetsClaim;
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let chains = claim.chains(budget, &mut rng);
    let points = claim.points(budget, &mut rng);
    let mut checked = 0;
    for c in &chains {
        let top = claim.y_sup(c).expect("power set is complete");
        for b in &points {
            checked += 1;
            let bset = PeriodicSet::finite(b);
            let lhs = top.intersect(&bset);
            // The meets with the terms stabilise once the terms pass max(b).
            let n = b.iter().max().map_or(0, |m| m + 1) + c.start.iter().max().map_or(0, |m| m + 1);
            let rhs = PeriodicSet::finite(&claim.term(c, n)).intersect(&bset);
            if lhs != rhs {
                return (checked, Some(format!("b = {b:?}, D = {c:?}")));
            }
        }
    }
    (checked, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::fixtures;

    #[test]
    fn positive_claims_pass() {
        let b = ClaimBudget::default();
        let r = check_completion_claim(&FiniteSubsetsClaim, &b);
        assert!(r.passed(), "{:?}", r.verdict);
        assert_eq!(r.chains_checked, 64);
        let r = check_completion_claim(&SequencesClaim, &b);
        assert!(r.passed(), "{:?}", r.verdict);
        let r = check_completion_claim(&FiniteIdentityClaim(FinitePoset::powerset(3)), &b);
        assert!(r.passed(), "{:?}", r.verdict);
    }

    #[test]
    fn negative_claims_fail() {
        let b = ClaimBudget::default();
        assert!(!check_completion_claim(&SharedEndClaim, &b).passed());
        let r = check_completion_claim(&RivalEndClaim, &b);
        assert!(
            matches!(r.verdict, ClaimVerdict::Counterexample(ref m) if m.contains("no supremum"))
        );
    }

    #[test]
    fn periodic_set_union() {
        let c = GrowingSet {
            start: vec![9],
            target: PeriodicSet {
                prefix: vec![true],
                cycle: vec![false, true],
            },
        };
        let s = FiniteSubsetsClaim.y_sup(&c).unwrap();
        assert!(
            s.contains(0)
                && s.contains(9)
                && s.contains(2)
                && !s.contains(1)
                && !s.contains(3)
                && s.contains(4)
        );
    }

    #[test]
    fn glued_chains_do_not_truncate() {
        let y = fixtures::glued_chains();
        let r = truncation_check(
            &y,
            &[Generator::Families(vec![1])],
            &WindowConfig::default(),
        )
        .unwrap();
        assert!(!r.passed());
        assert!(r.failures.iter().any(|(_, a)| a.family == 2));
    }

    #[test]
    fn chains_truncate() {
        let y = fixtures::naturals(true);
        let r =
            truncation_check(&y, &[Generator::Finite(vec![0])], &WindowConfig::default()).unwrap();
        assert!(r.checked > 0 && r.passed());
        assert_eq!(power_set_meet_check(&ClaimBudget::default()).1, None);
    }
}
