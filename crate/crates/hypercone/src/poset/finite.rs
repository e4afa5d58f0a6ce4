//! Explicit finite partial orders.
//!
//! Every directed subset of a finite poset contains its own maximum, so the
//! sup-closure operators are trivial here: `A^up = bar A = A` and `hat A = down A`.
//! The interesting closure computations live on [`super::branch::BranchPoset`].
//! This module still implements them through the general definitions so that
//! the finite case can serve as a reference for the symbolic engine.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::subset::Subset;
use crate::error::{Error, Result};

/// A finite partial order given by its full relation matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinitePoset {
    leq: Vec<Vec<bool>>,
    labels: Vec<String>,
}

/// JSON form: `{"elements": [...], "leq": [[i, j], ...]}`. The relation is closed
/// reflexively and transitively before validation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FinitePosetJson {
    pub elements: Vec<String>,
    pub leq: Vec<[usize; 2]>,
}

impl FinitePoset {
    /// Validate a full relation matrix.
    pub fn new(leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = leq.len();
        if leq.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidPoset("relation matrix is not square".into()));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(Error::InvalidPoset(format!("not reflexive at {i}")));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::InvalidPoset(format!(
                        "not antisymmetric at ({i}, {j})"
                    )));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(Error::InvalidPoset(format!(
                            "not transitive at ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        let labels = (0..n).map(|i| i.to_string()).collect();
        Ok(FinitePoset { leq, labels })
    }

    /// Reflexive-transitive closure of the given pairs, then validation.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::InvalidPoset(format!("pair ({a}, {b}) out of range")));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        Self::new(leq)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        Self::new((0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect())
    }

    pub fn from_json(j: &FinitePosetJson) -> Result<Self> {
        let pairs: Vec<_> = j.leq.iter().map(|p| (p[0], p[1])).collect();
        Ok(Self::from_pairs(j.elements.len(), &pairs)?.with_labels(j.elements.clone()))
    }

    pub fn to_json(&self) -> FinitePosetJson {
        let mut leq = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if i != j && self.leq(i, j) {
                    leq.push([i, j]);
                }
            }
        }
        FinitePosetJson {
            elements: self.labels.clone(),
            leq,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.len());
        self.labels = labels;
        self
    }

    pub fn chain(n: usize) -> Self {
        Self::from_fn(n, |i, j| i <= j).expect("chains are posets")
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_fn(n, |i, j| i == j).expect("antichains are posets")
    }

    /// Subsets of a `k`-element set under inclusion; element `m` is the bitmask `m`.
    pub fn powerset(k: usize) -> Self {
        Self::from_fn(1 << k, |a, b| a & !b == 0).expect("power sets are posets")
    }

    /// Componentwise order on the product; element `(i, j)` has index `i * q.len() + j`.
    pub fn product(p: &Self, q: &Self) -> Self {
        let m = q.len();
        Self::from_fn(p.len() * m, |a, b| {
            p.leq(a / m, b / m) && q.leq(a % m, b % m)
        })
        .expect("products of posets are posets")
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq[i][j]
    }

    pub fn empty_set(&self) -> Subset {
        Subset::empty(self.len())
    }

    pub fn all(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn upper_bounds(&self, a: &Subset) -> Subset {
        Subset::from_fn(self.len(), |x| a.iter().all(|y| self.leq(y, x)))
    }

    pub fn lower_bounds(&self, a: &Subset) -> Subset {
        Subset::from_fn(self.len(), |x| a.iter().all(|y| self.leq(x, y)))
    }

    /// Least element of `a`, if any.
    pub fn least(&self, a: &Subset) -> Option<usize> {
        a.iter().find(|&x| a.iter().all(|y| self.leq(x, y)))
    }

    /// Greatest element of `a`, if any.
    pub fn greatest(&self, a: &Subset) -> Option<usize> {
        a.iter().find(|&x| a.iter().all(|y| self.leq(y, x)))
    }

    pub fn sup(&self, a: &Subset) -> Option<usize> {
        self.least(&self.upper_bounds(a))
    }

    pub fn inf(&self, a: &Subset) -> Option<usize> {
        self.greatest(&self.lower_bounds(a))
    }

    pub fn join(&self, i: usize, j: usize) -> Option<usize> {
        self.sup(&Subset::from_indices(self.len(), [i, j]))
    }

    pub fn meet(&self, i: usize, j: usize) -> Option<usize> {
        self.inf(&Subset::from_indices(self.len(), [i, j]))
    }

    pub fn minimum(&self) -> Option<usize> {
        self.least(&self.all())
    }

    pub fn maximum(&self) -> Option<usize> {
        self.greatest(&self.all())
    }

    /// Nonempty, and every pair has an upper bound inside the set.
    pub fn is_directed(&self, a: &Subset) -> bool {
        !a.is_empty()
            && a.iter().all(|x| {
                a.iter()
                    .all(|y| a.iter().any(|z| self.leq(x, z) && self.leq(y, z)))
            })
    }

    pub fn down(&self, a: &Subset) -> Subset {
        Subset::from_fn(self.len(), |x| a.iter().any(|y| self.leq(x, y)))
    }

    pub fn up(&self, a: &Subset) -> Subset {
        Subset::from_fn(self.len(), |x| a.iter().any(|y| self.leq(y, x)))
    }

    pub fn principal_down(&self, x: usize) -> Subset {
        Subset::from_fn(self.len(), |y| self.leq(y, x))
    }

    pub fn is_lower(&self, a: &Subset) -> bool {
        self.down(a) == *a
    }

    /// One sup-closure step: `A` together with the suprema of its directed subsets.
    /// A finite directed set contains its maximum, which is then its supremum,
    /// so the step adds nothing.
    pub fn up_step(&self, a: &Subset) -> Subset {
        a.clone()
    }

    pub fn closure_suite(&self, a: &Subset) -> ClosureReport {
        let down = self.down(a);
        let mut iterates = vec![a.clone()];
        loop {
            let next = self.up_step(iterates.last().unwrap());
            if next == *iterates.last().unwrap() {
                break;
            }
            iterates.push(next);
        }
        let bar = iterates.last().unwrap().clone();
        let mut hat = down.clone();
        loop {
            let next = self.down(&self.up_step(&hat));
            if next == hat {
                break;
            }
            hat = next;
        }
        ClosureReport {
            iteration_count: iterates.len() - 1,
            down,
            iterates,
            bar,
            hat,
        }
    }

    /// Maximum of the sup-closure of `a`, when it exists.
    pub fn tip(&self, a: &Subset) -> Option<usize> {
        self.greatest(&self.closure_suite(a).bar)
    }

    /// Whether every subset has a supremum.
    pub fn is_complete_lattice(&self) -> bool {
        if self.minimum().is_none() {
            return false;
        }
        (0..self.len()).all(|i| (0..self.len()).all(|j| self.join(i, j).is_some()))
    }

    pub fn has_binary_joins(&self) -> Result<()> {
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.join(i, j).is_none() {
                    return Err(Error::NoJoins(i, j));
                }
            }
        }
        Ok(())
    }

    /// `A^{ul}`: lower bounds of the upper bounds.
    pub fn ul(&self, a: &Subset) -> Subset {
        self.lower_bounds(&self.upper_bounds(a))
    }

    /// Isomorphism-invariant code of the relation (minimum over all relabellings).
    /// Only intended for `n <= 8`.
    pub fn canonical_code(&self) -> u64 {
        let n = self.len();
        assert!(n <= 8, "canonical codes are only computed for n <= 8");
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = u64::MAX;
        permute(&mut perm, 0, &mut |p| {
            let mut code = 0u64;
            for i in 0..n {
                for j in 0..n {
                    if i != j && self.leq(p[i], p[j]) {
                        code |= 1 << (i * n + j);
                    }
                }
            }
            best = best.min(code);
        });
        best
    }

    /// All posets on `n` elements up to isomorphism.
    pub fn enumerate_unlabeled(n: usize) -> Vec<FinitePoset> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for p in Self::enumerate_naturally_labeled(n) {
            if seen.insert(p.canonical_code()) {
                out.push(p);
            }
        }
        out
    }

    /// Posets on `0..n` in which `i < j` in the order forces `i < j` as integers.
    /// Every isomorphism class appears at least once.
    pub fn enumerate_naturally_labeled(n: usize) -> Vec<FinitePoset> {
        let mut out = Vec::new();
        let mut rel = vec![vec![false; n]; n];
        extend_natural(&mut rel, 0, n, &mut out);
        out
    }
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

fn extend_natural(rel: &mut Vec<Vec<bool>>, k: usize, n: usize, out: &mut Vec<FinitePoset>) {
    if k == n {
        out.push(FinitePoset {
            leq: rel.clone(),
            labels: (0..n).map(|i| i.to_string()).collect(),
        });
        return;
    }
    // The strict down-set of the new element is any down-closed subset of 0..k.
    for mask in 0u64..(1 << k) {
        let closed =
            (0..k).all(|i| mask >> i & 1 == 0 || (0..k).all(|j| !rel[j][i] || mask >> j & 1 == 1));
        if !closed {
            continue;
        }
        for (i, row) in rel.iter_mut().enumerate().take(k) {
            row[k] = mask >> i & 1 == 1;
        }
        for j in 0..n {
            if j != k {
                rel[k][j] = false;
            }
        }
        rel[k][k] = true;
        extend_natural(rel, k + 1, n, out);
    }
    for row in rel.iter_mut() {
        row[k] = false;
    }
}

/// Output of [`FinitePoset::closure_suite`] and its symbolic counterpart.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosureReport {
    pub down: Subset,
    /// `A, A^up, (A^up)^up, ...` up to the first repetition.
    pub iterates: Vec<Subset>,
    pub bar: Subset,
    pub hat: Subset,
    /// Number of sup-closure steps that changed the set.
    pub iteration_count: usize,
}

/// Dedekind–MacNeille completion: the lower sets `A` with `A = A^{ul}`.
#[derive(Clone, Debug)]
pub struct DmCompletion {
    pub cuts: Vec<Subset>,
    /// Cuts ordered by inclusion.
    pub lattice: FinitePoset,
    /// Index of the cut `down x` for each element `x`.
    pub embedding: Vec<usize>,
}

impl DmCompletion {
    pub fn cut_index(&self, a: &Subset) -> Option<usize> {
        self.cuts.iter().position(|c| c == a)
    }

    /// Join of a family of cuts, computed as `(union)^{ul}`.
    pub fn join(&self, base: &FinitePoset, family: &[usize]) -> usize {
        let mut u = base.empty_set();
        for &c in family {
            u = u.union(&self.cuts[c]);
        }
        self.cut_index(&base.ul(&u)).expect("(union)^{ul} is a cut")
    }

    /// Meet of a family of cuts, computed as `(intersection)^{ul}`.
    pub fn meet(&self, base: &FinitePoset, family: &[usize]) -> usize {
        let mut u = base.all();
        for &c in family {
            u = u.intersection(&self.cuts[c]);
        }
        self.cut_index(&base.ul(&u))
            .expect("(intersection)^{ul} is a cut")
    }
}

/// Every cut is an intersection of principal down-sets (the empty intersection
/// being the whole carrier), so the cuts are the intersection-closure of those.
pub fn dm_completion(p: &FinitePoset) -> DmCompletion {
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue: Vec<Subset> = Vec::new();
    let mut cuts: Vec<Subset> = Vec::new();
    let push = |s: Subset, found: &mut BTreeSet<Vec<usize>>, queue: &mut Vec<Subset>| {
        if found.insert(s.iter().collect()) {
            queue.push(s);
        }
    };
    push(p.all(), &mut found, &mut queue);
    for x in 0..p.len() {
        push(p.principal_down(x), &mut found, &mut queue);
    }
    while let Some(s) = queue.pop() {
        for c in &cuts {
            push(s.intersection(c), &mut found, &mut queue);
        }
        cuts.push(s);
    }
    cuts.sort_by_key(|c| (c.count(), c.iter().collect::<Vec<_>>()));
    let lattice = FinitePoset::from_fn(cuts.len(), |a, b| cuts[a].is_subset(&cuts[b]))
        .expect("inclusion is a partial order");
    let embedding = (0..p.len())
        .map(|x| {
            cuts.iter()
                .position(|c| *c == p.principal_down(x))
                .expect("principal ideals are cuts")
        })
        .collect();
    DmCompletion {
        cuts,
        lattice,
        embedding,
    }
}

/// The directed completion and the Dedekind–MacNeille completion side by side,
/// with the comparison maps between them.
#[derive(Clone, Debug)]
pub struct CompletionComparison {
    pub dm: DmCompletion,
    /// Elements of the enhanced directed completion, as ideals of the base.
    pub ideals: Vec<Subset>,
    /// `S`: cut index to ideal index.
    pub s: Vec<usize>,
    /// `T`: ideal index to cut index.
    pub t: Vec<usize>,
    pub ts_is_identity: bool,
    pub t_injective: bool,
    /// Two distinct ideals with the same image under `T`.
    pub non_injectivity_witness: Option<(usize, usize)>,
}

/// Compare the enhanced directed completion with the Dedekind–MacNeille completion.
///
/// In a finite poset the directed completion consists of the principal
/// down-sets, plus the empty ideal when there is no minimum.
pub fn compare_completions(p: &FinitePoset) -> Result<CompletionComparison> {
    p.has_binary_joins()?;
    let dm = dm_completion(p);
    let mut ideals: Vec<Subset> = (0..p.len()).map(|x| p.principal_down(x)).collect();
    if p.minimum().is_none() {
        ideals.push(p.empty_set());
    }
    let t: Vec<usize> = ideals
        .iter()
        .map(|i| dm.cut_index(&p.ul(i)).expect("A^{ul} is a cut"))
        .collect();
    let s: Vec<usize> = dm
        .cuts
        .iter()
        .map(|c| {
            // A cut is empty or directed; its supremum in the completion is its hat.
            let target = if c.is_empty() {
                c.clone()
            } else {
                p.closure_suite(c).hat
            };
            ideals
                .iter()
                .position(|i| *i == target)
                .expect("cuts of a poset with joins are ideals")
        })
        .collect();
    let ts_is_identity = (0..dm.cuts.len()).all(|c| t[s[c]] == c);
    let mut witness = None;
    'outer: for a in 0..ideals.len() {
        for b in a + 1..ideals.len() {
            if t[a] == t[b] {
                witness = Some((a, b));
                break 'outer;
            }
        }
    }
    Ok(CompletionComparison {
        dm,
        ideals,
        s,
        t,
        ts_is_identity,
        t_injective: witness.is_none(),
        non_injectivity_witness: witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_rejects_cycles() {
        assert!(matches!(
            FinitePoset::from_pairs(2, &[(0, 1), (1, 0)]),
            Err(Error::InvalidPoset(_))
        ));
        let p = FinitePoset::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(p.leq(0, 2));
    }

    #[test]
    fn finite_closures_are_trivial() {
        let p = FinitePoset::powerset(3);
        let a = Subset::from_indices(8, [1, 2, 6]);
        let r = p.closure_suite(&a);
        assert_eq!(r.iteration_count, 0);
        assert_eq!(r.bar, a);
        assert_eq!(r.hat, p.down(&a));
    }

    #[test]
    fn tips() {
        let p = FinitePoset::from_pairs(3, &[(0, 2), (1, 2)]).unwrap();
        assert_eq!(p.tip(&Subset::from_indices(3, [1])), Some(1));
        // Two unrelated points with a common supremum have no tip.
        assert_eq!(p.tip(&Subset::from_indices(3, [0, 1])), None);
        assert_eq!(p.sup(&Subset::from_indices(3, [0, 1])), Some(2));
    }

    #[test]
    fn dm_of_antichain_and_chain() {
        let dm = dm_completion(&FinitePoset::antichain(2));
        assert_eq!(dm.cuts.len(), 4);
        assert!(dm.lattice.is_complete_lattice());
        let chain = FinitePoset::chain(5);
        let dm = dm_completion(&chain);
        assert_eq!(dm.cuts.len(), 5);
        assert_eq!(dm.lattice, chain);
    }

    #[test]
    fn enumeration_counts() {
        let counts: Vec<usize> = (1..=5)
            .map(|n| FinitePoset::enumerate_unlabeled(n).len())
            .collect();
        assert_eq!(counts, vec![1, 2, 5, 16, 63]);
    }

    #[test]
    fn comparison_on_lattices() {
        let c = compare_completions(&FinitePoset::powerset(2)).unwrap();
        assert!(c.ts_is_identity && c.t_injective);
        let point = compare_completions(&FinitePoset::chain(1)).unwrap();
        assert_eq!((point.dm.cuts.len(), point.ideals.len()), (1, 1));
        assert!(matches!(
            compare_completions(&FinitePoset::antichain(2)),
            Err(Error::NoJoins(0, 1))
        ));
    }
}
