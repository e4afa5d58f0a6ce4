//! Directed completion of a [`BranchPoset`], computed layer by layer.
//!
//! Every element of the completion is represented by its ideal: the lower,
//! directed-sup-closed subset of the original poset it stands for. Within a
//! window these ideals are finite bitsets. Round `r` looks at chains built from
//! elements already present (base elements or limits added in earlier rounds)
//! by shifting some of their free coordinates, and adds the supremum of every
//! chain whose ideal is not yet represented. The number of rounds that add
//! something is the number of layers the completion needs.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::branch::{BranchPoset, Code, Coord, Engine, Window, WindowConfig};
use super::subset::Subset;
use crate::error::{Error, Result};

/// A base element together with the coordinates shifted to infinity,
/// innermost stage first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Point {
    pub base: Code,
    pub stages: Vec<Vec<usize>>,
}

impl Point {
    pub fn base(code: Code) -> Self {
        Point {
            base: code,
            stages: Vec::new(),
        }
    }

    pub fn is_base(&self) -> bool {
        self.stages.is_empty()
    }

    fn varied(&self) -> impl Iterator<Item = usize> + '_ {
        self.stages.iter().flatten().copied()
    }

    fn shifted(&self, coords: &[usize], by: u64) -> Point {
        let mut p = self.clone();
        for &i in coords {
            if let Coord::Nat(n) = p.base.coords[i] {
                p.base.coords[i] = Coord::Nat(n + by);
            }
        }
        p
    }

    fn limit(&self, vary: Vec<usize>) -> Point {
        let mut p = self.clone();
        p.stages.push(vary);
        p
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.base)?;
        for s in &self.stages {
            write!(f, "→∞{s:?}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Label {
    Point(Point),
    /// The least element added by the enhanced completion.
    Bottom,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompletedElement {
    pub label: Label,
    /// 0 for base elements (and the added bottom), otherwise the round that created it.
    pub layer: usize,
    #[serde(skip)]
    pub ideal: Subset,
}

/// The completion restricted to elements whose fixed coordinates lie in the core.
#[derive(Clone, Debug, Serialize)]
pub struct BranchCompletion {
    pub name: String,
    pub elements: Vec<CompletedElement>,
    /// Rounds that added at least one element.
    pub layers: usize,
    pub added_per_layer: Vec<usize>,
    #[serde(skip)]
    pub window: Window,
    pub core: u64,
}

impl BranchCompletion {
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.elements[i].ideal.is_subset(&self.elements[j].ideal)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Index of the image of a base element.
    pub fn embed(&self, code: &Code) -> Option<usize> {
        self.elements
            .iter()
            .position(|e| e.label == Label::Point(Point::base(code.clone())))
    }

    pub fn added(&self) -> impl Iterator<Item = (usize, &CompletedElement)> {
        self.elements
            .iter()
            .enumerate()
            .filter(|(_, e)| e.layer > 0)
    }

    /// Core members of an element's ideal.
    pub fn ideal_codes(&self, i: usize) -> Vec<Code> {
        self.elements[i]
            .ideal
            .iter()
            .map(|k| &self.window.elems[k])
            .filter(|c| self.window.in_core(c, self.core))
            .cloned()
            .collect()
    }

    fn signature(&self) -> Vec<(Label, usize, Vec<bool>)> {
        let n = self.len();
        let mut rows: Vec<_> = (0..n)
            .map(|i| {
                (
                    self.elements[i].label.clone(),
                    self.elements[i].layer,
                    (0..n).map(|j| self.leq(i, j)).collect(),
                )
            })
            .collect();
        rows.sort_by(|a, b| format!("{:?}", a.0).cmp(&format!("{:?}", b.0)));
        rows
    }
}

/// Options for [`directed_completion_branch`].
#[derive(Clone, Copy, Debug, Default)]
pub struct CompletionOptions {
    pub window: WindowConfig,
    /// Add a least element when the poset has none.
    pub enhanced: bool,
}

/// Complete `poset`, then recompute on a larger window and insist on the same
/// layers, labels and order among the core elements.
pub fn directed_completion_branch(
    poset: &BranchPoset,
    opts: &CompletionOptions,
) -> Result<BranchCompletion> {
    let first = complete_once(poset, &opts.window, opts.enhanced)?;
    let second = complete_once(poset, &opts.window.enlarged(), opts.enhanced)?;
    if first.signature() != second.signature() || first.layers != second.layers {
        return Err(Error::UnsupportedPresentation(format!(
            "completion of {} depends on the window size",
            poset.name
        )));
    }
    Ok(first)
}

struct Builder<'a> {
    engine: Engine<'a>,
    cfg: WindowConfig,
    memo: RefCell<HashMap<Point, Subset>>,
}

impl Builder<'_> {
    /// Ideal of `p` inside the window.
    fn ideal(&self, p: &Point) -> Subset {
        if let Some(s) = self.memo.borrow().get(p) {
            return s.clone();
        }
        let out = match p.stages.split_last() {
            None => match self.engine.window.index_of(&p.base) {
                Some(i) => self.engine.below(i).clone(),
                None => self.engine.down_of_code(&p.base),
            },
            Some((outer, _)) => {
                let inner = Point {
                    base: p.base.clone(),
                    stages: p.stages[..p.stages.len() - 1].to_vec(),
                };
                let mut union = Subset::empty(self.engine.window.len());
                for m in self.window_members(&inner, outer) {
                    union = union.union(&self.ideal(&inner.shifted(outer, m)));
                }
                union = union.union(&self.ideal(&inner.shifted(outer, self.far_shift(&inner))));
                self.engine.hat(&union)
            }
        };
        self.memo.borrow_mut().insert(p.clone(), out.clone());
        out
    }

    /// A shift that lifts every coordinate of `p` above all window coordinates
    /// and above its own other coordinates.
    fn far_shift(&self, p: &Point) -> u64 {
        p.base.max_nat() + self.cfg.k()
    }

    /// Shifts `m` for which the shifted coordinates stay inside the window.
    fn window_members(&self, p: &Point, vary: &[usize]) -> std::ops::Range<u64> {
        let top = vary
            .iter()
            .filter_map(|&i| p.base.coords[i].nat())
            .max()
            .unwrap_or(0);
        0..self.cfg.k().saturating_sub(top)
    }

    /// Whether shifting `vary` in `p` produces a strictly increasing chain.
    fn increasing(&self, p: &Point, vary: &[usize]) -> bool {
        let members: Vec<u64> = self.window_members(p, vary).collect();
        if members.len() < 2 {
            return false;
        }
        let far = p.shifted(vary, self.far_shift(p));
        if p.is_base() {
            let poset = self.engine.poset;
            let ok = members
                .windows(2)
                .all(|w| poset.leq(&p.shifted(vary, w[0]).base, &p.shifted(vary, w[1]).base));
            return ok && poset.leq(&p.shifted(vary, *members.last().unwrap()).base, &far.base);
        }
        let probe = members.len().min(3);
        let ideals: Vec<Subset> = members[..probe]
            .iter()
            .map(|&m| self.ideal(&p.shifted(vary, m)))
            .collect();
        let far_ideal = self.ideal(&far);
        ideals.windows(2).all(|w| w[0].is_subset(&w[1]))
            && ideals[0] != ideals[1]
            && ideals.last().unwrap().is_subset(&far_ideal)
    }
}

impl Builder<'_> {
    /// A single base code above every member of the chains `p` is built from,
    /// with inner stages pushed further out than outer ones.
    fn far_code(&self, p: &Point, beyond: u64) -> Code {
        let mut q = p.clone();
        while let Some(outer) = q.stages.pop() {
            let by = q.base.max_nat() + beyond;
            q = q.shifted(&outer, by);
        }
        q.base
    }

    /// Members of `self.engine.window` below every element of `probe` above `code`.
    ///
    /// The probe window is larger than the working one so that elements at the
    /// edge of the working window are not mistaken for bounds.
    fn cut_of(&self, probe: &Window, code: Option<&Code>) -> Subset {
        let poset = self.engine.poset;
        let upper: Vec<&Code> = probe
            .elems
            .iter()
            .filter(|y| code.is_none_or(|c| poset.leq(c, y)))
            .collect();
        self.engine
            .window
            .subset(|x| upper.iter().all(|y| poset.leq(x, y)))
    }
}

fn complete_once(
    poset: &BranchPoset,
    cfg: &WindowConfig,
    enhanced: bool,
) -> Result<BranchCompletion> {
    let window = poset.window(cfg.k());
    let engine = Engine::new(poset, &window, cfg.core);
    let b = Builder {
        engine,
        cfg: *cfg,
        memo: RefCell::new(HashMap::new()),
    };
    let mut elements: Vec<CompletedElement> = window
        .elems
        .iter()
        .enumerate()
        .filter(|(_, c)| window.in_core(c, cfg.core))
        .map(|(i, c)| CompletedElement {
            label: Label::Point(Point::base(c.clone())),
            layer: 0,
            ideal: b.engine.below(i).clone(),
        })
        .collect();
    // A least element of the window that sits outside the core is an edge artefact.
    let least = b.engine.least(&Subset::full(window.len()));
    if enhanced && least.is_none_or(|i| !window.in_core(&window.elems[i], cfg.core)) {
        elements.push(CompletedElement {
            label: Label::Bottom,
            layer: 0,
            ideal: Subset::empty(window.len()),
        });
    }
    let mut known: HashMap<Subset, usize> = HashMap::new();
    for (i, e) in elements.iter().enumerate() {
        known.entry(e.ideal.clone()).or_insert(i);
    }
    let mut added_per_layer = Vec::new();
    let mut frontier: Vec<usize> = (0..elements.len()).collect();
    let mut round = 0;
    loop {
        round += 1;
        let mut fresh: Vec<CompletedElement> = Vec::new();
        for &idx in &frontier {
            let Label::Point(p) = &elements[idx].label else {
                continue;
            };
            let fam = poset.family_of(&p.base);
            let varied: Vec<usize> = p.varied().collect();
            let free: Vec<usize> = (0..fam.arity())
                .filter(|&i| {
                    fam.bound.get(i).copied().flatten().is_none()
                        && p.base.coords[i] != Coord::Omega
                        && !varied.contains(&i)
                })
                .collect();
            for mask in 1u32..(1 << free.len()) {
                let vary: Vec<usize> = free
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &i)| i)
                    .collect();
                if !b.increasing(p, &vary) {
                    continue;
                }
                let cand = p.limit(vary);
                let ideal = b.ideal(&cand);
                if known.contains_key(&ideal) {
                    continue;
                }
                known.insert(ideal.clone(), elements.len() + fresh.len());
                fresh.push(CompletedElement {
                    label: Label::Point(cand),
                    layer: round,
                    ideal,
                });
            }
        }
        if fresh.is_empty() {
            break;
        }
        if round > cfg.depth {
            return Err(Error::BudgetExceeded(format!(
                "completion needs more than {} layers",
                cfg.depth
            )));
        }
        added_per_layer.push(fresh.len());
        // Chains through older elements were all examined already.
        let start = elements.len();
        elements.extend(fresh);
        frontier = (start..elements.len()).collect();
    }
    Ok(BranchCompletion {
        name: poset.name.clone(),
        layers: added_per_layer.len(),
        added_per_layer,
        elements,
        window,
        core: cfg.core,
    })
}

/// The maps between the enhanced directed completion and the Dedekind–MacNeille
/// completion of a [`BranchPoset`], with cuts restricted to the core.
#[derive(Clone, Debug, Serialize)]
pub struct BranchComparison {
    pub directed: BranchCompletion,
    /// Distinct cuts, each as its core members.
    pub cuts: Vec<Vec<Code>>,
    /// Directed element index to cut index.
    pub t: Vec<usize>,
    /// Cut index to directed element index.
    pub s: Vec<usize>,
    pub ts_is_identity: bool,
    pub t_injective: bool,
    /// Two distinct directed elements with the same cut.
    pub non_injectivity_witness: Option<(Label, Label)>,
}

/// Build both completions of `poset` and the comparison maps between them.
pub fn compare_completions_branch(
    poset: &BranchPoset,
    cfg: &WindowConfig,
) -> Result<BranchComparison> {
    let directed = directed_completion_branch(
        poset,
        &CompletionOptions {
            window: *cfg,
            enhanced: true,
        },
    )?;
    let window = &directed.window;
    let b = Builder {
        engine: Engine::new(poset, window, cfg.core),
        cfg: *cfg,
        memo: RefCell::new(HashMap::new()),
    };
    let probe = poset.window(4 * cfg.k());
    let mut cuts: Vec<Subset> = Vec::new();
    let mut t = Vec::new();
    for e in &directed.elements {
        let cut = match &e.label {
            Label::Point(p) => b.cut_of(&probe, Some(&b.far_code(p, probe.k))),
            Label::Bottom => b.cut_of(&probe, None),
        };
        let idx = match cuts.iter().position(|c| *c == cut) {
            Some(i) => i,
            None => {
                cuts.push(cut);
                cuts.len() - 1
            }
        };
        t.push(idx);
    }
    let mut s = Vec::new();
    for cut in &cuts {
        let hat = b.engine.hat(cut);
        let target = directed
            .elements
            .iter()
            .position(|e| e.ideal == hat)
            .ok_or_else(|| {
                Error::UnsupportedPresentation(
                    "closure of a cut is not an element of the directed completion".into(),
                )
            })?;
        s.push(target);
    }
    let ts_is_identity = (0..cuts.len()).all(|c| t[s[c]] == c);
    let mut witness = None;
    'outer: for i in 0..t.len() {
        for j in i + 1..t.len() {
            if t[i] == t[j] {
                witness = Some((
                    directed.elements[i].label.clone(),
                    directed.elements[j].label.clone(),
                ));
                break 'outer;
            }
        }
    }
    let cuts = cuts
        .iter()
        .map(|c| {
            c.iter()
                .map(|k| window.elems[k].clone())
                .filter(|x| window.in_core(x, cfg.core))
                .collect()
        })
        .collect();
    Ok(BranchComparison {
        t_injective: witness.is_none(),
        non_injectivity_witness: witness,
        ts_is_identity,
        cuts,
        t,
        s,
        directed,
    })
}

/// Result of checking that the completion of a product is the product of the completions.
#[derive(Clone, Debug, Serialize)]
pub struct ProductLawReport {
    pub checked: usize,
    pub mismatches: Vec<String>,
}

/// Compare the ideal of each completed element of `a × b` with the product of
/// the ideals of its two projections.
pub fn product_law(
    a: &BranchPoset,
    b: &BranchPoset,
    cfg: &WindowConfig,
) -> Result<ProductLawReport> {
    let prod = BranchPoset::product(a, b)?;
    let opts = CompletionOptions {
        window: *cfg,
        enhanced: false,
    };
    let cp = directed_completion_branch(&prod, &opts)?;
    let (wa, wb) = (a.window(cfg.k()), b.window(cfg.k()));
    let ba = Builder {
        engine: Engine::new(a, &wa, cfg.core),
        cfg: *cfg,
        memo: RefCell::new(HashMap::new()),
    };
    let bb = Builder {
        engine: Engine::new(b, &wb, cfg.core),
        cfg: *cfg,
        memo: RefCell::new(HashMap::new()),
    };
    let split_point = |p: &Point| -> (Point, Point) {
        let (x, y) = BranchPoset::split_product_code(a, b, &p.base);
        let ar = x.coords.len();
        let mut px = Point::base(x);
        let mut py = Point::base(y);
        for stage in &p.stages {
            let sx: Vec<usize> = stage.iter().copied().filter(|&i| i < ar).collect();
            let sy: Vec<usize> = stage
                .iter()
                .copied()
                .filter(|&i| i >= ar)
                .map(|i| i - ar)
                .collect();
            if !sx.is_empty() {
                px.stages.push(sx);
            }
            if !sy.is_empty() {
                py.stages.push(sy);
            }
        }
        (px, py)
    };
    let mut report = ProductLawReport {
        checked: 0,
        mismatches: Vec::new(),
    };
    for e in &cp.elements {
        let Label::Point(p) = &e.label else { continue };
        let (px, py) = split_point(p);
        let (ix, iy) = (ba.ideal(&px), bb.ideal(&py));
        let expected = cp.window.subset(|c| {
            let (x, y) = BranchPoset::split_product_code(a, b, c);
            match (wa.index_of(&x), wb.index_of(&y)) {
                (Some(i), Some(j)) => ix.contains(i) && iy.contains(j),
                _ => false,
            }
        });
        let core = |s: &Subset| cp.window.core_part(s, cfg.core);
        report.checked += 1;
        if core(&expected) != core(&e.ideal) {
            report.mismatches.push(format!("{p:?}"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::fixtures;

    fn complete(p: &BranchPoset) -> BranchCompletion {
        directed_completion_branch(p, &CompletionOptions::default()).unwrap()
    }

    #[test]
    fn linked_fibres_need_two_layers() {
        let c = complete(&fixtures::linked_fibres());
        assert_eq!(c.layers, 2);
        // one s_n per core n, then their common supremum
        assert_eq!(c.added_per_layer, vec![4, 1]);
    }

    #[test]
    fn chain_gains_a_cap() {
        let c = complete(&fixtures::naturals(false));
        assert_eq!(c.layers, 1);
        assert_eq!(c.added_per_layer, vec![1]);
        let cap = c.added().next().unwrap().0;
        for i in 0..c.len() {
            assert!(c.leq(i, cap));
        }
    }

    #[test]
    fn finite_chain_is_complete() {
        let c = complete(&fixtures::finite_chain(3));
        assert_eq!(c.layers, 0);
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn capped_chain_is_complete() {
        assert_eq!(complete(&fixtures::naturals(true)).layers, 0);
    }

    #[test]
    fn double_arrow_pairs_complete_branchwise() {
        let c = complete(&fixtures::double_arrow());
        assert_eq!(c.layers, 0);
    }

    #[test]
    fn enhanced_adds_bottom() {
        let p = fixtures::four_copies();
        let opts = CompletionOptions {
            enhanced: true,
            ..Default::default()
        };
        let c = directed_completion_branch(&p, &opts).unwrap();
        assert!(c.elements.iter().any(|e| e.label == Label::Bottom));
    }

    #[test]
    fn four_copies_comparison() {
        let p = fixtures::four_copies();
        let cfg = WindowConfig::default();
        let cmp = compare_completions_branch(&p, &cfg).unwrap();
        assert!(cmp.ts_is_identity);
        assert!(!cmp.t_injective);
        // the four caps are new, the bottom is added, and the cuts are X plus bottom and top
        assert_eq!(cmp.directed.added_per_layer, vec![4]);
        let base = cmp
            .directed
            .elements
            .iter()
            .filter(|e| matches!(&e.label, Label::Point(p) if p.is_base()))
            .count();
        assert_eq!(cmp.cuts.len(), base + 2);
        let (x, y) = cmp.non_injectivity_witness.unwrap();
        assert_ne!(x, y);
    }

    #[test]
    fn product_of_chains() {
        let n = fixtures::naturals(false);
        let r = product_law(&n, &fixtures::finite_chain(2), &WindowConfig::default()).unwrap();
        assert!(r.checked > 0);
        assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);
    }
}
