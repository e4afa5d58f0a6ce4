//! Finitely presented countable posets.
//!
//! A [`BranchPoset`] is a finite list of *families*. A family of arity `r`
//! contributes the elements `(c_1, ..., c_r)` with each coordinate a natural
//! number (optionally bounded) or, where allowed, the symbol `ω` that sits above
//! every natural number. The order is reflexivity together with a finite list of
//! rules, each a conjunction of comparisons between coordinates of the two
//! elements involved.
//!
//! Because rules only compare coordinates, the relation between two elements
//! depends on the relative order of their coordinates and nothing else. The
//! engine exploits this: every question is answered on a finite *window*
//! (coordinates below `k`), a chain `b + m·1_S` is summarised by the single
//! virtual element `b + k·1_S` whose varying coordinates exceed everything in
//! the window, and each answer is recomputed on a larger window. Results are
//! reported on the *core* (coordinates below `core`) and must agree between
//! the two windows, otherwise the presentation is rejected.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::finite::ClosureReport;
use super::subset::Subset;
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coord {
    Nat(u64),
    Omega,
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Nat(n) => write!(f, "{n}"),
            Coord::Omega => write!(f, "ω"),
        }
    }
}

impl Coord {
    pub fn nat(&self) -> Option<u64> {
        match self {
            Coord::Nat(n) => Some(*n),
            Coord::Omega => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub name: String,
    /// Per coordinate: whether `ω` is a legal value.
    pub omega: Vec<bool>,
    /// Per coordinate: an inclusive upper bound, or `None` for all of ℕ.
    #[serde(default)]
    pub bound: Vec<Option<u64>>,
}

impl Family {
    pub fn new(name: &str, arity: usize) -> Self {
        Family {
            name: name.into(),
            omega: vec![false; arity],
            bound: vec![None; arity],
        }
    }

    /// A family with a single element.
    pub fn point(name: &str) -> Self {
        Self::new(name, 0)
    }

    pub fn with_omega(mut self, coord: usize) -> Self {
        self.omega[coord] = true;
        self
    }

    pub fn with_bound(mut self, coord: usize, max: u64) -> Self {
        self.bound[coord] = Some(max);
        self
    }

    pub fn arity(&self) -> usize {
        self.omega.len()
    }

    fn bound_of(&self, i: usize) -> Option<u64> {
        self.bound.get(i).copied().flatten()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Src,
    Dst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Op {
    Eq,
    Ne,
    Le,
    Lt,
    Ge,
    Gt,
}

impl Op {
    fn eval(self, a: Coord, b: Coord) -> bool {
        match self {
            Op::Eq => a == b,
            Op::Ne => a != b,
            Op::Le => a <= b,
            Op::Lt => a < b,
            Op::Ge => a >= b,
            Op::Gt => a > b,
        }
    }
}

/// One comparison inside a rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Atom {
    /// Compare two coordinates, each taken from either element.
    Cmp {
        lhs: (Side, usize),
        op: Op,
        rhs: (Side, usize),
    },
    /// Compare one coordinate with a constant.
    Const {
        lhs: (Side, usize),
        op: Op,
        value: Coord,
    },
}

impl Atom {
    pub fn cmp(l: (Side, usize), op: Op, r: (Side, usize)) -> Self {
        Atom::Cmp { lhs: l, op, rhs: r }
    }

    /// `src[i] op dst[j]`, the common shape.
    pub fn sd(i: usize, op: Op, j: usize) -> Self {
        Atom::Cmp {
            lhs: (Side::Src, i),
            op,
            rhs: (Side::Dst, j),
        }
    }

    pub fn is_omega(side: Side, i: usize) -> Self {
        Atom::Const {
            lhs: (side, i),
            op: Op::Eq,
            value: Coord::Omega,
        }
    }

    pub fn not_omega(side: Side, i: usize) -> Self {
        Atom::Const {
            lhs: (side, i),
            op: Op::Ne,
            value: Coord::Omega,
        }
    }

    fn eval(&self, x: &Code, y: &Code) -> bool {
        let get = |(side, i): (Side, usize)| match side {
            Side::Src => x.coords[i],
            Side::Dst => y.coords[i],
        };
        match self {
            Atom::Cmp { lhs, op, rhs } => op.eval(get(*lhs), get(*rhs)),
            Atom::Const { lhs, op, value } => op.eval(get(*lhs), *value),
        }
    }

    fn shifted(&self, src_off: usize, dst_off: usize) -> Self {
        let sh = |(side, i): (Side, usize)| match side {
            Side::Src => (side, i + src_off),
            Side::Dst => (side, i + dst_off),
        };
        match self {
            Atom::Cmp { lhs, op, rhs } => Atom::Cmp {
                lhs: sh(*lhs),
                op: *op,
                rhs: sh(*rhs),
            },
            Atom::Const { lhs, op, value } => Atom::Const {
                lhs: sh(*lhs),
                op: *op,
                value: *value,
            },
        }
    }
}

/// `x <= y` whenever `x` is in family `from`, `y` in family `to`, and all atoms hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub from: usize,
    pub to: usize,
    pub when: Vec<Atom>,
}

impl Rule {
    pub fn new(from: usize, to: usize, when: Vec<Atom>) -> Self {
        Rule { from, to, when }
    }
}

/// An element: a family index and one coordinate per family slot.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Code {
    pub family: usize,
    pub coords: Vec<Coord>,
}

impl Code {
    pub fn new(family: usize, coords: &[u64]) -> Self {
        Code {
            family,
            coords: coords.iter().map(|&c| Coord::Nat(c)).collect(),
        }
    }

    pub fn with(family: usize, coords: Vec<Coord>) -> Self {
        Code { family, coords }
    }

    pub fn max_nat(&self) -> u64 {
        self.coords.iter().filter_map(Coord::nat).max().unwrap_or(0)
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}{:?}", self.family, self.coords)
    }
}

/// Window sizes and budgets for the symbolic engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowConfig {
    /// Results are reported for coordinates below `core`.
    pub core: u64,
    /// Extra coordinates computed beyond the core.
    pub margin: u64,
    /// Additional coordinates of the confirmation window.
    pub check: u64,
    /// Maximal number of closure steps (or completion layers).
    pub depth: usize,
}

impl Default for WindowConfig {
    fn default() -> Self {
        WindowConfig {
            core: 4,
            margin: 4,
            check: 2,
            depth: 8,
        }
    }
}

impl WindowConfig {
    pub fn k(&self) -> u64 {
        self.core + self.margin
    }

    pub fn enlarged(&self) -> Self {
        WindowConfig {
            margin: self.margin + self.check,
            ..*self
        }
    }
}

/// The serialised presentation: `{"branches": [...], "attach": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchPoset {
    #[serde(default)]
    pub name: String,
    #[serde(rename = "branches")]
    families: Vec<Family>,
    #[serde(rename = "attach")]
    rules: Vec<Rule>,
}

impl BranchPoset {
    /// Build and validate. The partial-order axioms are checked exhaustively
    /// on a small window and on a deterministic sample of a larger one.
    pub fn new(name: &str, families: Vec<Family>, rules: Vec<Rule>) -> Result<Self> {
        let p = BranchPoset {
            name: name.into(),
            families,
            rules,
        };
        p.validate()?;
        Ok(p)
    }

    /// Skip validation; used to demonstrate presentations that fail it.
    pub fn new_unchecked(name: &str, families: Vec<Family>, rules: Vec<Rule>) -> Self {
        BranchPoset {
            name: name.into(),
            families,
            rules,
        }
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn validate(&self) -> Result<()> {
        for (i, r) in self.rules.iter().enumerate() {
            if r.from >= self.families.len() || r.to >= self.families.len() {
                return Err(Error::InvalidPoset(format!(
                    "rule {i} names an unknown family"
                )));
            }
            let (a, b) = (self.families[r.from].arity(), self.families[r.to].arity());
            for atom in &r.when {
                let ok = |(side, c): (Side, usize)| c < if side == Side::Src { a } else { b };
                let fine = match atom {
                    Atom::Cmp { lhs, rhs, .. } => ok(*lhs) && ok(*rhs),
                    Atom::Const { lhs, .. } => ok(*lhs),
                };
                if !fine {
                    return Err(Error::InvalidPoset(format!(
                        "rule {i} names a missing coordinate"
                    )));
                }
            }
        }
        let w = Window::new(self, 3);
        let rel = w.relation(self);
        let n = w.len();
        for i in 0..n {
            for j in rel[i].iter() {
                if i != j && rel[j].contains(i) {
                    return Err(Error::InvalidPoset(format!(
                        "not antisymmetric at {:?}, {:?}",
                        w.elems[i], w.elems[j]
                    )));
                }
                for k in rel[j].iter() {
                    if !rel[i].contains(k) {
                        return Err(Error::InvalidPoset(format!(
                            "not transitive at {:?}, {:?}, {:?}",
                            w.elems[i], w.elems[j], w.elems[k]
                        )));
                    }
                }
            }
        }
        // Sampled triples on a wider window, where more order patterns occur.
        let wide = Window::new(self, 9);
        let mut state = 0x9e37_79b9_7f4a_7c15u64;
        let mut next = |m: usize| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % m as u64) as usize
        };
        for _ in 0..4000 {
            let (x, y, z) = (
                &wide.elems[next(wide.len())],
                &wide.elems[next(wide.len())],
                &wide.elems[next(wide.len())],
            );
            let (y2, z2) = (self.bump_towards(x, y), self.bump_towards(y, z));
            for (a, b, c) in [(x, y, z), (x, &y2, &z2)] {
                if a != b && self.leq(a, b) && self.leq(b, a) {
                    return Err(Error::InvalidPoset(format!(
                        "not antisymmetric at {a:?}, {b:?}"
                    )));
                }
                if self.leq(a, b) && self.leq(b, c) && !self.leq(a, c) {
                    return Err(Error::InvalidPoset(format!(
                        "not transitive at {a:?}, {b:?}, {c:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// A copy of `y` sharing as many coordinates with `x` as fit, which makes
    /// related pairs far more likely in random sampling.
    fn bump_towards(&self, x: &Code, y: &Code) -> Code {
        let mut out = y.clone();
        if x.family == y.family {
            for (i, c) in out.coords.iter_mut().enumerate() {
                if i % 2 == 0 {
                    *c = x.coords[i];
                }
            }
        }
        out
    }

    pub fn family_of(&self, c: &Code) -> &Family {
        &self.families[c.family]
    }

    pub fn is_valid_code(&self, c: &Code) -> bool {
        let Some(f) = self.families.get(c.family) else {
            return false;
        };
        c.coords.len() == f.arity()
            && c.coords.iter().enumerate().all(|(i, v)| match v {
                Coord::Omega => f.omega[i],
                Coord::Nat(n) => f.bound_of(i).is_none_or(|b| *n <= b),
            })
    }

    pub fn leq(&self, x: &Code, y: &Code) -> bool {
        x == y
            || self.rules.iter().any(|r| {
                r.from == x.family && r.to == y.family && r.when.iter().all(|a| a.eval(x, y))
            })
    }

    /// The product presentation: coordinates are concatenated and the order is
    /// componentwise.
    pub fn product(a: &BranchPoset, b: &BranchPoset) -> Result<BranchPoset> {
        let nb = b.families.len();
        let mut families = Vec::new();
        for fa in &a.families {
            for fb in &b.families {
                let mut omega = fa.omega.clone();
                omega.extend(&fb.omega);
                let mut bound: Vec<Option<u64>> = (0..fa.arity()).map(|i| fa.bound_of(i)).collect();
                bound.extend((0..fb.arity()).map(|i| fb.bound_of(i)));
                families.push(Family {
                    name: format!("{}×{}", fa.name, fb.name),
                    omega,
                    bound,
                });
            }
        }
        // Each factor relates either by one of its rules or by equality.
        let eq_rule = |p: &BranchPoset, f: usize| {
            Rule::new(
                f,
                f,
                (0..p.families[f].arity())
                    .map(|i| Atom::sd(i, Op::Eq, i))
                    .collect(),
            )
        };
        let options = |p: &BranchPoset| -> Vec<Rule> {
            let mut v = p.rules.clone();
            v.extend((0..p.families.len()).map(|f| eq_rule(p, f)));
            v
        };
        let mut rules = Vec::new();
        for ra in options(a) {
            for rb in options(b) {
                let (sa, da) = (a.families[ra.from].arity(), a.families[ra.to].arity());
                let mut when: Vec<Atom> = ra.when.clone();
                when.extend(rb.when.iter().map(|at| at.shifted(sa, da)));
                rules.push(Rule::new(ra.from * nb + rb.from, ra.to * nb + rb.to, when));
            }
        }
        BranchPoset::new(&format!("{} × {}", a.name, b.name), families, rules)
    }

    /// Split a product code into its two factor codes.
    pub fn split_product_code(a: &BranchPoset, b: &BranchPoset, c: &Code) -> (Code, Code) {
        let nb = b.families.len();
        let (fa, fb) = (c.family / nb, c.family % nb);
        let ar = a.families[fa].arity();
        (
            Code::with(fa, c.coords[..ar].to_vec()),
            Code::with(fb, c.coords[ar..].to_vec()),
        )
    }

    /// Window restricted to coordinates below `k`, plus `ω` where allowed.
    pub fn window(&self, k: u64) -> Window {
        Window::new(self, k)
    }

    /// Closure operators applied to the subset picked by `generator`.
    pub fn closure_suite(
        &self,
        generator: &Generator,
        cfg: &WindowConfig,
    ) -> Result<BranchClosure> {
        let first = self.closure_once(generator, cfg)?;
        let second = self.closure_once(generator, &cfg.enlarged())?;
        let same = |a: &Subset, b: &Subset| first.core_codes(a) == second.core_codes(b);
        if first.report.iteration_count != second.report.iteration_count
            || !same(&first.report.bar, &second.report.bar)
            || !same(&first.report.hat, &second.report.hat)
            || !same(&first.report.down, &second.report.down)
        {
            return Err(Error::UnsupportedPresentation(format!(
                "closure of {} differs between windows {} and {}",
                self.name,
                cfg.k(),
                cfg.enlarged().k()
            )));
        }
        Ok(first)
    }

    fn closure_once(&self, generator: &Generator, cfg: &WindowConfig) -> Result<BranchClosure> {
        let window = Window::new(self, cfg.k());
        let engine = Engine::new(self, &window, cfg.core);
        let a = window.subset(|c| generator.contains(c));
        let down = engine.down(&a);
        let mut iterates = vec![a.clone()];
        let mut core_changes = 0;
        loop {
            let last = iterates.last().unwrap();
            let next = engine.up_step(last);
            if next == *last {
                break;
            }
            if window.core_part(&next, cfg.core) != window.core_part(last, cfg.core) {
                core_changes += 1;
                if core_changes > cfg.depth {
                    return Err(Error::BudgetExceeded(format!(
                        "sup-closure needs more than {} steps",
                        cfg.depth
                    )));
                }
            }
            iterates.push(next);
        }
        let bar = iterates.last().unwrap().clone();
        let hat = engine.hat(&a);
        Ok(BranchClosure {
            report: ClosureReport {
                down,
                iterates,
                bar,
                hat,
                iteration_count: core_changes,
            },
            window,
            core: cfg.core,
        })
    }

    /// The greatest element of the sup-closure, when there is one.
    ///
    /// A greatest element that moves when the window grows is an artefact of
    /// truncation and is reported as absent.
    pub fn tip(&self, generator: &Generator, cfg: &WindowConfig) -> Result<Option<Code>> {
        self.closure_suite(generator, cfg)?;
        let greatest = |cfg: &WindowConfig| -> Result<Option<Code>> {
            let c = self.closure_once(generator, cfg)?;
            let engine = Engine::new(self, &c.window, cfg.core);
            Ok(engine
                .greatest(&c.report.bar)
                .map(|i| c.window.elems[i].clone()))
        };
        let (a, b) = (greatest(cfg)?, greatest(&cfg.enlarged())?);
        Ok(if a == b { a } else { None })
    }
}

/// Picks a subset of a [`BranchPoset`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Generator {
    /// Every element of the listed families.
    Families(Vec<usize>),
    /// Elements of the listed families with no `ω` coordinate.
    Finite(Vec<usize>),
    /// An explicit finite list of elements.
    Codes(Vec<Code>),
    /// The whole poset.
    All,
}

impl Generator {
    pub fn contains(&self, c: &Code) -> bool {
        match self {
            Generator::Families(f) => f.contains(&c.family),
            Generator::Finite(f) => f.contains(&c.family) && !c.coords.contains(&Coord::Omega),
            Generator::Codes(v) => v.contains(c),
            Generator::All => true,
        }
    }
}

/// Result of [`BranchPoset::closure_suite`]; sets are over [`Self::window`].
#[derive(Clone, Debug)]
pub struct BranchClosure {
    pub report: ClosureReport,
    pub window: Window,
    pub core: u64,
}

impl BranchClosure {
    /// Members of `s` whose coordinates lie in the core, in window order.
    pub fn core_codes(&self, s: &Subset) -> Vec<Code> {
        s.iter()
            .map(|i| &self.window.elems[i])
            .filter(|c| self.window.in_core(c, self.core))
            .cloned()
            .collect()
    }
}

/// The finite set of elements whose natural coordinates are below `k`.
#[derive(Clone, Debug)]
pub struct Window {
    pub k: u64,
    pub elems: Vec<Code>,
    index: HashMap<Code, usize>,
}

impl Window {
    pub fn new(p: &BranchPoset, k: u64) -> Self {
        let mut elems = Vec::new();
        for (fi, f) in p.families.iter().enumerate() {
            let ranges: Vec<Vec<Coord>> = (0..f.arity())
                .map(|i| {
                    let top = f.bound_of(i).map_or(k, |b| (b + 1).min(k));
                    let mut v: Vec<Coord> = (0..top).map(Coord::Nat).collect();
                    if f.omega[i] {
                        v.push(Coord::Omega);
                    }
                    v
                })
                .collect();
            let mut cur = vec![0usize; ranges.len()];
            if ranges.iter().any(|r| r.is_empty()) {
                continue;
            }
            loop {
                elems.push(Code::with(
                    fi,
                    cur.iter().zip(&ranges).map(|(&i, r)| r[i]).collect(),
                ));
                let mut pos = ranges.len();
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    cur[pos] += 1;
                    if cur[pos] < ranges[pos].len() {
                        break;
                    }
                    cur[pos] = 0;
                    if pos == 0 {
                        pos = usize::MAX;
                        break;
                    }
                }
                if pos == usize::MAX || ranges.is_empty() {
                    break;
                }
            }
        }
        let index = elems
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        Window { k, elems, index }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn index_of(&self, c: &Code) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn subset(&self, f: impl Fn(&Code) -> bool) -> Subset {
        Subset::from_fn(self.len(), |i| f(&self.elems[i]))
    }

    pub fn in_core(&self, c: &Code, core: u64) -> bool {
        c.coords.iter().all(|v| v.nat().is_none_or(|n| n < core))
    }

    pub fn core_part(&self, s: &Subset, core: u64) -> Subset {
        Subset::from_fn(self.len(), |i| {
            s.contains(i) && self.in_core(&self.elems[i], core)
        })
    }

    /// Row `i` lists every `j` with `elems[i] <= elems[j]`.
    pub fn relation(&self, p: &BranchPoset) -> Vec<Subset> {
        (0..self.len())
            .map(|i| Subset::from_fn(self.len(), |j| p.leq(&self.elems[i], &self.elems[j])))
            .collect()
    }
}

/// A single-coordinate or diagonal chain `base + m·1_S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainShape {
    pub base: Code,
    pub vary: Vec<usize>,
}

impl ChainShape {
    pub fn at(&self, m: u64) -> Code {
        let mut c = self.base.clone();
        for &i in &self.vary {
            if let Coord::Nat(n) = c.coords[i] {
                c.coords[i] = Coord::Nat(n + m);
            }
        }
        c
    }

    /// The member `base + level·1_S`; with `level` at least the window size it
    /// lies above the window while keeping the relative order of its coordinates.
    pub fn generic(&self, level: u64) -> Code {
        self.at(level)
    }
}

/// Window computations: `down`, sup-closure steps, `hat`.
pub struct Engine<'a> {
    pub poset: &'a BranchPoset,
    pub window: &'a Window,
    pub core: u64,
    rel: Vec<Subset>,
    rel_t: Vec<Subset>,
}

impl<'a> Engine<'a> {
    pub fn new(poset: &'a BranchPoset, window: &'a Window, core: u64) -> Self {
        let rel = window.relation(poset);
        let n = window.len();
        let rel_t = (0..n)
            .map(|j| Subset::from_fn(n, |i| rel[i].contains(j)))
            .collect();
        Engine {
            poset,
            window,
            core,
            rel,
            rel_t,
        }
    }

    pub fn leq_idx(&self, i: usize, j: usize) -> bool {
        self.rel[i].contains(j)
    }

    /// Elements of the window above `i`.
    pub fn above(&self, i: usize) -> &Subset {
        &self.rel[i]
    }

    /// Elements of the window below `i`.
    pub fn below(&self, i: usize) -> &Subset {
        &self.rel_t[i]
    }

    pub fn down(&self, a: &Subset) -> Subset {
        let mut out = Subset::empty(self.window.len());
        for i in a.iter() {
            out = out.union(&self.rel_t[i]);
        }
        out
    }

    /// Window elements below an arbitrary (possibly virtual) element.
    pub fn down_of_code(&self, c: &Code) -> Subset {
        self.window.subset(|x| self.poset.leq(x, c))
    }

    pub fn upper_bounds_of_code(&self, c: &Code) -> Subset {
        self.window.subset(|y| self.poset.leq(c, y))
    }

    pub fn least(&self, a: &Subset) -> Option<usize> {
        a.iter().find(|&x| a.is_subset(&self.rel[x]))
    }

    pub fn greatest(&self, a: &Subset) -> Option<usize> {
        a.iter().find(|&x| a.is_subset(&self.rel_t[x]))
    }

    /// Every strictly increasing chain shape starting inside `a` whose
    /// members in the window all belong to `a`.
    pub fn chains_in(&self, a: &Subset) -> Vec<ChainShape> {
        let mut out = Vec::new();
        for b in a.iter() {
            let base = &self.window.elems[b];
            let fam = self.poset.family_of(base);
            let free: Vec<usize> = (0..fam.arity())
                .filter(|&i| fam.bound_of(i).is_none() && base.coords[i] != Coord::Omega)
                .collect();
            for mask in 1u32..(1 << free.len()) {
                let vary: Vec<usize> = free
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &i)| i)
                    .collect();
                let shape = ChainShape {
                    base: base.clone(),
                    vary,
                };
                if self.is_chain_inside(&shape, a) {
                    out.push(shape);
                }
            }
        }
        out
    }

    fn is_chain_inside(&self, shape: &ChainShape, a: &Subset) -> bool {
        let mut prev: Option<usize> = None;
        let mut members = 0;
        for m in 0.. {
            let c = shape.at(m);
            let Some(i) = self.window.index_of(&c) else {
                break;
            };
            if !a.contains(i) {
                return false;
            }
            if let Some(p) = prev {
                if !self.leq_idx(p, i) {
                    return false;
                }
            }
            prev = Some(i);
            members += 1;
        }
        members >= 2
    }

    /// Supremum of the chain, searched in the window.
    pub fn chain_sup(&self, shape: &ChainShape) -> Option<usize> {
        let v = shape.generic(self.window.k);
        self.least(&self.upper_bounds_of_code(&v))
    }

    /// `A` together with the suprema of its chains.
    pub fn up_step(&self, a: &Subset) -> Subset {
        let mut out = a.clone();
        for shape in self.chains_in(a) {
            if let Some(s) = self.chain_sup(&shape) {
                out.insert(s);
            }
        }
        out
    }

    /// Smallest lower, sup-closed superset.
    pub fn hat(&self, a: &Subset) -> Subset {
        let mut cur = self.down(a);
        loop {
            let next = self.down(&self.up_step(&cur));
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naturals() -> BranchPoset {
        BranchPoset::new(
            "N",
            vec![Family::new("n", 1)],
            vec![Rule::new(0, 0, vec![Atom::sd(0, Op::Le, 0)])],
        )
        .unwrap()
    }

    #[test]
    fn window_enumeration() {
        let p = BranchPoset::new(
            "mixed",
            vec![
                Family::new("a", 2).with_omega(1),
                Family::point("top"),
                Family::new("b", 1).with_bound(0, 1),
            ],
            vec![],
        )
        .unwrap();
        let w = p.window(3);
        assert_eq!(w.len(), 3 * 4 + 1 + 2);
    }

    #[test]
    fn naturals_have_no_sup() {
        let p = naturals();
        let r = p
            .closure_suite(&Generator::All, &WindowConfig::default())
            .unwrap();
        assert_eq!(r.report.iteration_count, 0);
        assert_eq!(
            p.tip(&Generator::All, &WindowConfig::default()).unwrap(),
            None
        );
        assert_eq!(
            p.tip(
                &Generator::Codes(vec![Code::new(0, &[2])]),
                &WindowConfig::default()
            )
            .unwrap(),
            Some(Code::new(0, &[2]))
        );
    }

    #[test]
    fn capped_naturals_close_in_one_step() {
        let p = BranchPoset::new(
            "N+cap",
            vec![Family::new("n", 1).with_omega(0)],
            vec![Rule::new(0, 0, vec![Atom::sd(0, Op::Le, 0)])],
        )
        .unwrap();
        let gen = Generator::Codes((0..20).map(|n| Code::new(0, &[n])).collect());
        let cfg = WindowConfig::default();
        let r = p.closure_once(&gen, &cfg).unwrap();
        assert_eq!(r.report.iteration_count, 1);
        let cap = r
            .window
            .index_of(&Code::with(0, vec![Coord::Omega]))
            .unwrap();
        assert!(r.report.bar.contains(cap));
    }

    #[test]
    fn invalid_presentations_are_rejected() {
        let cyc = BranchPoset::new(
            "cycle",
            vec![Family::point("a"), Family::point("b")],
            vec![Rule::new(0, 1, vec![]), Rule::new(1, 0, vec![])],
        );
        assert!(matches!(cyc, Err(Error::InvalidPoset(_))));
    }
}
