//! Maps between small finite posets: the five characterizations of respecting
//! directed suprema, and the projection onto maps that do.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poset::{FinitePoset, Subset};

/// Largest carrier handled by the bitmask tables.
pub const MAX_ELEMENTS: usize = 6;

/// Every closure operator of a finite poset, tabulated over all `2^n` subsets.
///
/// Built from the definitions: the sup-closure step adds suprema of directed
/// subsets, and `bar`/`hat` iterate it to a fixed point.
#[derive(Clone, Debug)]
pub struct MaskTables {
    pub n: usize,
    pub down: Vec<u64>,
    pub upper_bounds: Vec<u64>,
    pub sup: Vec<Option<u8>>,
    pub bar: Vec<u64>,
    pub hat: Vec<u64>,
    pub tip: Vec<Option<u8>>,
    /// Directed subsets that have a supremum, with that supremum.
    pub directed: Vec<(u64, u8)>,
    below: Vec<u64>,
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

impl MaskTables {
    pub fn new(p: &FinitePoset) -> Result<Self> {
        let n = p.len();
        if n > MAX_ELEMENTS {
            return Err(Error::Input(format!(
                "{n} elements exceed the table limit of {MAX_ELEMENTS}"
            )));
        }
        let size = 1usize << n;
        let below: Vec<u64> = (0..n)
            .map(|x| (0..n).filter(|&y| p.leq(y, x)).fold(0, |m, y| m | 1 << y))
            .collect();
        let above: Vec<u64> = (0..n)
            .map(|x| (0..n).filter(|&y| p.leq(x, y)).fold(0, |m, y| m | 1 << y))
            .collect();
        let all = (size - 1) as u64;
        let mut down = vec![0u64; size];
        let mut upper_bounds = vec![all; size];
        for mask in 0..size as u64 {
            for x in bits(mask) {
                down[mask as usize] |= below[x];
                upper_bounds[mask as usize] &= above[x];
            }
        }
        let least = |m: u64| bits(m).find(|&x| m & !above[x] == 0).map(|x| x as u8);
        let greatest = |m: u64| bits(m).find(|&x| m & !below[x] == 0).map(|x| x as u8);
        let sup: Vec<Option<u8>> = (0..size).map(|m| least(upper_bounds[m])).collect();
        let is_directed = |m: u64| {
            m != 0
                && bits(m).all(|x| {
                    bits(m)
                        .all(|y| bits(m).any(|z| below[z] >> x & 1 == 1 && below[z] >> y & 1 == 1))
                })
        };
        let directed: Vec<(u64, u8)> = (1..size as u64)
            .filter(|&m| is_directed(m))
            .filter_map(|m| sup[m as usize].map(|s| (m, s)))
            .collect();
        let up_step = |a: u64| {
            directed
                .iter()
                .filter(|(d, _)| d & !a == 0)
                .fold(a, |acc, &(_, s)| acc | 1 << s)
        };
        let fix = |start: u64, step: &dyn Fn(u64) -> u64| {
            let mut cur = start;
            loop {
                let next = step(cur);
                if next == cur {
                    return cur;
                }
                cur = next;
            }
        };
        let bar: Vec<u64> = (0..size as u64).map(|a| fix(a, &up_step)).collect();
        let hat: Vec<u64> = (0..size as u64)
            .map(|a| fix(down[a as usize], &|h| down[up_step(h) as usize]))
            .collect();
        let tip = bar.iter().map(|&b| greatest(b)).collect();
        Ok(MaskTables {
            n,
            down,
            upper_bounds,
            sup,
            bar,
            hat,
            tip,
            directed,
            below,
        })
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.below[y] >> x & 1 == 1
    }

    pub fn to_subset(&self, mask: u64) -> Subset {
        Subset::from_mask(self.n, mask)
    }
}

/// A map `0..source.len() -> 0..target.len()`.
pub type FiniteMap = Vec<usize>;

/// The five characterizations evaluated on one map, plus monotonicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Characterizations {
    pub monotone: bool,
    /// Respects suprema of directed sets.
    pub sup_preserving: bool,
    /// Monotone, and upper bounds of `T(A)` bound `T(hat A)`.
    pub hat_bounded: bool,
    /// Monotone, and `T(bar A)` lies in `bar T(A)`.
    pub bar_closed: bool,
    /// `T(hat A)` lies in `hat T(A)`.
    pub hat_closed: bool,
    /// Tips are sent to tips.
    pub tip_preserving: bool,
}

impl Characterizations {
    pub fn all_agree(&self) -> bool {
        let v = self.sup_preserving;
        [
            self.hat_bounded,
            self.bar_closed,
            self.hat_closed,
            self.tip_preserving,
        ]
        .iter()
        .all(|&x| x == v)
    }
}

pub fn characterize(src: &MaskTables, dst: &MaskTables, t: &[usize]) -> Characterizations {
    let n = src.n;
    let mut image = vec![0u64; 1 << n];
    for mask in 1..1usize << n {
        let low = mask.trailing_zeros() as usize;
        image[mask] = image[mask & (mask - 1)] | 1 << t[low];
    }
    let monotone = (0..n).all(|x| (0..n).all(|y| !src.leq(x, y) || dst.leq(t[x], t[y])));
    let sup_preserving = src
        .directed
        .iter()
        .all(|&(d, s)| dst.sup[image[d as usize] as usize] == Some(t[s as usize] as u8));
    let mut hat_bounded = monotone;
    let mut bar_closed = monotone;
    let mut hat_closed = true;
    let mut tip_preserving = true;
    for a in 0..1usize << n {
        let ta = image[a] as usize;
        let t_hat = image[src.hat[a] as usize] as usize;
        hat_bounded &= dst.upper_bounds[ta] & !dst.upper_bounds[t_hat] == 0;
        bar_closed &= image[src.bar[a] as usize] & !dst.bar[ta] == 0;
        hat_closed &= t_hat as u64 & !dst.hat[ta] == 0;
        if let Some(x) = src.tip[a] {
            tip_preserving &= dst.tip[ta] == Some(t[x as usize] as u8);
        }
    }
    Characterizations {
        monotone,
        sup_preserving,
        hat_bounded,
        bar_closed,
        hat_closed,
        tip_preserving,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub max_n: usize,
    pub poset_pairs: usize,
    pub maps: u64,
    pub passing_maps: u64,
    /// Maps on which the characterizations disagree with each other.
    pub disagreements: Vec<String>,
    /// Maps where the common verdict differs from monotonicity.
    pub not_monotonicity: Vec<String>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty() && self.not_monotonicity.is_empty()
    }
}

fn for_each_map(src_len: usize, dst_len: usize, mut f: impl FnMut(&[usize])) {
    let mut t = vec![0usize; src_len];
    loop {
        f(&t);
        let mut i = 0;
        loop {
            if i == src_len {
                return;
            }
            t[i] += 1;
            if t[i] < dst_len {
                break;
            }
            t[i] = 0;
            i += 1;
        }
    }
}

/// Evaluate every characterization on every map between every pair of posets with at
/// most `max_n` elements, one poset per isomorphism class.
pub fn equivalences_audit(max_n: usize) -> Result<AuditReport> {
    if max_n > 5 {
        return Err(Error::Input(format!("audit size {max_n} exceeds 5")));
    }
    let posets: Vec<MaskTables> = (1..=max_n)
        .flat_map(FinitePoset::enumerate_unlabeled)
        .map(|p| MaskTables::new(&p))
        .collect::<Result<_>>()?;
    let mut report = AuditReport {
        max_n,
        poset_pairs: posets.len() * posets.len(),
        maps: 0,
        passing_maps: 0,
        disagreements: Vec::new(),
        not_monotonicity: Vec::new(),
    };
    for (i, src) in posets.iter().enumerate() {
        for (j, dst) in posets.iter().enumerate() {
            for_each_map(src.n, dst.n, |t| {
                let c = characterize(src, dst, t);
                report.maps += 1;
                report.passing_maps += c.sup_preserving as u64;
                if !c.all_agree() && report.disagreements.len() < 16 {
                    report
                        .disagreements
                        .push(format!("posets {i} -> {j}, map {t:?}: {c:?}"));
                }
                if c.sup_preserving != c.monotone && report.not_monotonicity.len() < 16 {
                    report
                        .not_monotonicity
                        .push(format!("posets {i} -> {j}, map {t:?}: {c:?}"));
                }
            });
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrReport {
    pub projected: FiniteMap,
    /// Pointwise join of every sup-preserving map below the input.
    pub oracle: FiniteMap,
    pub minorants: usize,
}

impl PrReport {
    pub fn agrees(&self) -> bool {
        self.projected == self.oracle
    }
}

fn check_map(src: &FinitePoset, dst: &FinitePoset, t: &[usize]) -> Result<()> {
    if t.len() != src.len() {
        return Err(Error::Dimension {
            expected: src.len(),
            found: t.len(),
        });
    }
    if let Some(&y) = t.iter().find(|&&y| y >= dst.len()) {
        return Err(Error::Input(format!(
            "image {y} outside a target of size {}",
            dst.len()
        )));
    }
    if !dst.is_complete_lattice() {
        return Err(Error::InvalidPoset(
            "the target must be a complete lattice".into(),
        ));
    }
    Ok(())
}

fn greatest_monotone_minorant(src: &FinitePoset, dst: &FinitePoset, t: &[usize]) -> FiniteMap {
    (0..src.len())
        .map(|x| {
            let above = Subset::from_fn(dst.len(), |v| {
                (0..src.len()).any(|y| src.leq(x, y) && t[y] == v)
            });
            dst.inf(&above).expect("complete lattice")
        })
        .collect()
}

/// The greatest sup-preserving map below `t`, computed as `x -> meet { t(y) : y >= x }`
/// and cross-checked against the join of all sup-preserving minorants.
pub fn pr_project_finite(src: &FinitePoset, dst: &FinitePoset, t: &[usize]) -> Result<PrReport> {
    check_map(src, dst, t)?;
    let projected = greatest_monotone_minorant(src, dst, t);
    let (st, dt) = (MaskTables::new(src)?, MaskTables::new(dst)?);
    let choices: Vec<Vec<usize>> = t
        .iter()
        .map(|&v| (0..dst.len()).filter(|&u| dst.leq(u, v)).collect())
        .collect();
    let mut oracle = vec![dst.minimum().expect("complete lattice"); src.len()];
    let mut minorants = 0;
    let mut pick = vec![0usize; src.len()];
    let mut s = vec![0usize; src.len()];
    'outer: loop {
        for (x, &k) in pick.iter().enumerate() {
            s[x] = choices[x][k];
        }
        if characterize(&st, &dt, &s).sup_preserving {
            minorants += 1;
            for x in 0..src.len() {
                oracle[x] = dst.join(oracle[x], s[x]).expect("lattice");
            }
        }
        for x in 0..src.len() {
            pick[x] += 1;
            if pick[x] < choices[x].len() {
                continue 'outer;
            }
            pick[x] = 0;
        }
        break;
    }
    Ok(PrReport {
        projected,
        oracle,
        minorants,
    })
}

/// One step of the infimum-over-directed-sets construction. Only monotone inputs are
/// accepted; on them the step is the identity, since every directed set with
/// supremum `x` contains `x`.
pub fn p_step_finite(src: &FinitePoset, dst: &FinitePoset, t: &[usize]) -> Result<FiniteMap> {
    check_map(src, dst, t)?;
    let (st, dt) = (MaskTables::new(src)?, MaskTables::new(dst)?);
    if !characterize(&st, &dt, t).monotone {
        return Err(Error::PreconditionFailed(
            "the step is only exposed for monotone maps".into(),
        ));
    }
    Ok((0..src.len())
        .map(|x| {
            let values = st
                .directed
                .iter()
                .filter(|&&(_, s)| s as usize == x)
                .map(|&(d, _)| {
                    dst.sup(&Subset::from_fn(dst.len(), |v| bits(d).any(|y| t[y] == v)))
                        .expect("complete")
                });
            let candidates = Subset::from_indices(dst.len(), values);
            dst.inf(&candidates).expect("complete lattice")
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct PrAuditReport {
    pub cases: usize,
    pub oracle_mismatches: Vec<String>,
    pub not_idempotent: Vec<String>,
    pub not_monotone: Vec<String>,
}

impl PrAuditReport {
    pub fn passed(&self) -> bool {
        self.oracle_mismatches.is_empty()
            && self.not_idempotent.is_empty()
            && self.not_monotone.is_empty()
    }
}

/// Random maps from posets with at most `max_n` elements into complete lattices with at
/// most `max_n` elements: projection against the oracle, idempotence, and monotonicity
/// in the argument.
pub fn pr_random_audit(cases: usize, max_n: usize, seed: u64) -> Result<PrAuditReport> {
    let sources: Vec<FinitePoset> = (1..=max_n)
        .flat_map(FinitePoset::enumerate_naturally_labeled)
        .collect();
    let targets: Vec<FinitePoset> = (1..=max_n)
        .flat_map(FinitePoset::enumerate_naturally_labeled)
        .filter(FinitePoset::is_complete_lattice)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = PrAuditReport {
        cases,
        oracle_mismatches: Vec::new(),
        not_idempotent: Vec::new(),
        not_monotone: Vec::new(),
    };
    for case in 0..cases {
        let src = sources.choose(&mut rng).expect("nonempty");
        let dst = targets.choose(&mut rng).expect("nonempty");
        let t: FiniteMap = (0..src.len())
            .map(|_| rng.gen_range(0..dst.len()))
            .collect();
        let r = pr_project_finite(src, dst, &t)?;
        if !r.agrees() {
            report.oracle_mismatches.push(format!(
                "case {case}: {t:?} gives {:?}, oracle {:?}",
                r.projected, r.oracle
            ));
        }
        let again = pr_project_finite(src, dst, &r.projected)?;
        if again.projected != r.projected {
            report.not_idempotent.push(format!("case {case}: {t:?}"));
        }
        let lower: FiniteMap = t
            .iter()
            .map(|&v| {
                *(0..dst.len())
                    .filter(|&u| dst.leq(u, v))
                    .collect::<Vec<_>>()
                    .choose(&mut rng)
                    .expect("v <= v")
            })
            .collect();
        let pl = pr_project_finite(src, dst, &lower)?;
        if !(0..src.len()).all(|x| dst.leq(pl.projected[x], r.projected[x])) {
            report
                .not_monotone
                .push(format!("case {case}: {lower:?} <= {t:?}"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_element_audit() {
        let r = equivalences_audit(3).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.maps > 0 && r.passing_maps < r.maps);
    }

    #[test]
    fn finite_bar_is_identity_and_hat_is_down() {
        for p in FinitePoset::enumerate_unlabeled(4) {
            let t = MaskTables::new(&p).unwrap();
            for a in 0..16u64 {
                assert_eq!(t.bar[a as usize], a);
                assert_eq!(t.hat[a as usize], t.down[a as usize]);
            }
        }
    }

    #[test]
    fn constant_and_flipped_maps() {
        let chain = FinitePoset::chain(2);
        let tables = MaskTables::new(&chain).unwrap();
        assert!(characterize(&tables, &tables, &[1, 1]).sup_preserving);
        let flipped = characterize(&tables, &tables, &[1, 0]);
        assert!(!flipped.monotone && !flipped.sup_preserving && flipped.all_agree());
    }

    #[test]
    fn projection_of_a_flip() {
        let chain = FinitePoset::chain(2);
        let r = pr_project_finite(&chain, &chain, &[1, 0]).unwrap();
        assert_eq!(r.projected, vec![0, 0]);
        assert!(r.agrees());
        let top = pr_project_finite(&chain, &chain, &[1, 1]).unwrap();
        assert_eq!(top.projected, vec![1, 1]);
    }

    #[test]
    fn step_only_for_monotone_maps() {
        let chain = FinitePoset::chain(3);
        assert_eq!(
            p_step_finite(&chain, &chain, &[0, 2, 2]).unwrap(),
            vec![0, 2, 2]
        );
        assert!(matches!(
            p_step_finite(&chain, &chain, &[2, 0, 1]),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn non_lattice_target_rejected() {
        let anti = FinitePoset::antichain(2);
        assert!(matches!(
            pr_project_finite(&anti, &anti, &[0, 1]),
            Err(Error::InvalidPoset(_))
        ));
    }

    #[test]
    fn random_projection_audit() {
        let r = pr_random_audit(150, 4, 3).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}
