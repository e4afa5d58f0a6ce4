//! Splitting an increasing chain below `g + h` into two increasing chains
//! with suprema `g` and `h`.

use serde::Serialize;

use super::ConeVec;
use crate::error::{Error, Result};
use crate::extreal::{rat, ExtNonneg};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DdpSplit {
    pub g_chain: Vec<ConeVec>,
    pub h_chain: Vec<ConeVec>,
    /// The split applied to the supremum itself. Both pieces are continuous along
    /// increasing sequences, so these are the suprema of the split chains.
    pub g_sup: ConeVec,
    pub h_sup: ConeVec,
}

fn split_coord(f: &ExtNonneg, g: &ExtNonneg, h: &ExtNonneg) -> (ExtNonneg, ExtNonneg) {
    let rest = |cap: &ExtNonneg| f.monus(&f.min_of(cap)).expect("the meet is below f");
    match (g.is_inf(), h.is_inf()) {
        (false, _) => (g.min_of(f), rest(g)),
        (true, false) => (rest(h), h.min_of(f)),
        (true, true) => {
            let half = f.scale(&rat(1, 2));
            (half.clone(), half)
        }
    }
}

fn split(f: &ConeVec, g: &ConeVec, h: &ConeVec) -> (ConeVec, ConeVec) {
    let (a, b) = f
        .coords()
        .iter()
        .zip(g.coords().iter().zip(h.coords()))
        .map(|(f, (g, h))| split_coord(f, g, h))
        .unzip();
    (ConeVec(a), ConeVec(b))
}

/// Split each term of `chain` (increasing, with supremum `sup = g + h`) as `G + H`.
///
/// Finite chains stand for prefixes of infinite ones; `sup` is the declared
/// supremum of the whole sequence and every term must lie below it.
pub fn ddp_split(chain: &[ConeVec], sup: &ConeVec, g: &ConeVec, h: &ConeVec) -> Result<DdpSplit> {
    for u in chain.iter().chain([g, h]) {
        sup.same_len(u)?;
    }
    if g.add(h) != *sup {
        return Err(Error::PreconditionFailed(format!(
            "{g} + {h} is not the supremum {sup}"
        )));
    }
    if let Some(i) = chain.windows(2).position(|w| !w[0].leq(&w[1])) {
        return Err(Error::PreconditionFailed(format!(
            "chain decreases at step {}",
            i + 1
        )));
    }
    if let Some(bad) = chain.iter().find(|u| !u.leq(sup)) {
        return Err(Error::PreconditionFailed(format!(
            "{bad} exceeds the supremum {sup}"
        )));
    }

    let (g_chain, h_chain): (Vec<_>, Vec<_>) = chain.iter().map(|f| split(f, g, h)).unzip();
    let (g_sup, h_sup) = split(sup, g, h);
    for (f, (a, b)) in chain.iter().zip(g_chain.iter().zip(&h_chain)) {
        assert_eq!(a.add(b), *f, "split pieces do not add up");
        assert!(a.leq(g) && b.leq(h), "split pieces exceed their targets");
    }
    for part in [&g_chain, &h_chain] {
        assert!(
            part.windows(2).all(|w| w[0].leq(&w[1])),
            "split chain is not increasing"
        );
    }
    assert!(
        g_sup == *g && h_sup == *h,
        "split of the supremum misses the targets"
    );
    Ok(DdpSplit {
        g_chain,
        h_chain,
        g_sup,
        h_sup,
    })
}

/// The first `len` terms of a standard increasing sequence with supremum `v`:
/// finite coordinates approach from below as `x (1 - 1/k)`, infinite ones grow like `k`.
pub fn approximating_chain(v: &ConeVec, len: usize) -> Vec<ConeVec> {
    (1..=len as i64)
        .map(|k| {
            ConeVec(
                v.coords()
                    .iter()
                    .map(|x| {
                        if x.is_inf() {
                            ExtNonneg::int(k as u64)
                        } else {
                            x.scale(&rat(k - 1, k))
                        }
                    })
                    .collect(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(xs: &[Option<u64>]) -> ConeVec {
        ConeVec::from_ints(xs)
    }

    #[test]
    fn finite_case_uses_first_row() {
        let (g, h) = (cv(&[Some(2), Some(1)]), cv(&[Some(1), Some(3)]));
        let v = g.add(&h);
        let chain = approximating_chain(&v, 6);
        let s = ddp_split(&chain, &v, &g, &h).unwrap();
        for (f, a) in chain.iter().zip(&s.g_chain) {
            assert_eq!(*a, g.meet(f));
        }
    }

    #[test]
    fn all_on_one_side() {
        let v = cv(&[Some(4), None]);
        let chain = approximating_chain(&v, 5);
        let s = ddp_split(&chain, &v, &v, &ConeVec::zeros(2)).unwrap();
        assert_eq!(s.g_chain, chain);
        assert!(s.h_chain.iter().all(|u| *u == ConeVec::zeros(2)));
    }

    #[test]
    fn both_infinite_halves() {
        let v = cv(&[None]);
        let chain = approximating_chain(&v, 4);
        let s = ddp_split(&chain, &v, &v, &v).unwrap();
        assert_eq!(s.g_chain[3], ConeVec(vec![ExtNonneg::int(2)]));
        assert_eq!(s.h_chain[3], ConeVec(vec![ExtNonneg::int(2)]));
    }

    #[test]
    fn mixed_infinite_rows() {
        let g = cv(&[None, Some(3), None]);
        let h = cv(&[Some(5), None, None]);
        let v = g.add(&h);
        let mut chain = approximating_chain(&v, 8);
        chain.push(v.clone());
        let s = ddp_split(&chain, &v, &g, &h).unwrap();
        assert_eq!(s.g_chain.last(), Some(&g));
        assert_eq!(s.h_chain.last(), Some(&h));
    }

    #[test]
    fn rejects_wrong_sum_and_decreasing_chain() {
        let v = cv(&[Some(2)]);
        assert!(ddp_split(&[], &v, &v, &v).is_err());
        let chain = [cv(&[Some(2)]), cv(&[Some(1)])];
        assert!(matches!(
            ddp_split(&chain, &v, &v, &cv(&[Some(0)])),
            Err(Error::PreconditionFailed(_))
        ));
    }
}
