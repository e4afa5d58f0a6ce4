//! Named presentations used throughout the tests, the CLI and the acceptance suite.

use super::branch::{Atom, BranchPoset, Family, Op, Rule, Side};

/// `ℕ² ∪ ℕ ∪ {⊤}`: pairs `(n, m)` ordered along `m` inside the branch `n`,
/// `(n, m) <= n'` for `n <= n'`, the naturals in their usual order and a top.
/// Starting from the pairs, two sup-steps are needed to reach the whole space.
pub fn double_arrow() -> BranchPoset {
    BranchPoset::new(
        "double-arrow",
        vec![
            Family::new("pair", 2),
            Family::new("nat", 1),
            Family::point("top"),
        ],
        vec![
            Rule::new(0, 0, vec![Atom::sd(0, Op::Eq, 0), Atom::sd(1, Op::Le, 1)]),
            Rule::new(0, 1, vec![Atom::sd(0, Op::Le, 0)]),
            Rule::new(1, 1, vec![Atom::sd(0, Op::Le, 0)]),
            Rule::new(0, 2, vec![]),
            Rule::new(1, 2, vec![]),
        ],
    )
    .expect("double-arrow presentation is a partial order")
}

/// The tower of height `depth`: family `k` holds words of length `k`, the
/// word `x` of length `k` sits below `y` of length `j` when `j = 0` or
/// `k >= j`, both agree before position `j` and `x[j] <= y[j]`. The longest
/// words need exactly `depth` sup-steps to generate everything.
pub fn tower(depth: usize) -> BranchPoset {
    let families = (0..=depth)
        .map(|k| Family::new(&format!("len{k}"), k))
        .collect();
    let mut rules = Vec::new();
    for k in 0..=depth {
        for j in 0..=k {
            if k == j && j == 0 {
                continue;
            }
            let when = if j == 0 {
                vec![]
            } else {
                let mut w: Vec<Atom> = (0..j - 1).map(|i| Atom::sd(i, Op::Eq, i)).collect();
                w.push(Atom::sd(j - 1, Op::Le, j - 1));
                w
            };
            rules.push(Rule::new(k, j, when));
        }
    }
    BranchPoset::new(&format!("tower-{depth}"), families, rules)
        .expect("tower presentation is a partial order")
}

/// A discretised `[0,1] × {0,1}`: the lower line (family 0, with `ω` for the
/// endpoint) is a chain, the upper points (family 1) are pairwise unrelated,
/// lower points sit below upper points further right, and everything lies
/// below the right end of the lower line. The upper open segment has no tip
/// although its lower sup-closure has a maximum.
pub fn split_square() -> BranchPoset {
    BranchPoset::new(
        "split-square",
        vec![
            Family::new("low", 1).with_omega(0),
            Family::new("high", 1).with_omega(0),
        ],
        vec![
            Rule::new(0, 0, vec![Atom::sd(0, Op::Le, 0)]),
            Rule::new(
                0,
                1,
                vec![
                    Atom::not_omega(Side::Src, 0),
                    Atom::not_omega(Side::Dst, 0),
                    Atom::sd(0, Op::Le, 0),
                ],
            ),
            Rule::new(1, 0, vec![Atom::is_omega(Side::Dst, 0)]),
        ],
    )
    .expect("split-square presentation is a partial order")
}

/// The literal order on `[0,1] × {0,1}` as written, where lower points are
/// below every upper point to their right including `(1,1)`. Together with
/// everything being below `(1,0)` this loses antisymmetry.
pub fn split_square_literal() -> BranchPoset {
    BranchPoset::new_unchecked(
        "split-square-literal",
        vec![
            Family::new("low", 1).with_omega(0),
            Family::new("high", 1).with_omega(0),
        ],
        vec![
            Rule::new(0, 0, vec![Atom::sd(0, Op::Le, 0)]),
            Rule::new(0, 1, vec![Atom::sd(0, Op::Le, 0)]),
            Rule::new(1, 0, vec![Atom::is_omega(Side::Dst, 0)]),
        ],
    )
}

/// `ℕ × ℕ × (ℕ ∪ {ω})` with fibres linked so that the completion needs two layers:
/// the sups `s_n` of the vertical caps and then the sup of the `s_n`.
pub fn linked_fibres() -> BranchPoset {
    use Op::*;
    BranchPoset::new(
        "linked-fibres",
        vec![Family::new("point", 3).with_omega(2)],
        vec![
            Rule::new(
                0,
                0,
                vec![Atom::sd(0, Eq, 0), Atom::sd(1, Eq, 1), Atom::sd(2, Le, 2)],
            ),
            Rule::new(
                0,
                0,
                vec![
                    Atom::sd(0, Eq, 0),
                    Atom::sd(1, Le, 1),
                    Atom::is_omega(Side::Dst, 2),
                ],
            ),
            Rule::new(
                0,
                0,
                vec![
                    Atom::sd(0, Lt, 0),
                    Atom::sd(1, Le, 1),
                    Atom::sd(2, Le, 1),
                    Atom::is_omega(Side::Dst, 2),
                ],
            ),
        ],
    )
    .expect("linked-fibres presentation is a partial order")
}

/// Four copies of a chain (`ℤ` for windowing, standing in for `(0,1)`), with
/// `(t, i) <= (s, j)` iff `t <= s` and `j = 4` or `j = i` or `i = 1`.
///
/// Negative reals are encoded by a second family per copy with reversed order:
/// `pos_i(t)` stands for `t >= 0` and `neg_i(k)` for `-k-1`.
pub fn four_copies() -> BranchPoset {
    let mut families = Vec::new();
    for i in 1..=4 {
        families.push(Family::new(&format!("pos{i}"), 1));
    }
    for i in 1..=4 {
        families.push(Family::new(&format!("neg{i}"), 1));
    }
    let allowed = |n: usize, m: usize| m == 4 || m == n || n == 1;
    let mut rules = Vec::new();
    for n in 1..=4 {
        for m in 1..=4 {
            if !allowed(n, m) {
                continue;
            }
            let (pn, pm, nn, nm) = (n - 1, m - 1, n + 3, m + 3);
            rules.push(Rule::new(pn, pm, vec![Atom::sd(0, Op::Le, 0)]));
            rules.push(Rule::new(nn, nm, vec![Atom::sd(0, Op::Ge, 0)]));
            rules.push(Rule::new(nn, pm, vec![]));
        }
    }
    BranchPoset::new("four-copies", families, rules)
        .expect("four-copies presentation is a partial order")
}

/// Two chains glued at a common bottom and a common top.
pub fn glued_chains() -> BranchPoset {
    BranchPoset::new(
        "glued-chains",
        vec![
            Family::point("bottom"),
            Family::new("left", 1),
            Family::new("right", 1),
            Family::point("top"),
        ],
        vec![
            Rule::new(0, 1, vec![]),
            Rule::new(0, 2, vec![]),
            Rule::new(0, 3, vec![]),
            Rule::new(1, 1, vec![Atom::sd(0, Op::Le, 0)]),
            Rule::new(2, 2, vec![Atom::sd(0, Op::Le, 0)]),
            Rule::new(1, 3, vec![]),
            Rule::new(2, 3, vec![]),
        ],
    )
    .expect("glued-chains presentation is a partial order")
}

/// A single chain `ℕ`, optionally capped by `ω`.
pub fn naturals(capped: bool) -> BranchPoset {
    let fam = if capped {
        Family::new("n", 1).with_omega(0)
    } else {
        Family::new("n", 1)
    };
    BranchPoset::new(
        if capped {
            "naturals-capped"
        } else {
            "naturals"
        },
        vec![fam],
        vec![Rule::new(0, 0, vec![Atom::sd(0, Op::Le, 0)])],
    )
    .expect("chain presentation is a partial order")
}

/// A finite chain `0 < 1 < ... < len-1`.
pub fn finite_chain(len: u64) -> BranchPoset {
    BranchPoset::new(
        "finite-chain",
        vec![Family::new("n", 1).with_bound(0, len - 1)],
        vec![Rule::new(0, 0, vec![Atom::sd(0, Op::Le, 0)])],
    )
    .expect("chain presentation is a partial order")
}

/// Two chains sharing a common top.
pub fn two_chains_one_top() -> BranchPoset {
    BranchPoset::new(
        "two-chains-one-top",
        vec![
            Family::new("left", 1),
            Family::new("right", 1),
            Family::point("top"),
        ],
        vec![
            Rule::new(0, 0, vec![Atom::sd(0, Op::Le, 0)]),
            Rule::new(1, 1, vec![Atom::sd(0, Op::Le, 0)]),
            Rule::new(0, 2, vec![]),
            Rule::new(1, 2, vec![]),
        ],
    )
    .expect("presentation is a partial order")
}

/// A chain with a cap, plus a second cap above the open chain but unrelated to the first.
pub fn chain_with_rival_cap() -> BranchPoset {
    BranchPoset::new(
        "chain-with-rival-cap",
        vec![Family::new("n", 1).with_omega(0), Family::point("rival")],
        vec![
            Rule::new(0, 0, vec![Atom::sd(0, Op::Le, 0)]),
            Rule::new(0, 1, vec![Atom::not_omega(Side::Src, 0)]),
        ],
    )
    .expect("presentation is a partial order")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::branch::{Code, Coord, Generator, WindowConfig};

    #[test]
    fn fixtures_validate() {
        for p in [
            double_arrow(),
            tower(1),
            tower(2),
            tower(3),
            split_square(),
            linked_fibres(),
            four_copies(),
            glued_chains(),
        ] {
            p.validate().unwrap();
        }
        assert!(split_square_literal().validate().is_err());
    }

    #[test]
    fn double_arrow_needs_two_steps() {
        let r = double_arrow()
            .closure_suite(&Generator::Families(vec![0]), &WindowConfig::default())
            .unwrap();
        assert_eq!(r.report.iteration_count, 2);
    }

    #[test]
    fn tower_needs_depth_steps() {
        for d in 1..=3 {
            let r = tower(d)
                .closure_suite(&Generator::Families(vec![d]), &WindowConfig::default())
                .unwrap();
            assert_eq!(r.report.iteration_count, d, "depth {d}");
        }
    }

    #[test]
    fn split_square_has_no_tip_but_hat_has_max() {
        let p = split_square();
        let cfg = WindowConfig::default();
        let gen = Generator::Finite(vec![1]);
        assert_eq!(p.tip(&gen, &cfg).unwrap(), None);
        let r = p.closure_suite(&gen, &cfg).unwrap();
        let w = &r.window;
        let end = w.index_of(&Code::with(0, vec![Coord::Omega])).unwrap();
        assert!(r.report.hat.contains(end));
        assert_eq!(r.report.hat.count(), w.len());
    }
}
