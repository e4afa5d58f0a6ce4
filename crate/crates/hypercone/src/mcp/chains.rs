//! Increasing sequences in `[0, inf]^n` given in closed form, so that their
//! suprema and the limits of their images can be computed exactly.

use std::fmt;

use num::{Signed, Zero};
use rand::Rng;

use crate::cone::ConeVec;
use crate::extreal::{rat, ExtNonneg, Rational};

/// One coordinate of an increasing sequence indexed by `k >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Trend {
    Const(ExtNonneg),
    /// `limit - gap / k`, with `0 <= gap <= limit`.
    Rise {
        limit: Rational,
        gap: Rational,
    },
    /// `start + rate * k`, with `rate > 0`; unbounded.
    Grow {
        start: Rational,
        rate: Rational,
    },
}

impl Trend {
    pub fn rise(limit: Rational, gap: Rational) -> Self {
        assert!(
            !gap.is_negative() && gap <= limit,
            "rise needs 0 <= gap <= limit"
        );
        Trend::Rise { limit, gap }
    }

    pub fn grow(start: Rational, rate: Rational) -> Self {
        assert!(
            !start.is_negative() && rate.is_positive(),
            "grow needs start >= 0 and rate > 0"
        );
        Trend::Grow { start, rate }
    }

    pub fn at(&self, k: u64) -> ExtNonneg {
        assert!(k >= 1, "sequences start at k = 1");
        let k = Rational::from_integer(k.into());
        match self {
            Trend::Const(c) => c.clone(),
            Trend::Rise { limit, gap } => ExtNonneg::new(limit - gap / k).expect("gap <= limit"),
            Trend::Grow { start, rate } => ExtNonneg::new(start + rate * k).expect("nonnegative"),
        }
    }

    pub fn limit(&self) -> ExtNonneg {
        match self {
            Trend::Const(c) => c.clone(),
            Trend::Rise { limit, .. } => ExtNonneg::new(limit.clone()).expect("nonnegative"),
            Trend::Grow { .. } => ExtNonneg::inf(),
        }
    }

    /// Whether some term, and hence every later term, is nonzero.
    pub fn eventually_positive(&self) -> bool {
        match self {
            Trend::Const(c) => !c.is_zero(),
            Trend::Rise { limit, .. } => limit.is_positive(),
            Trend::Grow { .. } => true,
        }
    }

    /// `lim_k c * x_k`, read off the closed form.
    pub fn weighted_limit(&self, c: &ExtNonneg) -> ExtNonneg {
        if c.is_inf() {
            if self.eventually_positive() {
                ExtNonneg::inf()
            } else {
                ExtNonneg::zero()
            }
        } else if c.is_zero() {
            ExtNonneg::zero()
        } else {
            match self {
                Trend::Grow { .. } => ExtNonneg::inf(),
                _ => self.limit().scale(c.finite().expect("finite weight")),
            }
        }
    }

    pub fn sample(rng: &mut impl Rng) -> Self {
        match rng.gen_range(0..5) {
            0 => Trend::Const(if rng.gen_bool(0.2) {
                ExtNonneg::inf()
            } else {
                ExtNonneg::int(rng.gen_range(0..5))
            }),
            1 | 2 => {
                let limit = rat(rng.gen_range(0..9), rng.gen_range(1..3));
                let gap = &limit * rat(rng.gen_range(0..5), 4);
                Trend::rise(limit, gap)
            }
            _ => Trend::grow(
                rat(rng.gen_range(0..4), 1),
                rat(rng.gen_range(1..4), rng.gen_range(1..3)),
            ),
        }
    }
}

impl fmt::Display for Trend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trend::Const(c) => write!(f, "{c}"),
            Trend::Rise { limit, gap } if gap.is_zero() => write!(f, "{limit}"),
            Trend::Rise { limit, gap } => write!(f, "{limit} - {gap}/k"),
            Trend::Grow { start, rate } if start.is_zero() => write!(f, "{rate}k"),
            Trend::Grow { start, rate } => write!(f, "{start} + {rate}k"),
        }
    }
}

/// The sequence `k -> (coords[0](k), ..., coords[n-1](k))` for `k >= first`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrendChain {
    pub first: u64,
    pub coords: Vec<Trend>,
}

impl TrendChain {
    pub fn new(coords: Vec<Trend>) -> Self {
        TrendChain { first: 1, coords }
    }

    pub fn starting_at(mut self, first: u64) -> Self {
        assert!(first >= 1);
        self.first = first;
        self
    }

    /// The `i`-th term, `i = 0, 1, ...`.
    pub fn term(&self, i: usize) -> ConeVec {
        let k = self.first + i as u64;
        ConeVec(self.coords.iter().map(|t| t.at(k)).collect())
    }

    pub fn limit(&self) -> ConeVec {
        ConeVec(self.coords.iter().map(Trend::limit).collect())
    }

    pub fn sample(rng: &mut impl Rng, n: usize) -> Self {
        TrendChain::new((0..n).map(|_| Trend::sample(rng)).collect())
    }
}

impl fmt::Display for TrendChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, t) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")?;
        if self.first > 1 {
            write!(f, " for k >= {}", self.first)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terms_increase_to_the_limit() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
        for _ in 0..200 {
            let c = TrendChain::sample(&mut rng, 3);
            let terms: Vec<_> = (0..20).map(|i| c.term(i)).collect();
            assert!(terms.windows(2).all(|w| w[0].leq(&w[1])));
            assert!(terms.iter().all(|t| t.leq(&c.limit())));
        }
    }

    #[test]
    fn weighted_limits() {
        let rise = Trend::rise(rat(2, 1), rat(2, 1));
        assert_eq!(rise.at(1), ExtNonneg::zero());
        assert_eq!(rise.weighted_limit(&ExtNonneg::inf()), ExtNonneg::inf());
        assert_eq!(rise.weighted_limit(&ExtNonneg::int(3)), ExtNonneg::int(6));
        let zero = Trend::Const(ExtNonneg::zero());
        assert_eq!(zero.weighted_limit(&ExtNonneg::inf()), ExtNonneg::zero());
        let grow = Trend::grow(rat(0, 1), rat(1, 1));
        assert_eq!(grow.weighted_limit(&ExtNonneg::zero()), ExtNonneg::zero());
        assert_eq!(grow.to_string(), "1k");
    }
}
