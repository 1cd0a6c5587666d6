//! Minimal disjoint covers of finite families of closed intervals.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::ExactScalar;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Interval {
    pub lo: ExactScalar,
    pub hi: ExactScalar,
}

impl Interval {
    /// A nondegenerate closed interval `[lo, hi]`.
    pub fn new(lo: ExactScalar, hi: ExactScalar) -> Result<Self> {
        if lo >= hi {
            return Err(Error::Degenerate(format!("[{lo}, {hi}] is not a nondegenerate interval")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_point(&self, x: &ExactScalar) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    /// Distance between the two intervals, zero when they meet.
    pub fn separation(&self, other: &Interval) -> ExactScalar {
        let gap = std::cmp::max(&self.lo, &other.lo) - std::cmp::min(&self.hi, &other.hi);
        std::cmp::max(gap, ExactScalar::zero())
    }

    fn point_separation(&self, x: &ExactScalar) -> ExactScalar {
        if *x < self.lo {
            &self.lo - x
        } else if *x > self.hi {
            x - &self.hi
        } else {
            ExactScalar::zero()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverResult {
    /// Disjoint intervals in increasing order.
    pub cover: Vec<Interval>,
    /// Index into `cover` of the interval holding each input interval.
    pub class_map: Vec<usize>,
}

/// Sweep over closed intervals that may be degenerate: pieces that meet
/// or touch are merged.
pub(crate) fn cover_closed(iv: &[(ExactScalar, ExactScalar)]) -> (Vec<(ExactScalar, ExactScalar)>, Vec<usize>) {
    let mut order: Vec<usize> = (0..iv.len()).collect();
    order.sort_by(|&a, &b| iv[a].cmp(&iv[b]));
    let mut cover: Vec<(ExactScalar, ExactScalar)> = Vec::new();
    let mut class_map = vec![0; iv.len()];
    for i in order {
        let (a, b) = &iv[i];
        match cover.last_mut() {
            Some(last) if *a <= last.1 => {
                if *b > last.1 {
                    last.1 = b.clone();
                }
            }
            _ => cover.push((a.clone(), b.clone())),
        }
        class_map[i] = cover.len() - 1;
    }
    (cover, class_map)
}

/// The minimal disjoint closed cover: the hulls of the classes of
/// intervals joined by chains of pairwise intersecting intervals.
pub fn minimal_cover(family: &[Interval]) -> CoverResult {
    let iv: Vec<(ExactScalar, ExactScalar)> = family.iter().map(|i| (i.lo.clone(), i.hi.clone())).collect();
    let (cover, class_map) = cover_closed(&iv);
    CoverResult {
        cover: cover.into_iter().map(|(lo, hi)| Interval { lo, hi }).collect(),
        class_map,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub exists: bool,
    /// Indices `I₁, …, I_N` of a shortest chain.
    pub chain: Vec<usize>,
}

/// Searches for intervals `I₁, …, I_N` of the family with consecutive
/// separations, and those from `x` to `I₁` and from `I_N` to `y`, at most `ε`.
pub fn epsilon_chain(family: &[Interval], x: &ExactScalar, y: &ExactScalar, eps: &ExactScalar) -> Chain {
    let none = Chain {
        exists: false,
        chain: Vec::new(),
    };
    if eps.is_negative() {
        return none;
    }
    if x == y {
        return Chain {
            exists: true,
            chain: Vec::new(),
        };
    }
    let n = family.len();
    let mut prev: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for (i, iv) in family.iter().enumerate() {
        if iv.point_separation(x) <= *eps {
            seen[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        if family[i].point_separation(y) <= *eps {
            let mut chain = vec![i];
            let mut cur = i;
            while let Some(p) = prev[cur] {
                chain.push(p);
                cur = p;
            }
            chain.reverse();
            return Chain { exists: true, chain };
        }
        for j in 0..n {
            if !seen[j] && family[i].separation(&family[j]) <= *eps {
                seen[j] = true;
                prev[j] = Some(i);
                queue.push_back(j);
            }
        }
    }
    none
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(a: i64, b: i64) -> Interval {
        Interval::new(ExactScalar::int(a), ExactScalar::int(b)).unwrap()
    }

    fn half(a: i64, b: i64) -> Interval {
        Interval::new(ExactScalar::frac(a, 2), ExactScalar::frac(b, 2)).unwrap()
    }

    #[test]
    fn overlapping_and_touching_intervals_merge() {
        let c = minimal_cover(&[iv(0, 1), half(1, 4), iv(3, 4)]);
        assert_eq!(c.cover, vec![iv(0, 2), iv(3, 4)]);
        assert_eq!(c.class_map, vec![0, 0, 1]);
        assert_eq!(minimal_cover(&[iv(0, 1), iv(1, 2)]).cover, vec![iv(0, 2)]);
        assert_eq!(minimal_cover(&[iv(0, 1)]).cover, vec![iv(0, 1)]);
    }

    #[test]
    fn degenerate_intervals_are_rejected() {
        assert!(Interval::new(ExactScalar::one(), ExactScalar::one()).is_err());
    }

    #[test]
    fn chains() {
        let z = ExactScalar::zero();
        let c = epsilon_chain(&[iv(0, 1), iv(1, 2)], &z, &ExactScalar::int(2), &z);
        assert!(c.exists);
        assert_eq!(c.chain, vec![0, 1]);
        let far = epsilon_chain(&[iv(0, 1), iv(3, 4)], &z, &ExactScalar::int(4), &ExactScalar::frac(1, 2));
        assert!(!far.exists);
        let same = epsilon_chain(&[iv(0, 1)], &z, &z, &z);
        assert!(same.exists && same.chain.is_empty());
    }

    fn family() -> impl Strategy<Value = Vec<Interval>> {
        prop::collection::vec((0i64..8, 1i64..=8), 1..8).prop_map(|v| {
            v.into_iter()
                .map(|(a, len)| half(a, (a + len).min(8).max(a + 1)))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn cover_is_idempotent(f in family()) {
            let c = minimal_cover(&f);
            prop_assert_eq!(minimal_cover(&c.cover).cover, c.cover);
        }

        #[test]
        fn cover_ignores_order(f in family(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut g = f.clone();
            g.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(minimal_cover(&f).cover, minimal_cover(&g).cover);
        }

        #[test]
        fn cover_is_disjoint_and_covering(f in family()) {
            let c = minimal_cover(&f);
            for w in c.cover.windows(2) {
                prop_assert!(w[0].hi < w[1].lo);
            }
            for (i, x) in f.iter().enumerate() {
                prop_assert!(c.cover[c.class_map[i]].contains(x));
            }
        }

        #[test]
        fn chains_match_the_cover(f in family(), a in 0i64..=8, b in 0i64..=8) {
            let (x, y) = (ExactScalar::frac(a, 2), ExactScalar::frac(b, 2));
            let c = minimal_cover(&f);
            let class = |p: &ExactScalar| c.cover.iter().position(|i| i.contains_point(p));
            let joined = x == y || (class(&x).is_some() && class(&x) == class(&y));
            prop_assert_eq!(epsilon_chain(&f, &x, &y, &ExactScalar::zero()).exists, joined);
        }
    }
}
