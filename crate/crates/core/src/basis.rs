//! Hard-core occupation basis for `N` pairs on `M` sites.
//!
//! Basis states are strictly increasing site tuples. Index `i` corresponds
//! to the `i`-th tuple in colexicographic order, i.e. the combinatorial
//! number system: `rank(s_1 < ... < s_N) = sum_k C(s_k, k)`.

use crate::error::{Error, Result};

pub const MAX_PAIRS: usize = 3;

/// `C(n, k)` without overflow for the sizes used here.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Sites of one basis state, strictly increasing.
pub type Sites = [usize; MAX_PAIRS];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairBasis {
    pairs: usize,
    sites: usize,
    dim: usize,
}

impl PairBasis {
    pub fn new(pairs: usize, sites: usize) -> Result<Self> {
        if !(1..=MAX_PAIRS).contains(&pairs) {
            return Err(Error::UnsupportedPairs(pairs));
        }
        if sites < pairs {
            return Err(Error::TooFewSites { sites, pairs });
        }
        Ok(PairBasis {
            pairs,
            sites,
            dim: binomial(sites, pairs),
        })
    }

    pub fn pairs(&self) -> usize {
        self.pairs
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Colex rank of a strictly increasing tuple of length `pairs`.
    pub fn rank(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.pairs);
        debug_assert!(tuple.windows(2).all(|w| w[0] < w[1]));
        tuple
            .iter()
            .enumerate()
            .map(|(k, &s)| binomial(s, k + 1))
            .sum()
    }

    /// Inverse of [`PairBasis::rank`]; only the first `pairs` entries of the
    /// returned array are meaningful.
    pub fn unrank(&self, mut index: usize) -> Sites {
        debug_assert!(index < self.dim);
        let mut out = [0; MAX_PAIRS];
        let mut upper = self.sites;
        for k in (1..=self.pairs).rev() {
            // Largest s < upper with C(s, k) <= index.
            let mut s = upper - 1;
            while binomial(s, k) > index {
                s -= 1;
            }
            out[k - 1] = s;
            index -= binomial(s, k);
            upper = s;
        }
        out
    }

    /// All basis tuples in index order.
    pub fn iter(&self) -> BasisIter {
        let mut current = [0; MAX_PAIRS];
        for (k, slot) in current.iter_mut().enumerate().take(self.pairs) {
            *slot = k;
        }
        BasisIter {
            pairs: self.pairs,
            sites: self.sites,
            current,
            remaining: self.dim,
        }
    }
}

/// Colex successor iteration over increasing tuples.
pub struct BasisIter {
    pairs: usize,
    sites: usize,
    current: Sites,
    remaining: usize,
}

impl Iterator for BasisIter {
    type Item = Sites;

    fn next(&mut self) -> Option<Sites> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let out = self.current;
        if self.remaining > 0 {
            // Bump the lowest position that can move, reset those below it.
            let p = self.pairs;
            let mut k = 0;
            while k + 1 < p && self.current[k] + 1 == self.current[k + 1] {
                k += 1;
            }
            self.current[k] += 1;
            debug_assert!(self.current[k] < self.sites);
            for j in 0..k {
                self.current[j] = j;
            }
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

impl ExactSizeIterator for BasisIter {}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(5, 6), 0);
        assert_eq!(binomial(1024, 2), 523_776);
        assert_eq!(binomial(169, 3), 790_244);
    }

    #[test]
    fn iteration_matches_rank_order() {
        for (n, m) in [(1, 5), (2, 6), (3, 7), (3, 3), (2, 2)] {
            let basis = PairBasis::new(n, m).unwrap();
            let tuples: Vec<_> = basis.iter().collect();
            assert_eq!(tuples.len(), binomial(m, n));
            for (i, t) in tuples.iter().enumerate() {
                assert!(t[..n].windows(2).all(|w| w[0] < w[1]));
                assert!(t[n - 1] < m);
                assert_eq!(basis.rank(&t[..n]), i);
                assert_eq!(basis.unrank(i), *t);
            }
        }
    }

    #[test]
    fn pair_order_small() {
        let basis = PairBasis::new(2, 3).unwrap();
        let tuples: Vec<_> = basis.iter().map(|t| (t[0], t[1])).collect();
        assert_eq!(tuples, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn invalid_bases() {
        assert!(matches!(
            PairBasis::new(4, 10),
            Err(Error::UnsupportedPairs(4))
        ));
        assert!(matches!(
            PairBasis::new(0, 10),
            Err(Error::UnsupportedPairs(0))
        ));
        assert!(matches!(
            PairBasis::new(3, 2),
            Err(Error::TooFewSites { .. })
        ));
    }

    proptest! {
        #[test]
        fn rank_unrank_bijection(pairs in 1usize..=3, sites in 3usize..400, seed in any::<u64>()) {
            let basis = PairBasis::new(pairs, sites).unwrap();
            let index = (seed % basis.dim() as u64) as usize;
            let tuple = basis.unrank(index);
            prop_assert!(tuple[..pairs].windows(2).all(|w| w[0] < w[1]));
            prop_assert!(tuple[pairs - 1] < sites);
            prop_assert_eq!(basis.rank(&tuple[..pairs]), index);
        }
    }
}
