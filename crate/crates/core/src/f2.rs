//! Arithmetic over the field with two elements: binomial coefficients
//! and rank of sparse vectors.

use std::collections::{BTreeSet, HashMap};

/// `binom(n, k) mod 2` by Lucas: odd iff the binary digits of `k` are a
/// subset of those of `n`.
#[inline]
pub fn binom_mod2(n: u64, k: u64) -> bool {
    k <= n && (n & k) == k
}

/// Binomial coefficient mod 2 for an arbitrary integer top, using the
/// polynomial extension `binom(n, k) = n(n-1)...(n-k+1)/k!`. For `n < 0`
/// this is `(-1)^k binom(k - n - 1, k)`.
pub fn binom_mod2_signed(n: i64, k: i64) -> bool {
    if k < 0 {
        return false;
    }
    if n >= 0 {
        binom_mod2(n as u64, k as u64)
    } else {
        binom_mod2((k - n - 1) as u64, k as u64)
    }
}

/// Rank over F_2 of a family of sparse vectors, each given as the set of
/// coordinates where it is 1.
pub fn rank<T: Ord + Clone + std::hash::Hash>(vectors: &[BTreeSet<T>]) -> usize {
    // Dense bit rows over the union of supports, columns in sorted order.
    let support: BTreeSet<&T> = vectors.iter().flatten().collect();
    if support.is_empty() {
        return 0;
    }
    let column: HashMap<&T, usize> = support.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let words = support.len().div_ceil(64);
    let mut rows: Vec<Vec<u64>> = vectors
        .iter()
        .map(|v| {
            let mut row = vec![0u64; words];
            for t in v {
                let c = column[t];
                row[c / 64] |= 1 << (c % 64);
            }
            row
        })
        .collect();

    let mut rank = 0;
    for col in 0..support.len() {
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & bit != 0 {
                for (a, b) in row.iter_mut().zip(&pivot_row) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parity_by_factorials(n: u64, k: u64) -> bool {
        if k > n {
            return false;
        }
        let twos = |m: u64| (1..=m).map(|x| x.trailing_zeros() as u64).sum::<u64>();
        twos(n) == twos(k) + twos(n - k)
    }

    #[test]
    fn lucas_examples() {
        assert!(binom_mod2(3, 1));
        assert!(!binom_mod2(2, 1));
        assert!(binom_mod2(13, 4));
        assert!(!binom_mod2(4, 13));
    }

    #[test]
    fn lucas_matches_factorials() {
        for n in 0..=20 {
            for k in 0..=22 {
                assert_eq!(binom_mod2(n, k), parity_by_factorials(n, k), "({n}, {k})");
            }
            assert!(binom_mod2(n, 0));
            for k in 0..=n {
                assert_eq!(binom_mod2(n, k), binom_mod2(n, n - k));
            }
        }
    }

    #[test]
    fn signed_extension() {
        // binom(-1, k) = (-1)^k
        for k in 0..10 {
            assert!(binom_mod2_signed(-1, k));
        }
        // binom(-2, k) = (-1)^k (k + 1)
        for k in 0..10 {
            assert_eq!(binom_mod2_signed(-2, k), k % 2 == 0);
        }
        assert!(!binom_mod2_signed(5, -1));
    }

    #[test]
    fn rank_basics() {
        let v = |xs: &[u32]| xs.iter().copied().collect::<BTreeSet<u32>>();
        assert_eq!(rank::<u32>(&[]), 0);
        assert_eq!(rank(&[v(&[1]), v(&[2]), v(&[1, 2])]), 2);
        assert_eq!(rank(&[v(&[1]), v(&[1])]), 1);
        assert_eq!(rank(&[v(&[]), v(&[])]), 0);
        let many: Vec<_> = (0..130).map(|i| v(&[i, i + 1])).collect();
        assert_eq!(rank(&many), 130);
    }
}
