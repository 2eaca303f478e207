//! Lexicographic k-subset enumeration and combinatorial (un)ranking.

use alloc::vec::Vec;

/// In-place lexicographic walker over k-subsets of `0..n`.
pub struct Combinations {
    n: usize,
    k: usize,
    state: Vec<usize>,
    started: bool,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            k,
            state: (0..k).collect(),
            started: false,
            done: k > n,
        }
    }

    /// Starts from the combination of the given rank (see [`unrank`]).
    pub fn starting_at_rank(n: usize, k: usize, rank: u128) -> Self {
        let mut c = Combinations::new(n, k);
        if !c.done {
            match unrank(n, k, rank) {
                Some(state) => c.state = state,
                None => c.done = true,
            }
        }
        c
    }

    /// Advances to the next combination and returns it, or `None` when
    /// exhausted. The slice is only valid until the next call.
    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.state);
        }
        // Find the rightmost position that can still move.
        let k = self.k;
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.state[i] + 1 <= self.n - (k - i) {
                break;
            }
        }
        self.state[i] += 1;
        for j in i + 1..k {
            self.state[j] = self.state[j - 1] + 1;
        }
        Some(&self.state)
    }
}

/// `C(n, k)` saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1); the product is exact because acc always
        // holds C(n, i+1) after the division.
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Combination of `rank` (0-based, lexicographic) among k-subsets of
/// `0..n`, or `None` when out of range.
pub fn unrank(n: usize, k: usize, mut rank: u128) -> Option<Vec<usize>> {
    if rank >= binomial(n, k) {
        return None;
    }
    let mut out = Vec::with_capacity(k);
    let mut next = 0usize;
    for remaining in (1..=k).rev() {
        let mut v = next;
        loop {
            let count = binomial(n - v - 1, remaining - 1);
            if rank < count {
                break;
            }
            rank -= count;
            v += 1;
        }
        out.push(v);
        next = v + 1;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn walks_all_pairs_of_four() {
        let mut c = Combinations::new(4, 2);
        let mut seen = vec![];
        while let Some(s) = c.next() {
            seen.push(s.to_vec());
        }
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(30, 3), 4060);
        assert_eq!(binomial(200, 2), 19900);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn unrank_matches_walk_order() {
        let n = 7;
        let k = 3;
        let mut c = Combinations::new(n, k);
        let mut rank = 0u128;
        while let Some(s) = c.next() {
            assert_eq!(unrank(n, k, rank).unwrap(), s);
            rank += 1;
        }
        assert_eq!(rank, binomial(n, k));
        assert!(unrank(n, k, rank).is_none());
    }

    #[test]
    fn starting_at_rank_resumes_mid_stream() {
        let mut all = Combinations::new(6, 2);
        for _ in 0..5 {
            all.next();
        }
        let mut resumed = Combinations::starting_at_rank(6, 2, 4);
        assert_eq!(resumed.next(), Some(&[0usize, 5][..]));
        assert_eq!(resumed.next(), Some(&[1usize, 2][..]));
    }
}
