use super::Partition;

/// Streams the partitions of `{0, .., n-1}` in lexicographic order of their
/// restricted-growth strings, optionally capped at `max_blocks` blocks and
/// optionally restricted to completions of a fixed prefix.
///
/// Concatenating the streams for all prefixes of a given length, taken in
/// prefix order, reproduces the unrestricted stream. Parallel sweeps rely on
/// that.
pub struct Partitions {
    labels: Vec<u32>,
    prefix_max: Vec<u32>,
    fixed: usize,
    cap: u32,
    done: bool,
}

impl Partitions {
    pub fn new(n: usize, max_blocks: Option<usize>) -> Self {
        Self::completions(&[], n, max_blocks)
    }

    /// All partitions whose restricted-growth string starts with `prefix`.
    ///
    /// # Panics
    /// If the prefix is not a restricted-growth string within the block cap,
    /// or is longer than `n`.
    pub fn completions(prefix: &[u32], n: usize, max_blocks: Option<usize>) -> Self {
        assert!(prefix.len() <= n, "prefix longer than ground set");
        let cap = max_blocks.map_or(u32::MAX, |k| k as u32);
        let mut labels = Vec::with_capacity(n);
        let mut prefix_max = Vec::with_capacity(n);
        let mut hi = 0u32;
        for (i, &l) in prefix.iter().enumerate() {
            assert!(
                l <= if i == 0 { 0 } else { hi + 1 },
                "prefix is not a restricted-growth string"
            );
            hi = hi.max(l);
            labels.push(l);
            prefix_max.push(hi);
        }
        let done = (n > 0 && cap == 0) || (n > 0 && !prefix.is_empty() && hi >= cap);
        labels.resize(n, 0);
        prefix_max.resize(n, hi);
        Partitions {
            labels,
            prefix_max,
            fixed: prefix.len().max(1),
            cap,
            done,
        }
    }

    fn advance(&mut self) -> bool {
        let n = self.labels.len();
        let mut i = n;
        while i > self.fixed {
            i -= 1;
            let a = self.labels[i];
            if a <= self.prefix_max[i - 1] && a + 1 < self.cap {
                self.labels[i] = a + 1;
                let m = self.prefix_max[i - 1].max(a + 1);
                self.prefix_max[i] = m;
                for j in i + 1..n {
                    self.labels[j] = 0;
                    self.prefix_max[j] = m;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = Partition::from_rgs_unchecked(self.labels.clone());
        if !self.advance() {
            self.done = true;
        }
        Some(out)
    }
}

/// Number of partitions of an `n`-set into at most `max_blocks` blocks
/// (all partitions when `None`), saturating at `u128::MAX`.
pub fn count_partitions(n: usize, max_blocks: Option<usize>) -> u128 {
    let k = max_blocks.unwrap_or(n).min(n);
    if n == 0 {
        return 1;
    }
    // stirling[j] = S(i, j) for the current row i
    let mut stirling = vec![0u128; k + 1];
    stirling[0] = 1;
    for _ in 0..n {
        for j in (1..=k).rev() {
            stirling[j] = (j as u128)
                .saturating_mul(stirling[j])
                .saturating_add(stirling[j - 1]);
        }
        stirling[0] = 0;
    }
    stirling.iter().fold(0u128, |acc, &s| acc.saturating_add(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bell numbers from the Bell triangle, independent of the Stirling DP.
    fn bell_triangle(n: usize) -> Vec<u128> {
        let mut bells = vec![1u128];
        let mut row = vec![1u128];
        for _ in 0..n {
            let mut next = vec![*row.last().unwrap()];
            for &x in &row {
                let last = *next.last().unwrap();
                next.push(last + x);
            }
            bells.push(next[0]);
            row = next;
        }
        bells
    }

    #[test]
    fn counts_match_bell_triangle() {
        let bells = bell_triangle(9);
        assert_eq!(&bells[..6], &[1, 1, 2, 5, 15, 52]);
        for n in 1..=9 {
            assert_eq!(Partitions::new(n, None).count() as u128, bells[n], "n={n}");
            assert_eq!(count_partitions(n, None), bells[n]);
        }
    }

    #[test]
    fn capped_enumeration_matches_stirling() {
        // S(4,1) + S(4,2) = 1 + 7
        assert_eq!(Partitions::new(4, Some(2)).count(), 8);
        assert_eq!(count_partitions(4, Some(2)), 8);
        // S(15,1) + S(15,2) = 1 + (2^14 - 1)
        assert_eq!(count_partitions(15, Some(2)), 16384);
        for n in 1..=7 {
            for k in 1..=n {
                let got = Partitions::new(n, Some(k)).count() as u128;
                assert_eq!(got, count_partitions(n, Some(k)));
                assert!(Partitions::new(n, Some(k)).all(|p| p.block_count() <= k));
            }
        }
    }

    #[test]
    fn single_element() {
        let all: Vec<_> = Partitions::new(1, None).collect();
        assert_eq!(all, vec![Partition::trivial(1)]);
    }

    #[test]
    fn lexicographic_and_unique() {
        let all: Vec<_> = Partitions::new(6, None).collect();
        for w in all.windows(2) {
            assert!(w[0].rgs() < w[1].rgs());
        }
    }

    #[test]
    fn prefix_streams_concatenate() {
        let n = 6;
        for k in [Some(2), Some(3), None] {
            let whole: Vec<_> = Partitions::new(n, k).collect();
            let mut pieced = Vec::new();
            for prefix in Partitions::new(3, k) {
                pieced.extend(Partitions::completions(prefix.rgs(), n, k));
            }
            assert_eq!(whole, pieced);
        }
    }
}
