//! The coloring sweep shared by arrow checks, degree searches and
//! essential-partition checks.
//!
//! A coloring of the ground set is enumerated as its partition into at most
//! `max_blocks` blocks. For each coloring the sweep takes the minimum cost
//! over the witness images and fails the coloring when that minimum exceeds
//! the threshold. The enumeration is split by restricted-growth prefix into
//! chunks whose number does not depend on the thread count; chunk results
//! are merged in prefix order, so the selected counterexample and worst case
//! are the first ones in enumeration order whatever the schedule.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::par::{map_ordered, SearchOptions};
use crate::partition::{count_partitions, Partition, Partitions};

const TARGET_CHUNKS: u128 = 256;
const STOP_POLL: usize = 256;

/// One sweep problem: colorings of `0..ground`, and for each candidate `w`
/// the positions of the ground set it sees.
#[derive(Clone, Debug)]
pub(crate) struct Instance {
    pub ground: usize,
    pub max_blocks: usize,
    pub images: Vec<Vec<u32>>,
    /// Ground permutations induced by the non-identity automorphisms of the
    /// target. The image family must be closed under them.
    pub symmetries: Vec<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub(crate) enum Score {
    /// Distinct colors on the image.
    Colors,
    /// Number of blocks, given as image positions, that the coloring splits.
    Split(Vec<Vec<u32>>),
}

#[derive(Clone, Debug)]
pub(crate) struct Found {
    pub coloring: Partition,
    pub cost: u32,
    /// First `w` attaining the minimum; `None` when there is no candidate.
    pub witness: Option<usize>,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Sweep {
    pub failure: Option<Found>,
    pub worst: Option<Found>,
    pub examined: u64,
    pub pruned: u64,
    pub total: u128,
}

#[derive(Default)]
struct ChunkOut {
    failure: Option<Found>,
    worst: Option<Found>,
    examined: u64,
    pruned: u64,
}

impl Score {
    pub fn cost(&self, labels: &[u32], image: &[u32]) -> u32 {
        match self {
            Score::Colors => {
                let mut mask = 0u128;
                for &x in image {
                    mask |= 1 << labels[x as usize];
                }
                mask.count_ones()
            }
            Score::Split(blocks) => blocks
                .iter()
                .filter(|b| {
                    let first = labels[image[b[0] as usize] as usize];
                    b[1..].iter().any(|&i| labels[image[i as usize] as usize] != first)
                })
                .count() as u32,
        }
    }
}

impl Instance {
    pub fn total(&self) -> u128 {
        count_partitions(self.ground, Some(self.max_blocks))
    }

    /// Minimum cost over the images, stopping as soon as it is `≤ floor`.
    pub fn min_cost(&self, score: &Score, labels: &[u32], floor: u32) -> (u32, Option<usize>) {
        let mut best = u32::MAX;
        let mut arg = None;
        for (i, img) in self.images.iter().enumerate() {
            let c = score.cost(labels, img);
            if c < best {
                best = c;
                arg = Some(i);
                if best <= floor {
                    break;
                }
            }
        }
        (best, arg)
    }

    /// Whether `labels` is least, as a restricted-growth string, among the
    /// colorings `x ↦ labels[σ(x)]` over the symmetries.
    fn is_orbit_least(&self, labels: &[u32], relabel: &mut [u32]) -> bool {
        for sigma in &self.symmetries {
            relabel.fill(u32::MAX);
            let mut next = 0;
            for (x, &sx) in sigma.iter().enumerate() {
                let old = labels[sx as usize] as usize;
                if relabel[old] == u32::MAX {
                    relabel[old] = next;
                    next += 1;
                }
                let m = relabel[old];
                if m < labels[x] {
                    return false;
                }
                if m > labels[x] {
                    break;
                }
            }
        }
        true
    }

    fn prefix_len(&self) -> usize {
        (0..=self.ground)
            .find(|&l| count_partitions(l, Some(self.max_blocks)) >= TARGET_CHUNKS)
            .unwrap_or(self.ground)
    }

    fn scan_chunk(
        &self,
        score: &Score,
        threshold: u32,
        prefix: &[u32],
        chunk: usize,
        stop: &AtomicUsize,
        prune: bool,
    ) -> ChunkOut {
        let mut out = ChunkOut::default();
        let mut relabel = vec![0u32; self.max_blocks.max(1)];
        let colorings = Partitions::completions(prefix, self.ground, Some(self.max_blocks));
        for (n, p) in colorings.enumerate() {
            if n % STOP_POLL == 0 && stop.load(Ordering::Relaxed) < chunk {
                break;
            }
            let labels = p.rgs();
            if prune && !self.is_orbit_least(labels, &mut relabel) {
                out.pruned += 1;
                continue;
            }
            out.examined += 1;
            let floor = out.worst.as_ref().map_or(0, |w| w.cost);
            let (cost, witness) = self.min_cost(score, labels, floor);
            if cost > threshold {
                out.failure = Some(Found {
                    coloring: p,
                    cost,
                    witness,
                });
                stop.fetch_min(chunk, Ordering::Relaxed);
                break;
            }
            if out.worst.as_ref().is_none_or(|w| cost > w.cost) {
                out.worst = Some(Found {
                    coloring: p,
                    cost,
                    witness,
                });
            }
        }
        out
    }

    /// Sweeps every coloring with at most `max_blocks` colors. Stops at the
    /// first coloring whose minimum cost exceeds `threshold`; otherwise
    /// reports the first coloring with the largest minimum cost.
    pub fn sweep(&self, score: &Score, threshold: u32, opts: &SearchOptions) -> Result<Sweep> {
        if self.max_blocks.min(self.ground) > 128 {
            return Err(Error::budget("colors per coloring", self.max_blocks as u128, 128));
        }
        let total = self.total();
        if total > opts.budget_bell {
            return Err(Error::budget("colorings", total, opts.budget_bell));
        }
        let prefixes: Vec<Partition> = Partitions::new(self.prefix_len(), Some(self.max_blocks)).collect();
        let stop = AtomicUsize::new(usize::MAX);
        let prune = opts.prune_aut && !self.symmetries.is_empty();
        let chunks = map_ordered(opts.exec, &prefixes, |i, prefix| {
            self.scan_chunk(score, threshold, prefix.rgs(), i, &stop, prune)
        });
        let mut sweep = Sweep {
            total,
            ..Sweep::default()
        };
        for chunk in chunks {
            sweep.examined += chunk.examined;
            sweep.pruned += chunk.pruned;
            if chunk.failure.is_some() {
                sweep.failure = chunk.failure;
                sweep.worst = None;
                return Ok(sweep);
            }
            if let Some(w) = chunk.worst {
                if sweep.worst.as_ref().is_none_or(|cur| w.cost > cur.cost) {
                    sweep.worst = Some(w);
                }
            }
        }
        Ok(sweep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::par::Exec;

    /// Pairs of a 5-set as ground, triangles as witnesses.
    fn pairs_and_triangles(n: usize) -> Instance {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
        let idx = |a: usize, b: usize| pairs.iter().position(|&p| p == (a, b)).unwrap() as u32;
        let mut images = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    images.push(vec![idx(a, b), idx(a, c), idx(b, c)]);
                }
            }
        }
        Instance {
            ground: pairs.len(),
            max_blocks: 2,
            images,
            symmetries: Vec::new(),
        }
    }

    #[test]
    fn triangle_colorings() {
        let opts = SearchOptions::sequential();
        let five = pairs_and_triangles(5).sweep(&Score::Colors, 1, &opts).unwrap();
        let bad = five.failure.expect("a triangle-free 2-coloring exists");
        assert_eq!(bad.cost, 2);
        let six = pairs_and_triangles(6).sweep(&Score::Colors, 1, &opts).unwrap();
        assert!(six.failure.is_none());
        assert_eq!(six.worst.unwrap().cost, 1);
        assert_eq!(six.examined as u128, six.total);
    }

    #[test]
    fn parallel_matches_sequential() {
        let inst = pairs_and_triangles(5);
        let seq = inst.sweep(&Score::Colors, 1, &SearchOptions::sequential()).unwrap();
        let par_opts = SearchOptions {
            exec: Exec::Parallel,
            ..SearchOptions::default()
        };
        let par = crate::par::with_threads(Some(8), || inst.sweep(&Score::Colors, 1, &par_opts).unwrap());
        let (a, b) = (seq.failure.unwrap(), par.failure.unwrap());
        assert_eq!(a.coloring, b.coloring);
        assert_eq!(seq.examined, par.examined);
    }

    #[test]
    fn budget_is_enforced() {
        let inst = pairs_and_triangles(6);
        let opts = SearchOptions {
            budget_bell: 100,
            ..SearchOptions::sequential()
        };
        assert!(matches!(inst.sweep(&Score::Colors, 1, &opts), Err(Error::Budget { .. })));
    }
}
