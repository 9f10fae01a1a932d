//! Partitions of finite indexed ground sets.
//!
//! A [`Partition`] of `{0, .., n-1}` is stored as its restricted-growth
//! string: element `i` carries the label of its block, and labels appear in
//! order of first occurrence. That encoding is canonical, so equality of
//! partitions is equality of label vectors.
//!
//! Orientation matters throughout: "finer" means more blocks. Operations name
//! the direction explicitly rather than using bare order symbols.

mod enumerate;
mod measure;

use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use enumerate::{count_partitions, Partitions};
pub use measure::{
    check_entropy_axioms, AxiomReport, AxiomViolation, EntropyAxiom, EntropyKind, PartitionEntropy,
};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    rgs: Vec<u32>,
}

/// Outcome of comparing two partitions of the same ground set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Equal,
    /// The left partition is strictly coarser: every block of the right one
    /// sits inside a block of the left one.
    Coarser,
    /// The left partition is strictly finer.
    Finer,
    Incomparable,
}

impl Partition {
    /// Builds a partition from explicit blocks. Block order is irrelevant.
    pub fn from_blocks<B: AsRef<[usize]>>(blocks: &[B], ground_size: usize) -> Result<Self> {
        let mut label = vec![u32::MAX; ground_size];
        for (b, block) in blocks.iter().enumerate() {
            let block = block.as_ref();
            if block.is_empty() {
                return Err(Error::invalid(format!("block {b} is empty")));
            }
            for &x in block {
                if x >= ground_size {
                    return Err(Error::invalid(format!(
                        "element {x} outside ground set of size {ground_size}"
                    )));
                }
                if label[x] != u32::MAX {
                    return Err(Error::invalid(format!("element {x} in two blocks")));
                }
                label[x] = b as u32;
            }
        }
        if let Some(x) = label.iter().position(|&l| l == u32::MAX) {
            return Err(Error::invalid(format!("element {x} missing from every block")));
        }
        Ok(Self::from_labels(&label))
    }

    /// Canonicalizes an arbitrary labeling: equal labels share a block.
    pub fn from_labels<L: Copy + Eq + std::hash::Hash>(labels: &[L]) -> Self {
        let mut seen: HashMap<L, u32> = HashMap::with_capacity(labels.len());
        let rgs = labels
            .iter()
            .map(|l| {
                let next = seen.len() as u32;
                *seen.entry(*l).or_insert(next)
            })
            .collect();
        Partition { rgs }
    }

    /// Accepts a label vector only if it already is a restricted-growth string.
    pub fn from_rgs(rgs: Vec<u32>) -> Result<Self> {
        let mut next = 0u32;
        for (i, &l) in rgs.iter().enumerate() {
            if l > next {
                return Err(Error::invalid(format!(
                    "label {l} at position {i} skips ahead of {next}"
                )));
            }
            if l == next {
                next += 1;
            }
        }
        Ok(Partition { rgs })
    }

    pub(crate) fn from_rgs_unchecked(rgs: Vec<u32>) -> Self {
        debug_assert!(Self::from_rgs(rgs.clone()).is_ok());
        Partition { rgs }
    }

    /// The one-block partition `{X}`.
    pub fn trivial(n: usize) -> Self {
        Partition { rgs: vec![0; n] }
    }

    /// The all-singletons partition.
    pub fn discrete(n: usize) -> Self {
        Partition {
            rgs: (0..n as u32).collect(),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.rgs.len()
    }

    pub fn block_count(&self) -> usize {
        self.rgs.iter().max().map_or(0, |&m| m as usize + 1)
    }

    pub fn rgs(&self) -> &[u32] {
        &self.rgs
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.rgs[x] as usize
    }

    pub fn same_block(&self, x: usize, y: usize) -> bool {
        self.rgs[x] == self.rgs[y]
    }

    pub fn is_trivial(&self) -> bool {
        self.block_count() <= 1
    }

    pub fn is_discrete(&self) -> bool {
        self.block_count() == self.rgs.len()
    }

    /// Blocks in label order, members ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (x, &l) in self.rgs.iter().enumerate() {
            blocks[l as usize].push(x);
        }
        blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.block_count()];
        for &l in &self.rgs {
            sizes[l as usize] += 1;
        }
        sizes
    }

    /// Restricted-growth string as text, e.g. `"001"`. Labels above 9 use
    /// lowercase letters and beyond that `{n}`.
    pub fn rgs_string(&self) -> String {
        let mut s = String::with_capacity(self.rgs.len());
        for &l in &self.rgs {
            match char::from_digit(l, 36) {
                Some(c) => s.push(c),
                None => s.push_str(&format!("{{{l}}}")),
            }
        }
        s
    }

    /// True when every block of `self` lies inside a block of `other`
    /// (reflexive: a partition is finer than itself).
    pub fn is_finer_than(&self, other: &Partition) -> bool {
        if self.rgs.len() != other.rgs.len() {
            return false;
        }
        let mut image = vec![u32::MAX; self.block_count()];
        for (&mine, &theirs) in self.rgs.iter().zip(&other.rgs) {
            let slot = &mut image[mine as usize];
            if *slot == u32::MAX {
                *slot = theirs;
            } else if *slot != theirs {
                return false;
            }
        }
        true
    }

    pub fn compare(&self, other: &Partition) -> Result<Comparison> {
        if self.ground_size() != other.ground_size() {
            return Err(Error::GroundMismatch(self.ground_size(), other.ground_size()));
        }
        Ok(match (self.is_finer_than(other), other.is_finer_than(self)) {
            (true, true) => Comparison::Equal,
            (true, false) => Comparison::Finer,
            (false, true) => Comparison::Coarser,
            (false, false) => Comparison::Incomparable,
        })
    }

    /// Coarsest common refinement: elements share a block iff they share a
    /// block in every input. This is the supremum when partitions are
    /// ordered with finer partitions on top.
    pub fn join(parts: &[Partition]) -> Result<Partition> {
        let (first, rest) = parts
            .split_first()
            .ok_or_else(|| Error::invalid("join of an empty family"))?;
        let mut acc = first.clone();
        for p in rest {
            if p.ground_size() != acc.ground_size() {
                return Err(Error::GroundMismatch(acc.ground_size(), p.ground_size()));
            }
            let pairs: Vec<(u32, u32)> = acc.rgs.iter().copied().zip(p.rgs.iter().copied()).collect();
            acc = Partition::from_labels(&pairs);
        }
        Ok(acc)
    }

    /// Product partition on `X × Y`, pairs ordered row-major: `(i, j) ↦ i·|Y| + j`.
    pub fn tensor(&self, other: &Partition) -> Partition {
        let m = other.ground_size();
        let kb = other.block_count() as u64;
        let mut labels = Vec::with_capacity(self.ground_size() * m);
        for &a in &self.rgs {
            for &b in &other.rgs {
                labels.push(a as u64 * kb + b as u64);
            }
        }
        Partition::from_labels(&labels)
    }

    /// Isomorphic partitions (possibly over different grounds): there is a
    /// bijection of grounds carrying blocks to blocks. Such a bijection
    /// exists exactly when the multisets of block sizes agree, since blocks
    /// of equal size can be matched and mapped elementwise.
    pub fn is_isomorphic(&self, other: &Partition) -> bool {
        if self.ground_size() != other.ground_size() {
            return false;
        }
        let mut a = self.block_sizes();
        let mut b = other.block_sizes();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }

    /// Relabels the ground set: element `x` of the result sits where `perm`
    /// sends it, i.e. `result[perm[x]] = self[x]`.
    pub fn permuted(&self, perm: &[usize]) -> Partition {
        let mut labels = vec![0u32; self.rgs.len()];
        for (x, &l) in self.rgs.iter().enumerate() {
            labels[perm[x]] = l;
        }
        Partition::from_labels(&labels)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({})", self.rgs_string())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, block) in self.blocks().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, x) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Serialized as `{"blocks": [[..]], "rgs": "..."}`.
impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Partition", 2)?;
        st.serialize_field("blocks", &self.blocks())?;
        st.serialize_field("rgs", &self.rgs_string())?;
        st.end()
    }
}

/// Parses the literal syntax `[[0,1],[2]]`; the ground size is inferred from
/// the largest element.
impl std::str::FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let blocks: Vec<Vec<usize>> = serde_json::from_str(s)
            .map_err(|e| Error::invalid(format!("partition literal `{s}`: {e}")))?;
        let n = blocks.iter().flatten().max().map_or(0, |&m| m + 1);
        Partition::from_blocks(&blocks, n)
    }
}

/// A map from `{0, .., n-1}` into a palette of `k ≥ 1` colors; colors may go unused.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Coloring {
    palette: usize,
    colors: Vec<usize>,
}

impl Coloring {
    pub fn new(palette: usize, colors: Vec<usize>) -> Result<Self> {
        if palette == 0 {
            return Err(Error::invalid("palette must hold at least one color"));
        }
        if let Some((x, &c)) = colors.iter().enumerate().find(|(_, &c)| c >= palette) {
            return Err(Error::invalid(format!(
                "element {x} has color {c} outside palette of size {palette}"
            )));
        }
        Ok(Coloring { palette, colors })
    }

    pub fn palette_size(&self) -> usize {
        self.palette
    }

    pub fn ground_size(&self) -> usize {
        self.colors.len()
    }

    pub fn color_of(&self, x: usize) -> usize {
        self.colors[x]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    /// The partition into nonempty color classes.
    pub fn partition(&self) -> Partition {
        Partition::from_labels(&self.colors)
    }

    /// Colors blocks by their canonical label, so block 0 gets color 0.
    pub fn of_partition(p: &Partition) -> Coloring {
        Coloring {
            palette: p.block_count().max(1),
            colors: p.rgs.iter().map(|&l| l as usize).collect(),
        }
    }
}
