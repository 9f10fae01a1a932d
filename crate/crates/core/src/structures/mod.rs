//! Finite relational structures with one binary relation: graphs, posets,
//! linear orders and digraphs, their embeddings, and the categories they span.

mod canon;
mod category;
mod embed;
mod oracle;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use canon::{canonical_form, canonical_labeling, is_isomorphic, universe, universe_budget};
pub use category::{Embedding, StructCategory};
pub use embed::{automorphism_count, automorphisms, count_embeddings, embeddings};
pub use oracle::{degree_oracle, linear_extensions, OracleDegree, LITERATURE_ORACLE};

/// Largest universe the bitset representation supports.
pub const MAX_ELEMENTS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructClass {
    Graph,
    Poset,
    Linord,
    Digraph,
}

impl StructClass {
    pub fn relation_name(self) -> &'static str {
        match self {
            StructClass::Graph => "edge",
            StructClass::Poset | StructClass::Linord => "lt",
            StructClass::Digraph => "arc",
        }
    }
}

impl fmt::Display for StructClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StructClass::Graph => "graph",
            StructClass::Poset => "poset",
            StructClass::Linord => "linord",
            StructClass::Digraph => "digraph",
        };
        f.write_str(s)
    }
}

impl FromStr for StructClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graph" | "graphs" => Ok(StructClass::Graph),
            "poset" | "posets" => Ok(StructClass::Poset),
            "linord" | "linords" => Ok(StructClass::Linord),
            "digraph" | "digraphs" => Ok(StructClass::Digraph),
            other => Err(Error::invalid(format!("unknown structure class `{other}`"))),
        }
    }
}

/// A structure on `{0, .., n-1}` with one binary relation, stored as rows of
/// bits: bit `j` of `rows[i]` says `R(i, j)`. Graph edges are symmetric;
/// poset and linear-order relations are strict.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Structure {
    class: StructClass,
    n: usize,
    rows: Vec<u32>,
}

impl Structure {
    pub fn new(class: StructClass, n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_ELEMENTS {
            return Err(Error::invalid(format!("at most {MAX_ELEMENTS} elements supported")));
        }
        let mut rows = vec![0u32; n];
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::invalid(format!("pair ({i},{j}) out of range for n={n}")));
            }
            rows[i] |= 1 << j;
            if class == StructClass::Graph {
                rows[j] |= 1 << i;
            }
        }
        let s = Structure { class, n, rows };
        s.validate()?;
        Ok(s)
    }

    pub(crate) fn from_rows(class: StructClass, rows: Vec<u32>) -> Self {
        Structure {
            class,
            n: rows.len(),
            rows,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::invalid(format!("not a {}: {msg}", self.class)));
        for i in 0..self.n {
            if self.rel(i, i) {
                return bad(format!("{i} related to itself"));
            }
        }
        match self.class {
            StructClass::Graph | StructClass::Digraph => {}
            StructClass::Poset | StructClass::Linord => {
                for i in 0..self.n {
                    for j in 0..self.n {
                        if !self.rel(i, j) {
                            continue;
                        }
                        if self.rows[j] & !self.rows[i] != 0 {
                            let k = (self.rows[j] & !self.rows[i]).trailing_zeros();
                            return bad(format!("{i}<{j}<{k} but not {i}<{k}"));
                        }
                    }
                }
                if self.class == StructClass::Linord {
                    for i in 0..self.n {
                        for j in i + 1..self.n {
                            if !self.rel(i, j) && !self.rel(j, i) {
                                return bad(format!("{i} and {j} incomparable"));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn class(&self) -> StructClass {
        self.class
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn rel(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub(crate) fn rows(&self) -> &[u32] {
        &self.rows
    }

    /// Elements related from `i`, as a bitmask.
    pub(crate) fn out_mask(&self, i: usize) -> u32 {
        self.rows[i]
    }

    /// Elements related to `i`, as a bitmask.
    pub(crate) fn in_mask(&self, i: usize) -> u32 {
        (0..self.n).filter(|&j| self.rel(j, i)).fold(0, |m, j| m | 1 << j)
    }

    /// The relation as pairs; graph edges once each as `(i, j)` with `i < j`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.rel(i, j) && (self.class != StructClass::Graph || i < j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The structure induced on `elements`, renumbered in the given order.
    pub fn induced(&self, elements: &[usize]) -> Structure {
        let rows = elements
            .iter()
            .map(|&i| {
                elements
                    .iter()
                    .enumerate()
                    .filter(|&(_, &j)| self.rel(i, j))
                    .fold(0u32, |m, (k, _)| m | 1 << k)
            })
            .collect();
        Structure::from_rows(self.class, rows)
    }

    /// Relabels element `i` as `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Structure {
        let mut rows = vec![0u32; self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                if self.rel(i, j) {
                    rows[perm[i]] |= 1 << perm[j];
                }
            }
        }
        Structure::from_rows(self.class, rows)
    }

    /// A short stable label, e.g. `g3[0-1,1-2]`, `p3[0<1,0<2]`, `L3`.
    pub fn label(&self) -> String {
        let sep = match self.class {
            StructClass::Graph => "-",
            StructClass::Digraph => ">",
            _ => "<",
        };
        let body: Vec<String> = self.pairs().iter().map(|(i, j)| format!("{i}{sep}{j}")).collect();
        match self.class {
            StructClass::Linord => format!("L{}", self.n),
            StructClass::Graph => format!("g{}[{}]", self.n, body.join(",")),
            StructClass::Poset => format!("p{}[{}]", self.n, body.join(",")),
            StructClass::Digraph => format!("d{}[{}]", self.n, body.join(",")),
        }
    }

    pub fn complete_graph(n: usize) -> Structure {
        let pairs: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Structure::new(StructClass::Graph, n, &pairs).expect("complete graph")
    }

    pub fn empty_graph(n: usize) -> Structure {
        Structure::new(StructClass::Graph, n, &[]).expect("empty graph")
    }

    pub fn path(n: usize) -> Structure {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Structure::new(StructClass::Graph, n, &pairs).expect("path")
    }

    pub fn cycle(n: usize) -> Structure {
        let mut pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n >= 3 {
            pairs.push((0, n - 1));
        }
        Structure::new(StructClass::Graph, n, &pairs).expect("cycle")
    }

    /// The chain `0 < 1 < .. < n-1` in the given order class.
    pub fn chain(class: StructClass, n: usize) -> Structure {
        let pairs: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Structure::new(class, n, &pairs).expect("chain")
    }

    pub fn antichain(n: usize) -> Structure {
        Structure::new(StructClass::Poset, n, &[]).expect("antichain")
    }

    /// Parses a named structure or an inline relation list.
    ///
    /// Graphs: `K3`, `P3`, `C4`, `E3`, or `0-1,1-2` (optionally `4:0-1` to
    /// fix the size). Posets: `chain3`, `antichain3`, `V`, `N`, or `0<1,0<2`
    /// (closed transitively). Linear orders: `L3` or `chain3`. Digraphs:
    /// `0>1,1>2`. A leading `{` parses JSON.
    pub fn parse(class: StructClass, text: &str) -> Result<Structure> {
        let text = text.trim();
        if text.starts_with('{') {
            let s: Structure = text.parse()?;
            if s.class != class {
                return Err(Error::invalid(format!("expected a {class}, got a {}", s.class)));
            }
            return Ok(s);
        }
        if let Some(s) = Self::named(class, text) {
            return Ok(s);
        }
        let (size, body) = match text.split_once(':') {
            Some((n, body)) => (
                Some(n.parse::<usize>().map_err(|_| Error::invalid(format!("bad size `{n}`")))?),
                body,
            ),
            None => (None, text),
        };
        let sep = match class {
            StructClass::Graph => '-',
            StructClass::Digraph => '>',
            StructClass::Poset | StructClass::Linord => '<',
        };
        let mut pairs = Vec::new();
        for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (a, b) = item
                .split_once(sep)
                .ok_or_else(|| Error::invalid(format!("expected `i{sep}j`, got `{item}`")))?;
            let parse = |x: &str| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::invalid(format!("bad element `{x}`")))
            };
            pairs.push((parse(a)?, parse(b)?));
        }
        let n = size.unwrap_or_else(|| pairs.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0));
        if matches!(class, StructClass::Poset | StructClass::Linord) {
            pairs = transitive_closure(n, &pairs)?;
        }
        Structure::new(class, n, &pairs)
    }

    fn named(class: StructClass, text: &str) -> Option<Structure> {
        let split = text.find(|c: char| c.is_ascii_digit()).unwrap_or(text.len());
        let (head, tail) = text.split_at(split);
        let k: Option<usize> = tail.parse().ok();
        match (class, head, k) {
            (StructClass::Graph, "K", Some(n)) => Some(Self::complete_graph(n)),
            (StructClass::Graph, "E", Some(n)) => Some(Self::empty_graph(n)),
            (StructClass::Graph, "P", Some(n)) => Some(Self::path(n)),
            (StructClass::Graph, "C", Some(n)) if n >= 3 => Some(Self::cycle(n)),
            (StructClass::Poset | StructClass::Linord, "chain", Some(n))
            | (StructClass::Linord, "L", Some(n)) => Some(Self::chain(class, n)),
            (StructClass::Poset, "antichain", Some(n)) => Some(Self::antichain(n)),
            (StructClass::Poset, "V", None) => Structure::new(class, 3, &[(0, 1), (0, 2)]).ok(),
            (StructClass::Poset, "N", None) => {
                Structure::new(class, 4, &[(0, 2), (1, 2), (1, 3)]).ok()
            }
            _ => None,
        }
    }
}

fn transitive_closure(n: usize, pairs: &[(usize, usize)]) -> Result<Vec<(usize, usize)>> {
    let mut r = vec![vec![false; n]; n];
    for &(a, b) in pairs {
        if a >= n || b >= n {
            return Err(Error::invalid(format!("pair ({a},{b}) out of range for n={n}")));
        }
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    Ok((0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| r[i][j])
        .collect())
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureJson {
    class: StructClass,
    n: usize,
    #[serde(default)]
    relations: BTreeMap<String, Vec<[usize; 2]>>,
}

impl Serialize for Structure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut relations = BTreeMap::new();
        relations.insert(
            self.class.relation_name().to_string(),
            self.pairs().into_iter().map(|(i, j)| [i, j]).collect(),
        );
        StructureJson {
            class: self.class,
            n: self.n,
            relations,
        }
        .serialize(s)
    }
}

impl FromStr for Structure {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let raw: StructureJson = serde_json::from_str(text)?;
        let expected = raw.class.relation_name();
        let mut pairs = Vec::new();
        for (name, list) in raw.relations {
            if name != expected {
                return Err(Error::invalid(format!(
                    "a {} has relation `{expected}`, not `{name}`",
                    raw.class
                )));
            }
            pairs.extend(list.into_iter().map(|[i, j]| (i, j)));
        }
        Structure::new(raw.class, raw.n, &pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let p = Structure::path(3);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"class":"graph","n":3,"relations":{"edge":[[0,1],[1,2]]}}"#);
        assert_eq!(text.parse::<Structure>().unwrap(), p);
    }

    #[test]
    fn shorthand() {
        let g = Structure::parse(StructClass::Graph, "0-1,1-2").unwrap();
        assert_eq!(g, Structure::path(3));
        let g = Structure::parse(StructClass::Graph, "4:0-1").unwrap();
        assert_eq!(g.size(), 4);
        let v = Structure::parse(StructClass::Poset, "0<1,0<2").unwrap();
        assert_eq!(v, Structure::parse(StructClass::Poset, "V").unwrap());
        let c = Structure::parse(StructClass::Poset, "0<1,1<2").unwrap();
        assert!(c.rel(0, 2));
    }

    #[test]
    fn validation() {
        assert!(Structure::new(StructClass::Graph, 2, &[(0, 0)]).is_err());
        assert!(Structure::new(StructClass::Poset, 3, &[(0, 1), (1, 2)]).is_err());
        assert!(Structure::new(StructClass::Linord, 2, &[]).is_err());
        assert!(r#"{"class":"graph","n":2,"relations":{"lt":[[0,1]]}}"#.parse::<Structure>().is_err());
    }
}
