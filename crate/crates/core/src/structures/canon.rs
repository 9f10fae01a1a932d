use std::collections::BTreeSet;

use super::{StructClass, Structure};
use crate::error::{Error, Result};

/// Default largest universe size per class.
pub fn universe_budget(class: StructClass) -> usize {
    match class {
        StructClass::Graph => 7,
        StructClass::Poset => 6,
        StructClass::Linord => 12,
        StructClass::Digraph => 4,
    }
}

/// Iterated colour refinement: each element is coloured by its previous
/// colour together with the multisets of colours it relates to and from.
/// Colours are ranks of sorted signatures, so they do not depend on labels.
fn refine(s: &Structure) -> Vec<u32> {
    let n = s.size();
    let mut colors = vec![0u32; n];
    let mut distinct = 1;
    loop {
        let sigs: Vec<(u32, Vec<u32>, Vec<u32>)> = (0..n)
            .map(|i| {
                let mut out: Vec<u32> = (0..n).filter(|&j| s.rel(i, j)).map(|j| colors[j]).collect();
                let mut inn: Vec<u32> = (0..n).filter(|&j| s.rel(j, i)).map(|j| colors[j]).collect();
                out.sort_unstable();
                inn.sort_unstable();
                (colors[i], out, inn)
            })
            .collect();
        let mut ranked = sigs.clone();
        ranked.sort();
        ranked.dedup();
        colors = sigs
            .iter()
            .map(|sig| ranked.binary_search(sig).unwrap() as u32)
            .collect();
        if ranked.len() == distinct {
            return colors;
        }
        distinct = ranked.len();
    }
}

struct Search<'a> {
    s: &'a Structure,
    colors: Vec<u32>,
    /// colour required at each new position
    slots: Vec<u32>,
    order: Vec<usize>,
    code: Vec<u64>,
    best_order: Vec<usize>,
    best_code: Vec<u64>,
}

impl Search<'_> {
    /// Relation of the element at new position `k` to positions `< k`:
    /// low half outgoing, high half incoming.
    fn row_code(&self, k: usize, v: usize) -> u64 {
        let mut c = 0u64;
        for (j, &u) in self.order[..k].iter().enumerate() {
            if self.s.rel(v, u) {
                c |= 1 << j;
            }
            if self.s.rel(u, v) {
                c |= 1 << (32 + j);
            }
        }
        c
    }

    /// `better` says the current prefix already beats the best one. Returns
    /// whether the best ordering was replaced, after which the current prefix
    /// is merely equal to it.
    fn go(&mut self, k: usize, used: u32, mut better: bool) -> bool {
        let n = self.s.size();
        if k == n {
            if better || self.best_order.is_empty() {
                self.best_order = self.order.clone();
                self.best_code = self.code.clone();
                return true;
            }
            return false;
        }
        let mut replaced = false;
        for v in 0..n {
            if used >> v & 1 == 1 || self.colors[v] != self.slots[k] {
                continue;
            }
            self.order.push(v);
            let c = self.row_code(k, v);
            self.code.push(c);
            let first = self.best_order.is_empty();
            let now_better = better || first || c < self.best_code[k];
            if (now_better || c == self.best_code[k]) && self.go(k + 1, used | 1 << v, now_better) {
                replaced = true;
                better = false;
            }
            self.code.pop();
            self.order.pop();
        }
        replaced
    }
}

/// A relabeling `perm` (old element `i` becomes `perm[i]`) that sends `s` to
/// its canonical form.
pub fn canonical_labeling(s: &Structure) -> Vec<usize> {
    let colors = refine(s);
    let mut slots = colors.clone();
    slots.sort_unstable();
    let mut search = Search {
        s,
        colors,
        slots,
        order: Vec::new(),
        code: Vec::new(),
        best_order: Vec::new(),
        best_code: Vec::new(),
    };
    search.go(0, 0, false);
    let mut perm = vec![0; s.size()];
    for (new, &old) in search.best_order.iter().enumerate() {
        perm[old] = new;
    }
    perm
}

/// The representative of `s`'s isomorphism class: colour classes in
/// increasing order, ties broken by the lexicographically least relation
/// code over all consistent orderings.
pub fn canonical_form(s: &Structure) -> Structure {
    s.relabeled(&canonical_labeling(s))
}

pub fn is_isomorphic(a: &Structure, b: &Structure) -> bool {
    a.class() == b.class() && a.size() == b.size() && canonical_form(a) == canonical_form(b)
}

/// One canonical representative per isomorphism class, sizes `1..=n_max`,
/// ordered by size then canonical relation encoding.
pub fn universe(class: StructClass, n_max: usize) -> Result<Vec<Structure>> {
    let limit = universe_budget(class);
    if n_max > limit {
        return Err(Error::budget(format!("{class} universe size"), n_max as u128, limit as u128));
    }
    let mut out = Vec::new();
    let mut layer: BTreeSet<Structure> = BTreeSet::new();
    if n_max >= 1 {
        layer.insert(Structure::from_rows(class, vec![0]));
    }
    for m in 1..=n_max {
        out.extend(layer.iter().cloned());
        if m == n_max {
            break;
        }
        let mut next = BTreeSet::new();
        for s in &layer {
            for grown in one_point_extensions(s) {
                next.insert(canonical_form(&grown));
            }
        }
        layer = next;
    }
    Ok(out)
}

/// Every structure on `m + 1` elements whose restriction to the first `m`
/// is `s`, up to the choices that can reach every isomorphism class.
fn one_point_extensions(s: &Structure) -> Vec<Structure> {
    let m = s.size();
    let mut out = Vec::new();
    let with_new = |outgoing: u32, incoming: u32| {
        let mut rows: Vec<u32> = s.rows().to_vec();
        for (x, row) in rows.iter_mut().enumerate() {
            if incoming >> x & 1 == 1 {
                *row |= 1 << m;
            }
        }
        rows.push(outgoing);
        Structure::from_rows(s.class(), rows)
    };
    match s.class() {
        StructClass::Graph => {
            for nb in 0..1u32 << m {
                out.push(with_new(nb, nb));
            }
        }
        StructClass::Digraph => {
            for o in 0..1u32 << m {
                for i in 0..1u32 << m {
                    out.push(with_new(o, i));
                }
            }
        }
        // Removing a maximal element from any poset leaves a poset, so
        // adding a new maximal element above each down-set reaches all.
        StructClass::Poset => {
            for down in 0..1u32 << m {
                let closed = (0..m)
                    .filter(|&x| down >> x & 1 == 1)
                    .all(|x| s.in_mask(x) & !down == 0);
                if closed {
                    out.push(with_new(0, down));
                }
            }
        }
        StructClass::Linord => out.push(with_new(0, (1u32 << m) - 1)),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::embed::count_embeddings;

    #[test]
    fn universe_sizes() {
        assert_eq!(universe(StructClass::Graph, 3).unwrap().len(), 7);
        assert_eq!(universe(StructClass::Poset, 3).unwrap().len(), 8);
        assert_eq!(universe(StructClass::Linord, 5).unwrap().len(), 5);
        // OEIS A000088 and A000112
        let graphs = universe(StructClass::Graph, 6).unwrap();
        let per: Vec<usize> = (1..=6).map(|n| graphs.iter().filter(|g| g.size() == n).count()).collect();
        assert_eq!(per, [1, 2, 4, 11, 34, 156]);
        let posets = universe(StructClass::Poset, 5).unwrap();
        let per: Vec<usize> = (1..=5).map(|n| posets.iter().filter(|g| g.size() == n).count()).collect();
        assert_eq!(per, [1, 2, 5, 16, 63]);
        assert!(universe(StructClass::Graph, 8).is_err());
    }

    #[test]
    fn canonical_forms() {
        let a = Structure::parse(StructClass::Graph, "0-1,1-2").unwrap();
        let b = Structure::parse(StructClass::Graph, "0-2,2-1").unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
        assert!(is_isomorphic(&a, &b));
        assert!(!is_isomorphic(&a, &Structure::complete_graph(3)));
        let c = canonical_form(&a);
        assert_eq!(canonical_form(&c), c);
    }

    #[test]
    fn canonical_form_agrees_with_isomorphism_search() {
        // Isomorphic iff an embedding between equal-size structures exists.
        let graphs = universe(StructClass::Graph, 4).unwrap();
        for g in &graphs {
            for perm in [[1usize, 0, 3, 2], [3, 2, 1, 0], [2, 0, 3, 1]] {
                if g.size() == 4 {
                    let h = g.relabeled(&perm);
                    assert!(is_isomorphic(g, &h));
                    assert!(count_embeddings(g, &h).unwrap() > 0);
                }
            }
        }
        for (i, g) in graphs.iter().enumerate() {
            for h in &graphs[i + 1..] {
                if g.size() == h.size() {
                    assert_eq!(count_embeddings(g, h).unwrap(), 0);
                }
            }
        }
    }
}
