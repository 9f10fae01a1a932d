//! Small named categories used by the CLI, tests and benches.

use crate::category::{Category, ConcreteBuilder, FinCategory};

fn build(b: ConcreteBuilder) -> FinCategory {
    b.build().expect("corpus category is lawful")
}

/// Objects `A`, `B`; two maps `f1, f2: A → B` swapped by an involution `σ` of `B`.
pub fn category_e() -> FinCategory {
    build(
        ConcreteBuilder::new()
            .object("A", 1)
            .object("B", 2)
            .map("f1", "A", "B", &[0])
            .map("f2", "A", "B", &[1])
            .map("σ", "B", "B", &[1, 0]),
    )
}

/// [`category_e`] without `σ`: the span `(f1, f2)` no longer amalgamates.
pub fn category_e_without_swap() -> FinCategory {
    build(
        ConcreteBuilder::new()
            .object("A", 1)
            .object("B", 2)
            .map("f1", "A", "B", &[0])
            .map("f2", "A", "B", &[1]),
    )
}

/// [`category_e`] with a second copy `B2` of `B`, joined to it by isomorphisms.
pub fn category_e_doubled() -> FinCategory {
    build(
        ConcreteBuilder::new()
            .object("A", 1)
            .object("B", 2)
            .object("B2", 2)
            .map("f1", "A", "B", &[0])
            .map("f2", "A", "B", &[1])
            .map("σ", "B", "B", &[1, 0])
            .map("g1", "A", "B2", &[0])
            .map("g2", "A", "B2", &[1])
            .map("σ2", "B2", "B2", &[1, 0])
            .map("i", "B", "B2", &[0, 1])
            .map("j", "B", "B2", &[1, 0])
            .map("i'", "B2", "B", &[0, 1])
            .map("j'", "B2", "B", &[1, 0]),
    )
}

pub fn terminal() -> FinCategory {
    build(ConcreteBuilder::new().object("A", 1))
}

/// The cyclic group of order `n` as a one-object category; `r{k}` rotates by `k`.
pub fn cyclic_group(n: usize) -> FinCategory {
    let mut b = ConcreteBuilder::new().object("G", n);
    for k in 1..n {
        let images: Vec<usize> = (0..n).map(|x| (x + k) % n).collect();
        b = b.map(&format!("r{k}"), "G", "G", &images);
    }
    build(b)
}

/// `Z2 × Z2` as a one-object category.
pub fn klein_group() -> FinCategory {
    build(
        ConcreteBuilder::new()
            .object("G", 4)
            .map("a", "G", "G", &[1, 0, 3, 2])
            .map("b", "G", "G", &[2, 3, 0, 1])
            .map("c", "G", "G", &[3, 2, 1, 0]),
    )
}

/// The thin category `0 → 1 → 2`.
pub fn chain3() -> FinCategory {
    build(
        ConcreteBuilder::new()
            .object("0", 1)
            .object("1", 1)
            .object("2", 1)
            .map("a01", "0", "1", &[0])
            .map("a12", "1", "2", &[0])
            .map("a02", "0", "2", &[0]),
    )
}

/// The thin category `1 ← 0 → 2`: not directed, no amalgamation.
pub fn vee() -> FinCategory {
    build(
        ConcreteBuilder::new()
            .object("0", 1)
            .object("1", 1)
            .object("2", 1)
            .map("a01", "0", "1", &[0])
            .map("a02", "0", "2", &[0]),
    )
}

/// Three points of `B` permuted cyclically by `Aut(B) = Z3`.
pub fn cyclic3() -> FinCategory {
    build(
        ConcreteBuilder::new()
            .object("A", 1)
            .object("B", 3)
            .map("g0", "A", "B", &[0])
            .map("g1", "A", "B", &[1])
            .map("g2", "A", "B", &[2])
            .map("r", "B", "B", &[1, 2, 0])
            .map("r2", "B", "B", &[2, 0, 1]),
    )
}

/// `A` with a nontrivial automorphism `s` embedding into `B` in two ways.
pub fn aut_sym() -> FinCategory {
    build(
        ConcreteBuilder::new()
            .object("A", 2)
            .object("B", 2)
            .map("s", "A", "A", &[1, 0])
            .map("t", "B", "B", &[1, 0])
            .map("u", "A", "B", &[0, 1])
            .map("v", "A", "B", &[1, 0]),
    )
}

/// Every built-in explicit category, by name.
pub fn named() -> Vec<(&'static str, FinCategory)> {
    vec![
        ("E", category_e()),
        ("E-noswap", category_e_without_swap()),
        ("E-doubled", category_e_doubled()),
        ("terminal", terminal()),
        ("Z2", cyclic_group(2)),
        ("Z3", cyclic_group(3)),
        ("Z4", cyclic_group(4)),
        ("Z2xZ2", klein_group()),
        ("chain3", chain3()),
        ("vee", vee()),
        ("cyclic3", cyclic3()),
        ("autsym", aut_sym()),
    ]
}

pub fn by_name(name: &str) -> Option<FinCategory> {
    named().into_iter().find(|(n, _)| *n == name).map(|(_, c)| c)
}

/// Largest hom-set of a category.
pub fn max_hom(cat: &FinCategory) -> usize {
    cat.objects()
        .flat_map(|a| cat.objects().map(move |b| cat.hom(a, b).len()))
        .max()
        .unwrap_or(0)
}

/// Index pairs `i ≤ j` whose largest hom-sets multiply to at most `limit`.
pub fn product_pairs(corpus: &[(String, FinCategory)], limit: usize) -> Vec<(usize, usize)> {
    let sizes: Vec<usize> = corpus.iter().map(|(_, c)| max_hom(c)).collect();
    let mut pairs = Vec::new();
    for i in 0..corpus.len() {
        for j in i..corpus.len() {
            if sizes[i] * sizes[j] <= limit {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Indices of categories whose hom-sets have at most `limit` elements.
pub fn small_categories(corpus: &[(String, FinCategory)], limit: usize) -> Vec<usize> {
    (0..corpus.len()).filter(|&i| max_hom(&corpus[i].1) <= limit).collect()
}

/// [`named`] with owned names, the form the suites take.
pub fn named_owned() -> Vec<(String, FinCategory)> {
    named().into_iter().map(|(n, c)| (n.to_string(), c)).collect()
}
