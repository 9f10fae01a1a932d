use proptest::prelude::*;

use ramseylab::category::Category;
use ramseylab::par::SearchOptions;
use ramseylab::partition::{EntropyKind, Partition};
use ramseylab::ramsey::{arrow_check, ArrowKind};
use ramseylab::structures::{automorphism_count, degree_oracle, StructCategory, StructClass, Structure};
use ramseylab::subobj::{pullback, subobjects};

fn labels(max_n: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..5, 1..=max_n)
}

fn graph(max_n: usize) -> impl Strategy<Value = Structure> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .zip(&bits)
                .filter(|(_, &b)| b)
                .map(|(e, _)| e)
                .collect();
            Structure::new(StructClass::Graph, n, &edges).unwrap()
        })
    })
}

fn with_perm(g: Structure) -> impl Strategy<Value = (Structure, Vec<usize>)> {
    let n = g.size();
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(move |p| (g.clone(), p))
}

fn with_edge(g: &Structure) -> Structure {
    let mut edges = g.pairs();
    edges.push((0, 1));
    Structure::new(StructClass::Graph, g.size(), &edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shannon_never_exceeds_boltzmann(l in labels(12)) {
        let p = Partition::from_labels(&l);
        let (s, b) = (EntropyKind::Shannon.value(&p), EntropyKind::Boltzmann.value(&p));
        prop_assert!(s <= b + 1e-12);
        prop_assert!(s >= 0.0);
    }

    #[test]
    fn entropies_ignore_relabeling(l in labels(10), seed in any::<u64>()) {
        let p = Partition::from_labels(&l);
        let n = l.len();
        let perm: Vec<usize> = (0..n).map(|i| (i + seed as usize) % n).collect();
        let q = p.permuted(&perm);
        prop_assert!(p.is_isomorphic(&q));
        for h in [EntropyKind::Shannon, EntropyKind::Boltzmann] {
            prop_assert!((h.value(&p) - h.value(&q)).abs() < 1e-12);
        }
    }

    #[test]
    fn entropies_add_on_tensors(l in labels(5), m in labels(5)) {
        let (p, q) = (Partition::from_labels(&l), Partition::from_labels(&m));
        let t = p.tensor(&q);
        for h in [EntropyKind::Shannon, EntropyKind::Boltzmann] {
            prop_assert!((h.value(&t) - h.value(&p) - h.value(&q)).abs() < 1e-9);
        }
    }

    #[test]
    fn degree_oracle_ignores_relabeling((g, perm) in graph(5).prop_flat_map(with_perm)) {
        let h = g.relabeled(&perm);
        prop_assert_eq!(degree_oracle(&g).unwrap().value, degree_oracle(&h).unwrap().value);
        prop_assert_eq!(automorphism_count(&g), automorphism_count(&h));
    }

    #[test]
    fn pullback_along_identity_is_identity(g in graph(4), l in prop::collection::vec(0u8..3, 16)) {
        let a = Structure::complete_graph(1);
        let cat = StructCategory::new(StructClass::Graph, vec![a, g]).unwrap();
        let ground = subobjects(&cat, 0, 1).unwrap().len();
        let pi = Partition::from_labels(&l[..ground]);
        let id = cat.identity(1);
        prop_assert_eq!(pullback(&cat, 0, &id, &pi).unwrap(), pi);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Orbit pruning and the execution policy change the work done, never
    /// the verdict.
    #[test]
    fn pruning_and_policy_keep_the_verdict(
        b in graph(3),
        extra in prop::collection::vec(any::<bool>(), 7),
        grow in 0usize..=2,
        k in 2usize..=3,
    ) {
        prop_assume!(b.size() >= 2);
        let b = with_edge(&b);
        // C extends B by `grow` vertices, so B sits inside C.
        let n = b.size() + grow;
        let mut edges = b.pairs();
        let new_pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(_, j)| j >= b.size());
        edges.extend(new_pairs.zip(&extra).filter(|(_, &e)| e).map(|(p, _)| p));
        let c = Structure::new(StructClass::Graph, n, &edges).unwrap();
        let a = Structure::complete_graph(2);
        let cat = StructCategory::new(StructClass::Graph, vec![a, b, c]).unwrap();
        let base = SearchOptions::default();
        let run = |o: SearchOptions| arrow_check(&cat, 2, 1, 0, k, 1, ArrowKind::Structural, &o).map(|r| r.holds).ok();
        let reference = run(SearchOptions { prune_aut: false, ..SearchOptions::sequential() });
        prop_assert!(reference.is_some());
        prop_assert_eq!(run(base), reference);
        prop_assert_eq!(run(SearchOptions::sequential()), reference);
        prop_assert_eq!(run(SearchOptions { prune_aut: false, ..base }), reference);
    }
}
