//! Acceptance suite. Each criterion prints one PASS or FAIL line with its
//! elapsed time against a pinned limit; the process fails if any does.
//! Reference values are recomputed here from first principles rather than
//! taken from the library.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ramseylab::category::{Category, ObjId};
use ramseylab::corpus;
use ramseylab::entropy::{
    entropy_table, entropy_theorem_suite, ramsey_entropy_oracle, ramsey_entropy_oracle_product, EntropyConfig,
};
use ramseylab::functors::{
    collapse_functor, entropy_nondecreasing_check, functor_properties, identity_functor, ordered_graphs_forgetful,
    FunctorTable,
};
use ramseylab::par::SearchOptions;
use ramseylab::partition::{check_entropy_axioms, EntropyKind, Partition};
use ramseylab::ramsey::{
    arrow_check, degree_exact_finite, degree_law_suite, essential_min, ArrowKind, EssentialMode,
};
use ramseylab::structures::{degree_oracle, universe, StructCategory, StructClass, Structure};
use ramseylab::subobj::{check_basic_props, pullback, subobjects};
use ramseylab::ExtNat;

/// Absolute tolerance for every real-valued comparison.
const TOL: f64 = 1e-9;
const PRODUCT_HOM: usize = 9;
const STATE_SPACE_HOM: usize = 2;
const STATE_SPACE_LEN: usize = 3;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn opts() -> SearchOptions {
    SearchOptions::default()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL
}

// ---------- independent references ----------

/// All set partitions of `0..n` as restricted growth strings.
fn rgs_all(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let next = prefix.iter().max().map_or(0, |m| m + 1);
        for b in 0..=next {
            prefix.push(b);
            go(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

fn block_sizes(labels: &[usize]) -> Vec<usize> {
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0; k];
    for &l in labels {
        sizes[l] += 1;
    }
    sizes
}

fn shannon(labels: &[usize]) -> f64 {
    let n = labels.len() as f64;
    block_sizes(labels)
        .iter()
        .map(|&s| {
            let p = s as f64 / n;
            -p * p.log2()
        })
        .sum::<f64>()
        .max(0.0)
}

fn boltzmann(labels: &[usize]) -> f64 {
    (block_sizes(labels).len() as f64).log2()
}

/// `x ~ y` in the finer partition implies `x ~ y` in the coarser.
fn refines(finer: &[usize], coarser: &[usize]) -> bool {
    (0..finer.len()).all(|x| (0..finer.len()).all(|y| finer[x] != finer[y] || coarser[x] == coarser[y]))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn brute_automorphisms(s: &Structure) -> u64 {
    let n = s.size();
    permutations(n)
        .iter()
        .filter(|p| (0..n).all(|i| (0..n).all(|j| s.rel(i, j) == s.rel(p[i], p[j]))))
        .count() as u64
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `max_B |hom(A, B)| / |hom(A, A)|`: in a finite category with only
/// monomorphisms every endomorphism is invertible and `(B choose A)` is
/// `hom(A, B)` modulo `Aut(A)` acting freely.
fn closed_form_degree<C: Category>(cat: &C, a: ObjId) -> u64 {
    let aut = cat.hom(a, a).len();
    let best = cat.objects().map(|b| cat.hom(a, b).len()).max().unwrap_or(0);
    (best / aut) as u64
}

// ---------- criteria ----------

fn entropy_axioms() -> Outcome {
    for h in [EntropyKind::Shannon, EntropyKind::Boltzmann] {
        let r = check_entropy_axioms(&h, 6, 4);
        ensure!(r.passed, "{} fails: {:?}", r.entropy, r.first_violation);
    }
    let mut checked = 0usize;
    for (name, h) in [("shannon", shannon as fn(&[usize]) -> f64), ("boltzmann", boltzmann)] {
        for n in 1..=5 {
            let parts = rgs_all(n);
            for p in &parts {
                let v = h(p);
                let lib = if name == "shannon" { EntropyKind::Shannon } else { EntropyKind::Boltzmann };
                ensure!(close(lib.value(&Partition::from_labels(p)), v), "{name} value on {p:?}");
                let blocks = block_sizes(p).len();
                ensure!(v <= (blocks as f64).log2() + TOL, "{name} log bound on {p:?}");
                ensure!((v.abs() <= TOL) == (blocks == 1), "{name} zero iff trivial on {p:?}");
                let mut sorted = block_sizes(p);
                sorted.sort();
                for q in &parts {
                    if refines(p, q) {
                        ensure!(h(q) <= v + TOL, "{name} monotone on {p:?} ≥ {q:?}");
                    }
                    let mut qs = block_sizes(q);
                    qs.sort();
                    if qs == sorted {
                        ensure!(close(h(q), v), "{name} isomorphism invariance on {p:?}, {q:?}");
                    }
                    checked += 1;
                }
            }
        }
        for n in 1..=3 {
            for m in 1..=3 {
                for p in rgs_all(n) {
                    for q in rgs_all(m) {
                        let k = q.iter().max().unwrap() + 1;
                        let t: Vec<usize> = (0..n * m).map(|i| p[i / m] * k + q[i % m]).collect();
                        let t = Partition::from_labels(&t);
                        let t: Vec<usize> = t.rgs().iter().map(|&x| x as usize).collect();
                        ensure!(close(h(&t), h(&p) + h(&q)), "{name} additivity on {p:?} ⊗ {q:?}");
                    }
                }
            }
        }
    }
    Ok(format!("library checker up to 6 (⊗ to 4×4) and {checked} independent pair checks up to 5"))
}

fn classical_ramsey() -> Outcome {
    let class = StructClass::Linord;
    let chain = |n| Structure::chain(class, n);
    let cat = StructCategory::new(class, vec![chain(2), chain(3), chain(5), chain(6)]).map_err(|e| e.to_string())?;
    let r6 = arrow_check(&cat, 3, 1, 0, 2, 1, ArrowKind::Structural, &opts()).map_err(|e| e.to_string())?;
    ensure!(r6.holds, "6-chain does not arrow");
    let r5 = arrow_check(&cat, 2, 1, 0, 2, 1, ArrowKind::Structural, &opts()).map_err(|e| e.to_string())?;
    ensure!(!r5.holds, "5-chain arrows");
    let cx = r5.counterexample.ok_or("no counterexample")?;
    ensure!(cx.verified, "library did not re-verify the counterexample");

    // Recheck on the points themselves: no monochromatic triple, and each
    // colour class is a 5-cycle.
    let classes = subobjects(&cat, 0, 2).map_err(|e| e.to_string())?;
    let mut colour = [[usize::MAX; 5]; 5];
    for (i, class) in classes.classes().iter().enumerate() {
        let m = &class[0].map;
        let (x, y) = (m[0] as usize, m[1] as usize);
        colour[x][y] = cx.coloring.block_of(i);
        colour[y][x] = colour[x][y];
    }
    for x in 0..5 {
        for y in x + 1..5 {
            for z in y + 1..5 {
                ensure!(
                    !(colour[x][y] == colour[x][z] && colour[x][z] == colour[y][z]),
                    "monochromatic triple {x}{y}{z}"
                );
            }
        }
    }
    for c in 0..2 {
        let degrees: Vec<usize> = (0..5).map(|x| (0..5).filter(|&y| y != x && colour[x][y] == c).count()).collect();
        ensure!(degrees.iter().all(|&d| d == 2), "colour {c} is not 2-regular: {degrees:?}");
        let mut seen = BTreeSet::from([0usize]);
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for y in 0..5 {
                if y != x && colour[x][y] == c && seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        ensure!(seen.len() == 5, "colour {c} is not connected");
    }

    let pig = StructCategory::new(class, vec![chain(1), chain(2), chain(3)]).map_err(|e| e.to_string())?;
    ensure!(
        arrow_check(&pig, 2, 1, 0, 2, 1, ArrowKind::Structural, &opts()).map_err(|e| e.to_string())?.holds,
        "3-chain → (2-chain)^(1-chain) fails"
    );
    let g = StructClass::Graph;
    let k = StructCategory::new(g, vec![Structure::complete_graph(1), Structure::complete_graph(2), Structure::complete_graph(3)])
        .map_err(|e| e.to_string())?;
    ensure!(
        arrow_check(&k, 2, 1, 0, 2, 1, ArrowKind::Structural, &opts()).map_err(|e| e.to_string())?.holds,
        "K3 → (K2)^K1 fails"
    );
    Ok(format!(
        "6 → (3)^2_2 over {} colourings; 5-point counterexample is the pentagon; pigeonhole cases hold",
        r6.colorings_total
    ))
}

fn worked_category() -> Outcome {
    let e = corpus::category_e();
    let (a, b) = (e.object("A").unwrap(), e.object("B").unwrap());
    let deg = |x, kind| {
        degree_exact_finite(&e, x, kind, None, &opts())
            .map_err(|err| err.to_string())
            .map(|d| d.value.unwrap())
    };
    let (ta, tb, ea) = (deg(a, ArrowKind::Structural)?, deg(b, ArrowKind::Structural)?, deg(a, ArrowKind::Embedding)?);
    ensure!(ta == ExtNat::Fin(2) && closed_form_degree(&e, a) == 2, "t̃(A) = {ta:?}");
    ensure!(tb == ExtNat::Fin(1) && closed_form_degree(&e, b) == 1, "t̃(B) = {tb:?}");
    let aut = e.aut(a).len() as u64;
    ensure!(ea == ExtNat::Fin(2) && ea == ExtNat::Fin(aut) * ta, "t(A) = {ea:?}, |Aut A| = {aut}");
    let all: Vec<ObjId> = e.objects().collect();
    let m = essential_min(&e, a, b, EssentialMode::Graded(2), &all, &EntropyKind::Boltzmann, &opts())
        .map_err(|err| err.to_string())?;
    ensure!(m.min_blocks == Some(2), "min essential size {:?}", m.min_blocks);
    let table = entropy_table(&e, &EntropyConfig::finite(EntropyKind::Boltzmann), &opts()).map_err(|err| err.to_string())?;
    ensure!(table[a].r.finite().is_some_and(|r| close(r, 0.0)), "r̃(A) = {:?}", table[a].r);
    // A → B with B Ramsey, so A is subramsey.
    ensure!(e.reaches(a, b) && closed_form_degree(&e, b) == 1, "A is not subramsey");
    Ok("t̃(A)=2, t̃(B)=1, t(A)=2=|Aut A|·t̃(A), min essential size 2, r̃(A)=0 with A subramsey".into())
}

fn degree_laws() -> Outcome {
    let corpus = corpus::named_owned();
    ensure!(corpus.len() >= 10, "corpus has {} categories", corpus.len());
    for (name, cat) in &corpus {
        ensure!(cat.all_mono(), "{name} is not all-mono");
        ensure!(corpus::max_hom(cat) <= 4, "{name} has a hom-set above 4");
    }
    let pairs = corpus::product_pairs(&corpus, PRODUCT_HOM);
    ensure!(pairs.len() >= 5, "only {} product pairs", pairs.len());
    let r = degree_law_suite(&corpus, &pairs, &opts()).map_err(|e| e.to_string())?;
    ensure!(r.passed(), "{} failures", r.failures);
    for (cat_report, (name, cat)) in r.categories.iter().zip(&corpus) {
        for (row, a) in cat_report.objects.iter().zip(cat.objects()) {
            let want = closed_form_degree(cat, a);
            ensure!(row.structural == ExtNat::Fin(want), "{name}/{}: t̃ {:?} vs {want}", row.object, row.structural);
            let hom_max = cat.objects().map(|b| cat.hom(a, b).len()).max().unwrap() as u64;
            ensure!(row.embedding == ExtNat::Fin(hom_max), "{name}/{}: t {:?} vs {hom_max}", row.object, row.embedding);
        }
    }
    let noswap = r.categories.iter().find(|c| c.name == "E-noswap").ok_or("no E-noswap")?;
    ensure!(!noswap.amalgamation && !noswap.monotonicity_violations.is_empty(), "E-noswap exhibit missing");
    Ok(format!(
        "{} categories, {} product pairs ({} product objects), {} monotonicity exhibit(s) without amalgamation",
        corpus.len(),
        pairs.len(),
        r.products.len(),
        r.exhibits
    ))
}

fn entropy_theorems() -> Outcome {
    let corpus = corpus::named_owned();
    let pairs = corpus::product_pairs(&corpus, PRODUCT_HOM);
    let star = corpus::small_categories(&corpus, STATE_SPACE_HOM);
    let r = entropy_theorem_suite(&corpus, &pairs, &star, STATE_SPACE_LEN, &opts()).map_err(|e| e.to_string())?;
    if let Some(c) = r.checks.iter().find(|c| !c.holds && !c.informational) {
        return Err(format!("{} on {} / {}: {}", c.theorem, c.category, c.subject, c.detail));
    }
    for name in [
        "monotone along arrows",
        "log-degree bound",
        "zero on subramsey",
        "isomorphism invariance",
        "shannon below boltzmann",
        "additive on products",
        "subadditive on products",
        "additive on concatenation",
    ] {
        ensure!(r.checks.iter().any(|c| c.theorem == name), "no `{name}` checks ran");
    }
    for (name, cat) in &corpus {
        let t = entropy_table(cat, &EntropyConfig::finite(EntropyKind::Boltzmann), &opts()).map_err(|e| e.to_string())?;
        ensure!(t.iter().all(|o| o.r.finite().is_some_and(|v| close(v, 0.0))), "r̃ ≠ 0 on {name}");
    }
    Ok(format!("{} checks, 0 violations; r̃_Bol ≡ 0 on all {} categories", r.checks.len(), corpus.len()))
}

fn oracle_route() -> Outcome {
    let graphs = universe(StructClass::Graph, 4).map_err(|e| e.to_string())?;
    for g in &graphs {
        let o = degree_oracle(g).map_err(|e| e.to_string())?;
        let want = factorial(g.size()) / brute_automorphisms(g);
        ensure!(o.value == ExtNat::Fin(want), "{g}: oracle {:?}, brute force {want}", o.value);
    }
    for (g, want) in [
        (Structure::complete_graph(3), 1),
        (Structure::path(3), 3),
        (Structure::cycle(4), 3),
        (Structure::path(4), 12),
    ] {
        ensure!(degree_oracle(&g).unwrap().value == ExtNat::Fin(want), "{g} ≠ {want}");
    }
    let p3 = Structure::path(3);
    let r = ramsey_entropy_oracle(&p3, 6, EntropyKind::Boltzmann).map_err(|e| e.to_string())?;
    ensure!(r.value.finite().is_some_and(|v| close(v, 3f64.log2())), "r̃(P3) = {:?}", r.value);
    let k3 = ramsey_entropy_oracle(&Structure::complete_graph(3), 6, EntropyKind::Boltzmann).map_err(|e| e.to_string())?;
    ensure!(k3.value.finite().is_some_and(|v| close(v, 0.0)), "r̃(K3) = {:?}", k3.value);
    let pp = ramsey_entropy_oracle_product(&p3, &p3, 6, EntropyKind::Boltzmann).map_err(|e| e.to_string())?;
    ensure!(pp.value.finite().is_some_and(|v| close(v, 2.0 * 3f64.log2())), "r̃(P3,P3) = {:?}", pp.value);
    Ok(format!("{} graphs match n!/|Aut|; r̃(P3)=log₂3, r̃(K3)=0, r̃(P3,P3)=2·log₂3", graphs.len()))
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Structure {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    Structure::new(StructClass::Graph, n, &edges).unwrap()
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize, min: usize) -> Vec<usize> {
    let k = rng.gen_range(min..=n);
    let mut all: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        all.swap(i, j);
    }
    let mut s = all[..k].to_vec();
    s.sort();
    s
}

fn basic_props() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut partitions = 0;
    let mut per_class = [0usize; 2];
    for instance in 0..200u64 {
        let graphs = rng.gen_bool(0.5);
        let n = rng.gen_range(2..=5);
        let (class, c) = if graphs {
            (StructClass::Graph, random_graph(&mut rng, n))
        } else {
            (StructClass::Linord, Structure::chain(StructClass::Linord, n))
        };
        per_class[usize::from(graphs)] += 1;
        let b = c.induced(&random_subset(&mut rng, c.size(), 1));
        let d = b.induced(&random_subset(&mut rng, b.size(), 1));
        let a = d.induced(&random_subset(&mut rng, d.size(), 1));
        let cat = StructCategory::new(class, vec![a, d, b, c]).map_err(|e| e.to_string())?;
        let ws = cat.hom(2, 3);
        let vs = cat.hom(1, 2);
        let w = &ws[rng.gen_range(0..ws.len())];
        let v = &vs[rng.gen_range(0..vs.len())];
        let r = check_basic_props(&cat, 0, w, instance).map_err(|e| e.to_string())?;
        ensure!(r.passed(), "instance {instance}: {:?}", r.violations);
        partitions += r.partitions_checked;

        let ground = subobjects(&cat, 0, 3).map_err(|e| e.to_string())?.len();
        let labels: Vec<usize> = (0..ground).map(|_| rng.gen_range(0..3)).collect();
        let pi = Partition::from_labels(&labels);
        let direct = pullback(&cat, 0, &cat.compose(w, v), &pi).map_err(|e| e.to_string())?;
        let staged = pullback(&cat, 0, v, &pullback(&cat, 0, w, &pi).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure!(direct == staged, "instance {instance}: pullback does not compose");
        let disc = pullback(&cat, 0, w, &Partition::discrete(ground)).map_err(|e| e.to_string())?;
        ensure!(disc.is_discrete(), "instance {instance}: discrete pulls back to {}", disc.rgs_string());
    }
    Ok(format!(
        "200 instances ({} linear orders, {} graphs), {partitions} partitions; pullbacks compose and keep discreteness",
        per_class[0], per_class[1]
    ))
}

fn check_fibers(u: &FunctorTable, name: &str, identity_expected: bool) -> Outcome {
    let r = entropy_nondecreasing_check(u, true, &opts()).map_err(|e| e.to_string())?;
    let s = &u.source;
    for f in &r.fiber_sums {
        ensure!(f.matches_closed_form, "{name}: fiber sum at {} disagrees with the closed form", f.a);
        let mut sum = 0;
        for (rep, got) in f.representatives.iter().zip(&f.representative_degrees) {
            let want = closed_form_degree(s, s.object(rep).unwrap());
            ensure!(*got == ExtNat::Fin(want), "{name}: t̃({rep}) = {got:?}, expected {want}");
            sum += want;
        }
        let target = closed_form_degree(&u.target, u.target.object(&f.ua).unwrap());
        ensure!(f.sum == ExtNat::Fin(sum) && f.target_degree == ExtNat::Fin(target), "{name}: fiber at {}", f.a);
        if identity_expected {
            ensure!(f.identity_holds, "{name}: fiber identity fails at {}", f.a);
        }
    }
    Ok(format!("{} violations", r.violations))
}

fn functor_suite() -> Outcome {
    let og = ordered_graphs_forgetful(3).map_err(|e| e.to_string())?;
    let p = functor_properties(&og);
    ensure!(p.finitary.holds && p.reasonable.holds && p.unique_restrictions.holds, "ordered graphs: {p:?}");
    let k2 = og.target.object("g2[0-1]").map_err(|e| e.to_string())?;
    ensure!(og.preimage(k2).len() == 2, "|U⁻¹(K2)| = {}", og.preimage(k2).len());
    for x in og.source.objects() {
        for y in og.source.objects() {
            if og.source.reaches(x, y) {
                ensure!(og.target.reaches(og.object(x), og.object(y)), "reachability not preserved");
            }
        }
    }
    check_fibers(&og, "ordered graphs", false)?;

    let e = corpus::category_e();
    let id = identity_functor(&e);
    ensure!(functor_properties(&id).all_hold(), "identity on E lacks a property");
    let r = entropy_nondecreasing_check(&id, false, &opts()).map_err(|e| e.to_string())?;
    ensure!(r.violations == 0 && r.rows.iter().all(|row| row.r_source == row.r_target), "identity: {r:?}");
    check_fibers(&id, "identity", true)?;

    let collapse = collapse_functor().map_err(|e| e.to_string())?;
    let r = entropy_nondecreasing_check(&collapse, true, &opts()).map_err(|e| e.to_string())?;
    ensure!(r.violations == 0, "collapse: {} violations", r.violations);
    check_fibers(&collapse, "collapse", true)?;
    Ok(format!(
        "ordered graphs ≤3 → graphs ≤3: {} → {} objects, |U⁻¹(K2)|=2; inequality holds on identity and collapse",
        og.source.object_count(),
        og.target.object_count()
    ))
}

fn binary(args: &[&str], cache: Option<&Path>) -> std::process::Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ramseylab"));
    cmd.args(args).env_remove("RAMSEYLAB_CACHE");
    if let Some(c) = cache {
        cmd.arg("--cache-dir").arg(c);
    }
    cmd.output().expect("binary runs")
}

fn determinism() -> Outcome {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let (dir, e, collapse) = (
        root.to_string_lossy().into_owned(),
        root.join("E.json").to_string_lossy().into_owned(),
        root.join("functors/collapse.json").to_string_lossy().into_owned(),
    );
    let queries: Vec<Vec<&str>> = vec![
        vec!["validate-cat", &e],
        vec!["structures", "--class", "graph", "--n-max", "4"],
        vec!["hom", "--cat", &e, "--A", "A", "--B", "B"],
        vec!["subobj", "--class", "graph", "--A", "K2", "--B", "P4"],
        vec!["arrow", "--class", "linord", "--C", "6", "--B", "3", "--A", "2", "-k", "2", "-t", "1"],
        vec!["arrow", "--class", "linord", "--C", "5", "--B", "3", "--A", "2"],
        vec!["witness", "--class", "linord", "--B", "3", "--A", "2", "--n-max", "6"],
        vec!["degree", "--cat", &e, "--exact"],
        vec!["degree", "--class", "graph", "--object", "P3", "--universe", "4"],
        vec!["essential", "--cat", &e, "--A", "A", "--B", "B", "--mode", "graded:2"],
        vec!["entropy", "--cat", &e, "--object", "A", "--mode", "graded:2"],
        vec!["entropy", "--class", "graph", "--object", "P3", "--truncation", "5"],
        vec!["suite", "--corpus", &dir],
        vec!["functor", &collapse, "--force"],
        vec!["functor", "--builtin", "ordered-graphs", "--force"],
    ];
    let cache = tempfile::tempdir().map_err(|e| e.to_string())?;
    for q in &queries {
        let one = binary(&[q.as_slice(), &["--threads", "1"]].concat(), None);
        let eight = binary(&[q.as_slice(), &["--threads", "8"]].concat(), None);
        ensure!(one.status.success(), "{q:?} exited {:?}", one.status.code());
        ensure!(one.stdout == eight.stdout, "{q:?} differs between 1 and 8 threads");
        let stored = binary(q, Some(cache.path()));
        let hit = binary(q, Some(cache.path()));
        ensure!(String::from_utf8_lossy(&hit.stderr).contains("cache: hit"), "{q:?} missed the cache");
        ensure!(stored.stdout == one.stdout && hit.stdout == one.stdout, "{q:?} cache hit differs");
    }
    Ok(format!("{} commands byte-identical across 1/8 threads and on cache hits", queries.len()))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 9] = [
        ("entropy axioms", 30, entropy_axioms),
        ("classical Ramsey instance", 10, classical_ramsey),
        ("worked category", 60, worked_category),
        ("degree laws on the corpus", 300, degree_laws),
        ("entropy theorems on the corpus", 300, entropy_theorems),
        ("oracle route", 60, oracle_route),
        ("basic subobject properties", 120, basic_props),
        ("functor suite", 120, functor_suite),
        ("determinism", 600, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(*limit) => Err(format!("too slow: {detail}")),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        failed += usize::from(outcome.is_err());
        println!(
            "criterion {} {tag} {name}: {detail} [{:.2}s / {limit}s]",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
