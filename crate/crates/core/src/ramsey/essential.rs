use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use super::degree::{degree_exact_finite, saturation_k};
use super::{arrow_instance, ArrowKind, Instance, Score};
use crate::category::{Category, ObjId, Product};
use crate::error::{Error, Result};
use crate::extended::{ExtNat, ExtReal};
use crate::par::SearchOptions;
use crate::partition::{count_partitions, EntropyKind, Partition, PartitionEntropy, Partitions};
use crate::subobj::subobjects;

/// Which colorings a witness `C` must handle: all partitions of
/// `(C choose A)`, or only those with at most `k` blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EssentialMode {
    Literal,
    Graded(usize),
}

impl EssentialMode {
    fn max_blocks(self) -> usize {
        match self {
            EssentialMode::Literal => usize::MAX,
            EssentialMode::Graded(k) => k,
        }
    }
}

impl fmt::Display for EssentialMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EssentialMode::Literal => f.write_str("literal"),
            EssentialMode::Graded(k) => write!(f, "graded:{k}"),
        }
    }
}

impl FromStr for EssentialMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "literal" {
            return Ok(EssentialMode::Literal);
        }
        let k = s
            .strip_prefix("graded:")
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|&k| k >= 1)
            .ok_or_else(|| Error::invalid(format!("mode must be `literal` or `graded:K` with K ≥ 1, got `{s}`")))?;
        Ok(EssentialMode::Graded(k))
    }
}

impl Serialize for EssentialMode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Refutation {
    #[serde(rename = "C")]
    pub c: String,
    pub coloring: Partition,
}

#[derive(Clone, Debug, Serialize)]
pub struct EssentialVerdict {
    pub lambda: Partition,
    pub essential: bool,
    pub witness: Option<String>,
    pub mode: EssentialMode,
    pub scope: String,
    pub refutations: Vec<Refutation>,
}

fn range_scope<C: Category>(cat: &C, range: &[ObjId]) -> String {
    if range.len() <= 8 {
        let names: Vec<String> = range.iter().map(|&c| cat.object_name(c)).collect();
        format!("C ∈ {{{}}}", names.join(", "))
    } else {
        format!("C among {} candidates", range.len())
    }
}

/// Blocks of `Λ` with at least two members; singletons never split.
fn splittable(lambda: &Partition) -> Vec<Vec<u32>> {
    lambda
        .blocks()
        .into_iter()
        .filter(|b| b.len() > 1)
        .map(|b| b.into_iter().map(|x| x as u32).collect())
        .collect()
}

/// Per-candidate sweep instances plus, for each candidate, the colorings
/// that already refuted some partition. Trying those first settles most
/// partitions without a sweep.
struct Checker {
    cands: Vec<(ObjId, Instance)>,
    killers: Vec<Vec<Vec<u32>>>,
}

impl Checker {
    fn new<C: Category>(cat: &C, a: ObjId, b: ObjId, mode: EssentialMode, c_range: &[ObjId]) -> Result<Self> {
        let mut cands = Vec::new();
        let mut killers = Vec::new();
        for &c in c_range.iter().filter(|&&c| cat.reaches(b, c)) {
            let inst = arrow_instance(cat, c, b, a, ArrowKind::Structural, mode.max_blocks())?;
            let mut seeds = Vec::new();
            if inst.ground > 0 && inst.max_blocks >= inst.ground {
                seeds.push((0..inst.ground as u32).collect());
            }
            killers.push(seeds);
            cands.push((c, inst));
        }
        Ok(Checker { cands, killers })
    }

    /// The first candidate that witnesses `Λ`, with refutations of the
    /// candidates tried before it.
    fn check(&mut self, lambda: &Partition, opts: &SearchOptions) -> Result<(Option<usize>, Vec<(usize, Partition)>)> {
        let blocks = splittable(lambda);
        let mut refuted = Vec::new();
        if blocks.is_empty() {
            return Ok(((!self.cands.is_empty()).then_some(0), refuted));
        }
        let score = Score::Split(blocks);
        for (i, (_, inst)) in self.cands.iter().enumerate() {
            if let Some(k) = self.killers[i].iter().find(|l| inst.min_cost(&score, l, 0).0 > 0) {
                refuted.push((i, Partition::from_rgs_unchecked(k.clone())));
                continue;
            }
            let sweep = inst.sweep(&score, 0, opts)?;
            match sweep.failure {
                Some(found) => {
                    self.killers[i].push(found.coloring.rgs().to_vec());
                    refuted.push((i, found.coloring));
                }
                None => return Ok((Some(i), refuted)),
            }
        }
        Ok((None, refuted))
    }
}

/// Whether `Λ` over `(B choose A)` is essential with a witness in `c_range`:
/// some `C` such that every admissible coloring `Π` of `(C choose A)` has
/// a `w: B → C` with `Λ` finer than `ℓ_w⁻¹(Π)`.
#[allow(clippy::too_many_arguments)]
pub fn essential_check<C: Category>(
    cat: &C,
    a: ObjId,
    b: ObjId,
    lambda: &Partition,
    mode: EssentialMode,
    c_range: &[ObjId],
    opts: &SearchOptions,
) -> Result<EssentialVerdict> {
    let n = subobjects(cat, a, b)?.len();
    if lambda.ground_size() != n {
        return Err(Error::GroundMismatch(lambda.ground_size(), n));
    }
    let mut checker = Checker::new(cat, a, b, mode, c_range)?;
    let (witness, refuted) = checker.check(lambda, opts)?;
    Ok(EssentialVerdict {
        lambda: lambda.clone(),
        essential: witness.is_some(),
        witness: witness.map(|i| cat.object_name(checker.cands[i].0)),
        mode,
        scope: range_scope(cat, c_range),
        refutations: refuted
            .into_iter()
            .map(|(i, coloring)| Refutation {
                c: cat.object_name(checker.cands[i].0),
                coloring,
            })
            .collect(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EssentialMin {
    pub subobjects: usize,
    pub mode: EssentialMode,
    pub entropy: String,
    pub min_blocks: Option<usize>,
    pub argmin_blocks: Option<Partition>,
    pub blocks_witness: Option<String>,
    pub min_entropy: ExtReal,
    pub argmin_entropy: Option<Partition>,
    pub entropy_witness: Option<String>,
    pub partitions_decided: usize,
    pub scope: String,
}

/// Sort key for entropy values: fixed-point at the tolerance so equal
/// values computed along different float paths tie.
fn entropy_key(v: ExtReal) -> i64 {
    match v {
        ExtReal::Fin(x) => (x * 1e9).round() as i64,
        ExtReal::Inf => i64::MAX,
    }
}

/// The essential partitions of `(B choose A)` with fewest blocks and with
/// least entropy. Partitions are tried coarse to fine: by block count then
/// entropy for the first, by entropy then block count for the second, ties
/// in restricted-growth order.
#[allow(clippy::too_many_arguments)]
pub fn essential_min<C: Category, H: PartitionEntropy + ?Sized>(
    cat: &C,
    a: ObjId,
    b: ObjId,
    mode: EssentialMode,
    c_range: &[ObjId],
    h: &H,
    opts: &SearchOptions,
) -> Result<EssentialMin> {
    let n = subobjects(cat, a, b)?.len();
    let count = count_partitions(n, None);
    if count > opts.budget_bell {
        return Err(Error::budget("partitions of (B choose A)", count, opts.budget_bell));
    }
    let all: Vec<Partition> = Partitions::new(n, None).collect();
    let values: Vec<ExtReal> = all.iter().map(|p| h.eval(p)).collect();
    let keys: Vec<(usize, i64)> = all
        .iter()
        .zip(&values)
        .map(|(p, &v)| (p.block_count(), entropy_key(v)))
        .collect();
    let mut by_blocks: Vec<usize> = (0..all.len()).collect();
    by_blocks.sort_by_key(|&i| (keys[i].0, keys[i].1, i));
    let mut by_entropy: Vec<usize> = (0..all.len()).collect();
    by_entropy.sort_by_key(|&i| (keys[i].1, keys[i].0, i));

    let mut checker = Checker::new(cat, a, b, mode, c_range)?;
    let mut decided: HashMap<usize, Option<usize>> = HashMap::new();
    let mut first_essential = |order: &[usize]| -> Result<Option<(usize, usize)>> {
        for &i in order {
            let w = match decided.get(&i) {
                Some(&w) => w,
                None => {
                    let (w, _) = checker.check(&all[i], opts)?;
                    decided.insert(i, w);
                    w
                }
            };
            if let Some(w) = w {
                return Ok(Some((i, w)));
            }
        }
        Ok(None)
    };
    let fewest = first_essential(&by_blocks)?;
    let least = first_essential(&by_entropy)?;
    let name = |w: usize| cat.object_name(checker.cands[w].0);
    Ok(EssentialMin {
        subobjects: n,
        mode,
        entropy: h.name(),
        min_blocks: fewest.map(|(i, _)| all[i].block_count()),
        argmin_blocks: fewest.map(|(i, _)| all[i].clone()),
        blocks_witness: fewest.map(|(_, w)| name(w)),
        min_entropy: least.map_or(ExtReal::Inf, |(i, _)| values[i]),
        argmin_entropy: least.map(|(i, _)| all[i].clone()),
        entropy_witness: least.map(|(_, w)| name(w)),
        partitions_decided: decided.len(),
        scope: range_scope(cat, c_range),
    })
}

/// One side of a product query.
pub struct TensorSide<'a, C: Category> {
    pub cat: &'a C,
    pub a: ObjId,
    pub b: ObjId,
    pub lambda: &'a Partition,
    pub c_range: &'a [ObjId],
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorReport {
    pub lambda: Partition,
    pub pass: bool,
    pub witness: Option<String>,
    /// `exhaustive` when the witness was checked on every coloring.
    pub method: String,
    pub mode: EssentialMode,
    pub refutations: Vec<Refutation>,
    pub scope: String,
}

/// Colorings tried on a product colored set too large to sweep: colorings
/// that split along the factors, then uniform random ones.
fn product_samples(
    coords: &[(u32, u32)],
    n1: usize,
    n2: usize,
    k: usize,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Partition> {
    let mut out = Vec::with_capacity(samples);
    for s in 0..samples {
        let labels: Vec<usize> = match s % 3 {
            0 => {
                let c1: Vec<usize> = (0..n1).map(|_| rng.gen_range(0..k)).collect();
                let c2: Vec<usize> = (0..n2).map(|_| rng.gen_range(0..k)).collect();
                coords.iter().map(|&(i, j)| (c1[i as usize] + c2[j as usize]) % k).collect()
            }
            1 => {
                let c1: Vec<usize> = (0..n1).map(|_| rng.gen_range(0..k)).collect();
                coords.iter().map(|&(i, j)| (c1[i as usize] + j as usize) % k).collect()
            }
            _ => coords.iter().map(|_| rng.gen_range(0..k)).collect(),
        };
        out.push(Partition::from_labels(&labels));
    }
    out
}

/// Checks that `Λ₁ ⊗ Λ₂` is essential for `((B₁,B₂) choose (A₁,A₂))` in the
/// product category, trying witnesses `(C₁, C₂)` from the two ranges.
/// Colored sets within the sweep budget are decided exhaustively; larger
/// ones are probed with `samples` colorings, which can refute a witness
/// but not confirm it.
pub fn tensor_essential_check<C1: Category, C2: Category>(
    left: TensorSide<'_, C1>,
    right: TensorSide<'_, C2>,
    mode: EssentialMode,
    samples: usize,
    seed: u64,
    opts: &SearchOptions,
) -> Result<TensorReport> {
    let prod = Product::new(left.cat, right.cat);
    let (a, b) = (prod.pair(left.a, right.a), prod.pair(left.b, right.b));
    let s1 = subobjects(left.cat, left.a, left.b)?;
    let s2 = subobjects(right.cat, right.a, right.b)?;
    if left.lambda.ground_size() != s1.len() {
        return Err(Error::GroundMismatch(left.lambda.ground_size(), s1.len()));
    }
    if right.lambda.ground_size() != s2.len() {
        return Err(Error::GroundMismatch(right.lambda.ground_size(), s2.len()));
    }
    let sb = subobjects(&prod, a, b)?;
    let width = right.lambda.block_count();
    let labels: Vec<usize> = (0..sb.len())
        .map(|x| {
            let (f1, f2) = sb.representative(x);
            let i = s1.class_of(f1).expect("component of a product subobject");
            let j = s2.class_of(f2).expect("component of a product subobject");
            left.lambda.block_of(i) * width + right.lambda.block_of(j)
        })
        .collect();
    let lambda = Partition::from_labels(&labels);
    let score = Score::Split(splittable(&lambda));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut refutations = Vec::new();
    let mut sampled_pass: Option<String> = None;
    let c1s: Vec<ObjId> = left.c_range.iter().copied().filter(|&c| left.cat.reaches(left.b, c)).collect();
    let c2s: Vec<ObjId> = right.c_range.iter().copied().filter(|&c| right.cat.reaches(right.b, c)).collect();
    let scope = format!("C₁ among {} candidates, C₂ among {}", c1s.len(), c2s.len());
    for &c1 in &c1s {
        for &c2 in &c2s {
            let c = prod.pair(c1, c2);
            let inst = arrow_instance(&prod, c, b, a, ArrowKind::Structural, mode.max_blocks())?;
            let name = prod.object_name(c);
            if inst.total() <= opts.budget_bell {
                let sweep = inst.sweep(&score, 0, opts)?;
                match sweep.failure {
                    Some(found) => refutations.push(Refutation {
                        c: name,
                        coloring: found.coloring,
                    }),
                    None => {
                        return Ok(TensorReport {
                            lambda,
                            pass: true,
                            witness: Some(name),
                            method: "exhaustive".into(),
                            mode,
                            refutations,
                            scope,
                        })
                    }
                }
                continue;
            }
            let t1 = subobjects(left.cat, left.a, c1)?;
            let t2 = subobjects(right.cat, right.a, c2)?;
            let tc = subobjects(&prod, a, c)?;
            let coords: Vec<(u32, u32)> = (0..tc.len())
                .map(|x| {
                    let (f1, f2) = tc.representative(x);
                    (t1.class_of(f1).unwrap() as u32, t2.class_of(f2).unwrap() as u32)
                })
                .collect();
            let k = inst.max_blocks;
            let refuted = product_samples(&coords, t1.len(), t2.len(), k, samples, &mut rng)
                .into_iter()
                .find(|p| inst.min_cost(&score, p.rgs(), 0).0 > 0);
            match refuted {
                Some(coloring) => refutations.push(Refutation { c: name, coloring }),
                None => {
                    sampled_pass.get_or_insert(name);
                }
            }
        }
    }
    let (pass, method) = match &sampled_pass {
        Some(_) => (true, format!("sampled ({samples} colorings per candidate, not a proof)")),
        None => (false, "exhaustive or refuted by samples".to_string()),
    };
    Ok(TensorReport {
        lambda,
        pass,
        witness: sampled_pass,
        method,
        mode,
        refutations,
        scope,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscrepancyRow {
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    pub subobjects: usize,
    pub literal_min: Option<usize>,
    pub graded_min: Option<usize>,
    pub graded_k: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscrepancyObject {
    #[serde(rename = "A")]
    pub a: String,
    pub degree: ExtNat,
    pub literal_sup: Option<usize>,
    pub graded_sup: Option<usize>,
    pub literal_matches_degree: bool,
    pub graded_matches_degree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscrepancyReport {
    pub rows: Vec<DiscrepancyRow>,
    pub objects: Vec<DiscrepancyObject>,
}

/// Smallest essential partitions in both modes next to the structural
/// degree, for every `A → B` of a finite category.
pub fn discrepancy_probe<C: Category>(cat: &C, opts: &SearchOptions) -> Result<DiscrepancyReport> {
    let mut rows = Vec::new();
    let mut objects = Vec::new();
    for a in cat.objects() {
        let k = saturation_k(cat, a, ArrowKind::Structural)?;
        let degree = degree_exact_finite(cat, a, ArrowKind::Structural, Some(k), opts)?
            .value
            .expect("exact");
        let (mut lit_sup, mut gr_sup) = (Some(0), Some(0));
        for b in cat.upset(a) {
            let range = cat.upset(b);
            let h = EntropyKind::Boltzmann;
            let lit = essential_min(cat, a, b, EssentialMode::Literal, &range, &h, opts)?;
            let gr = essential_min(cat, a, b, EssentialMode::Graded(k), &range, &h, opts)?;
            lit_sup = lit_sup.zip(lit.min_blocks).map(|(x, y)| x.max(y));
            gr_sup = gr_sup.zip(gr.min_blocks).map(|(x, y)| x.max(y));
            rows.push(DiscrepancyRow {
                a: cat.object_name(a),
                b: cat.object_name(b),
                subobjects: lit.subobjects,
                literal_min: lit.min_blocks,
                graded_min: gr.min_blocks,
                graded_k: k,
            });
        }
        let matches = |s: Option<usize>| s.map(|s| ExtNat::Fin(s as u64)) == Some(degree);
        objects.push(DiscrepancyObject {
            a: cat.object_name(a),
            degree,
            literal_sup: lit_sup,
            graded_sup: gr_sup,
            literal_matches_degree: matches(lit_sup),
            graded_matches_degree: matches(gr_sup),
        });
    }
    Ok(DiscrepancyReport { rows, objects })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::structures::{StructCategory, StructClass, Structure};

    #[test]
    fn mode_round_trip() {
        for m in [EssentialMode::Literal, EssentialMode::Graded(3)] {
            assert_eq!(m.to_string().parse::<EssentialMode>().unwrap(), m);
        }
        assert!("graded:0".parse::<EssentialMode>().is_err());
        assert!("graded".parse::<EssentialMode>().is_err());
    }

    #[test]
    fn category_e_verdicts() {
        let e = corpus::category_e();
        let (a, b) = (e.object("A").unwrap(), e.object("B").unwrap());
        let opts = SearchOptions::default();
        let d = essential_check(&e, a, b, &Partition::discrete(2), EssentialMode::Literal, &[b], &opts).unwrap();
        assert!(d.essential);
        assert_eq!(d.witness.as_deref(), Some("B"));
        let t = essential_check(&e, a, b, &Partition::trivial(2), EssentialMode::Graded(2), &[b], &opts).unwrap();
        assert!(!t.essential);
        assert!(t.refutations[0].coloring.is_discrete());
        for mode in [EssentialMode::Graded(2), EssentialMode::Literal] {
            let m = essential_min(&e, a, b, mode, &[b], &EntropyKind::Boltzmann, &opts).unwrap();
            assert_eq!(m.min_blocks, Some(2));
            assert!((m.min_entropy.finite().unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn chains_trivial_partition() {
        let cat = StructCategory::universe(StructClass::Linord, 6).unwrap();
        let c2 = cat.find(&Structure::chain(StructClass::Linord, 2)).unwrap();
        let c3 = cat.find(&Structure::chain(StructClass::Linord, 3)).unwrap();
        let all: Vec<ObjId> = cat.objects().collect();
        let opts = SearchOptions::default();
        let v = essential_check(&cat, c2, c3, &Partition::trivial(3), EssentialMode::Graded(2), &all, &opts).unwrap();
        assert!(v.essential);
        assert_eq!(v.witness.as_deref(), Some("L6"));
        let m = essential_min(&cat, c2, c3, EssentialMode::Graded(2), &all, &EntropyKind::Shannon, &opts).unwrap();
        assert_eq!(m.min_blocks, Some(1));
    }

    #[test]
    fn ground_mismatch() {
        let e = corpus::category_e();
        let opts = SearchOptions::default();
        let r = essential_check(&e, 0, 1, &Partition::discrete(3), EssentialMode::Literal, &[1], &opts);
        assert!(matches!(r, Err(Error::GroundMismatch(3, 2))));
    }

    #[test]
    fn discrete_tensor_passes() {
        let e = corpus::category_e();
        let opts = SearchOptions::default();
        let d = Partition::discrete(2);
        let side = |lambda| TensorSide {
            cat: &e,
            a: 0,
            b: 1,
            lambda,
            c_range: &[1],
        };
        let r = tensor_essential_check(side(&d), side(&d), EssentialMode::Literal, 0, 1, &opts).unwrap();
        assert!(r.pass);
        assert!(r.lambda.is_discrete());
        assert_eq!(r.method, "exhaustive");
    }

    #[test]
    fn literal_mode_only_accepts_discrete_on_e() {
        let e = corpus::category_e();
        let report = discrepancy_probe(&e, &SearchOptions::default()).unwrap();
        let a = &report.objects[0];
        assert_eq!(a.degree, ExtNat::Fin(2));
        assert!(a.graded_matches_degree);
    }
}
