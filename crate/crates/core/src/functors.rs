//! Functors between finite categories, the forgetful-functor properties, and
//! the check that Ramsey–Boltzmann entropy does not drop along a functor.
//!
//! `U⁻¹(D)` is the literal preimage of an object, so structure-backed
//! instances use non-skeletal categories on fixed element sets.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::category::{directed, Category, ConcreteBuilder, FinCategory, LawViolation, MorId, ObjId};
use crate::corpus;
use crate::entropy::{entropy_table, EntropyConfig};
use crate::error::{Error, Result};
use crate::extended::{ExtNat, ExtReal};
use crate::par::SearchOptions;
use crate::partition::EntropyKind;
use crate::ramsey::{degree_exact_finite, ArrowKind};
use crate::structures::{embeddings, StructClass, Structure};

/// On-disk form: category file names and name-to-name maps.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorSpec {
    pub source: String,
    pub target: String,
    pub objects: BTreeMap<String, String>,
    pub morphisms: BTreeMap<String, String>,
}

#[derive(Clone, Debug)]
pub struct FunctorTable {
    pub source: FinCategory,
    pub target: FinCategory,
    object_map: Vec<ObjId>,
    morphism_map: Vec<MorId>,
}

impl FunctorTable {
    pub fn object(&self, a: ObjId) -> ObjId {
        self.object_map[a]
    }

    pub fn morphism(&self, f: MorId) -> MorId {
        self.morphism_map[f.index()]
    }

    /// `U⁻¹(D)` in object order.
    pub fn preimage(&self, d: ObjId) -> Vec<ObjId> {
        self.source.objects().filter(|&c| self.object_map[c] == d).collect()
    }

    pub fn to_spec(&self, source: &str, target: &str) -> FunctorSpec {
        let (s, t) = (&self.source, &self.target);
        FunctorSpec {
            source: source.into(),
            target: target.into(),
            objects: s
                .objects()
                .map(|a| (s.object_name(a), t.object_name(self.object_map[a])))
                .collect(),
            morphisms: s
                .mor_ids()
                .map(|f| (s.morphism_name(&f), t.morphism_name(&self.morphism(f))))
                .collect(),
        }
    }
}

fn law(name: &str, message: String, witnesses: &[&str]) -> Error {
    Error::Law(LawViolation::new(name, message, witnesses))
}

/// Resolves the name maps and checks the functor laws exhaustively:
/// endpoints, identities, then every composable pair in morphism order.
pub fn validate_functor(
    source: FinCategory,
    target: FinCategory,
    objects: &BTreeMap<String, String>,
    morphisms: &BTreeMap<String, String>,
) -> Result<FunctorTable> {
    for name in objects.keys() {
        source.object(name)?;
    }
    for name in morphisms.keys() {
        source.morphism_id(name)?;
    }
    let mut object_map = Vec::with_capacity(source.object_count());
    for a in source.objects() {
        let name = source.object_name(a);
        let image = objects
            .get(&name)
            .ok_or_else(|| law("functor totality", format!("object {name} has no image"), &[&name]))?;
        object_map.push(target.object(image)?);
    }
    let mut morphism_map = Vec::with_capacity(source.morphism_count());
    for f in source.mor_ids() {
        let name = source.morphism_name(&f);
        let image = morphisms
            .get(&name)
            .ok_or_else(|| law("functor totality", format!("morphism {name} has no image"), &[&name]))?;
        morphism_map.push(target.morphism_id(image)?);
    }
    let table = FunctorTable {
        source,
        target,
        object_map,
        morphism_map,
    };
    let (s, t) = (&table.source, &table.target);
    for f in s.mor_ids() {
        let uf = table.morphism(f);
        if t.dom(&uf) != table.object(s.dom(&f)) || t.cod(&uf) != table.object(s.cod(&f)) {
            let name = s.morphism_name(&f);
            return Err(law(
                "functor endpoints",
                format!("{name} ↦ {} does not respect domains and codomains", t.morphism_name(&uf)),
                &[&name],
            ));
        }
    }
    for a in s.objects() {
        let id = s.identity(a);
        if table.morphism(id) != t.identity(table.object(a)) {
            let name = s.morphism_name(&id);
            return Err(law("functor identity", format!("{name} is not sent to an identity"), &[&name]));
        }
    }
    for f in s.mor_ids() {
        let c = s.cod(&f);
        for d in s.objects() {
            for g in s.hom(c, d).iter() {
                let lhs = table.morphism(s.compose(g, &f));
                let rhs = t.compose(&table.morphism(*g), &table.morphism(f));
                if lhs != rhs {
                    let (gn, fn_) = (s.morphism_name(g), s.morphism_name(&f));
                    return Err(law(
                        "functor composition",
                        format!(
                            "U({gn}·{fn_}) = {} but U({gn})·U({fn_}) = {}",
                            t.morphism_name(&lhs),
                            t.morphism_name(&rhs)
                        ),
                        &[&gn, &fn_],
                    ));
                }
            }
        }
    }
    Ok(table)
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyVerdict {
    pub holds: bool,
    pub witness: Option<Vec<String>>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionRecord {
    pub object: String,
    pub found: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Fiber {
    pub object: String,
    pub preimage: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctorProperties {
    pub finitary: PropertyVerdict,
    pub reasonable: PropertyVerdict,
    pub unique_restrictions: PropertyVerdict,
    pub expansion: PropertyVerdict,
    pub expansion_records: Vec<ExpansionRecord>,
    pub target_directed: bool,
    pub fibers: Vec<Fiber>,
    pub scope: String,
}

impl FunctorProperties {
    pub fn all_hold(&self) -> bool {
        self.finitary.holds && self.reasonable.holds && self.unique_restrictions.holds && self.expansion.holds
    }
}

fn verdict(witness: Option<Vec<String>>, ok: &str) -> PropertyVerdict {
    PropertyVerdict {
        holds: witness.is_none(),
        detail: match &witness {
            None => ok.to_string(),
            Some(w) => format!("fails at {}", w.join(", ")),
        },
        witness,
    }
}

/// Decides finitary, reasonable, unique restrictions and the expansion
/// property by exhaustive search over the two finite categories.
pub fn functor_properties(u: &FunctorTable) -> FunctorProperties {
    let (s, t) = (&u.source, &u.target);
    let preimages: Vec<Vec<ObjId>> = t.objects().map(|d| u.preimage(d)).collect();

    // For e: A → B and C over A, some f: C → D over e.
    let mut reasonable = None;
    'r: for a in t.objects() {
        for b in t.objects() {
            for e in t.hom(a, b).iter() {
                for &c in &preimages[a] {
                    let lifts = preimages[b]
                        .iter()
                        .any(|&d| s.hom(c, d).iter().any(|f| u.morphism(*f) == *e));
                    if !lifts {
                        reasonable = Some(vec![t.morphism_name(e), s.object_name(c)]);
                        break 'r;
                    }
                }
            }
        }
    }

    // For D and e: A → U(D), exactly one C over A with some f: C → D over e.
    let mut unique = None;
    'u: for d in s.objects() {
        let ud = u.object(d);
        for a in t.objects() {
            for e in t.hom(a, ud).iter() {
                let count = preimages[a]
                    .iter()
                    .filter(|&&c| s.hom(c, d).iter().any(|f| u.morphism(*f) == *e))
                    .count();
                if count != 1 {
                    unique = Some(vec![s.object_name(d), t.morphism_name(e), format!("{count} restrictions")]);
                    break 'u;
                }
            }
        }
    }

    // For A, some B with C → D for all C over A and D over B.
    let expansion_records: Vec<ExpansionRecord> = t
        .objects()
        .map(|a| {
            let found = t.objects().find(|&b| {
                preimages[a]
                    .iter()
                    .all(|&c| preimages[b].iter().all(|&d| s.reaches(c, d)))
            });
            ExpansionRecord {
                object: t.object_name(a),
                found: found.map(|b| t.object_name(b)),
            }
        })
        .collect();
    let expansion_gap = expansion_records
        .iter()
        .find(|r| r.found.is_none())
        .map(|r| vec![r.object.clone()]);

    FunctorProperties {
        finitary: verdict(None, "every preimage is finite (finite source)"),
        reasonable: verdict(reasonable, "every arrow lifts from every object over its domain"),
        unique_restrictions: verdict(unique, "every arrow into U(D) restricts uniquely"),
        expansion: verdict(expansion_gap, "every object has an expansion witness"),
        expansion_records,
        target_directed: directed(t).holds,
        fibers: t
            .objects()
            .map(|d| Fiber {
                object: t.object_name(d),
                preimage: preimages[d].iter().map(|&c| s.object_name(c)).collect(),
            })
            .collect(),
        scope: "exhaustive over the given finite categories".into(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyRow {
    #[serde(rename = "X")]
    pub x: String,
    #[serde(rename = "U(X)")]
    pub ux: String,
    pub r_source: ExtReal,
    pub r_target: ExtReal,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberSum {
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "U(A)")]
    pub ua: String,
    /// One object per isomorphism class of `U⁻¹(U(A))`.
    pub representatives: Vec<String>,
    pub representative_degrees: Vec<ExtNat>,
    pub sum: ExtNat,
    pub target_degree: ExtNat,
    pub identity_holds: bool,
    /// The sum and target degree recomputed as `max_B |hom(A, B)| / |Aut A|`.
    pub matches_closed_form: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NondecreasingReport {
    pub hypotheses_hold: bool,
    pub properties: FunctorProperties,
    pub rows: Vec<EntropyRow>,
    pub violations: usize,
    pub fiber_sums: Vec<FiberSum>,
    pub fiber_disagreements: usize,
    pub scope: String,
}

/// `max_B |(B choose A)|` from hom-set sizes, which is the structural
/// degree in any finite all-mono category.
fn closed_form_degree(cat: &FinCategory, a: ObjId) -> ExtNat {
    let aut = cat.aut(a).len();
    let best = cat.objects().map(|b| cat.hom(a, b).len()).max().unwrap_or(0);
    ExtNat::Fin((best / aut) as u64)
}

fn sum(xs: &[ExtNat]) -> ExtNat {
    xs.iter().try_fold(0u64, |acc, x| x.finite().map(|v| acc + v)).map_or(ExtNat::Inf, ExtNat::Fin)
}

/// Checks `r̃_D(U(X)) ≥ r̃_C(X)` for every `X`, and the fiber identity
/// `t̃_D(U(A)) = Σᵢ t̃_C(Bᵢ)` over isomorphism-class representatives of
/// `U⁻¹(U(A))`. Refuses when a functor hypothesis fails unless `force`.
pub fn entropy_nondecreasing_check(u: &FunctorTable, force: bool, opts: &SearchOptions) -> Result<NondecreasingReport> {
    let properties = functor_properties(u);
    let hypotheses_hold = properties.all_hold();
    if !hypotheses_hold && !force {
        let failed: Vec<&str> = [
            ("reasonable", &properties.reasonable),
            ("unique restrictions", &properties.unique_restrictions),
            ("expansion", &properties.expansion),
        ]
        .into_iter()
        .filter(|(_, v)| !v.holds)
        .map(|(n, _)| n)
        .collect();
        return Err(Error::Unsupported(format!(
            "functor hypotheses fail: {}",
            failed.join(", ")
        )));
    }
    let (s, t) = (&u.source, &u.target);
    let cfg = EntropyConfig::finite(EntropyKind::Boltzmann);
    let rs = entropy_table(s, &cfg, opts)?;
    let rt = entropy_table(t, &cfg, opts)?;
    let rows: Vec<EntropyRow> = s
        .objects()
        .map(|x| {
            let ux = u.object(x);
            EntropyRow {
                x: s.object_name(x),
                ux: t.object_name(ux),
                r_source: rs[x].r,
                r_target: rt[ux].r,
                holds: rs[x].r.approx_le(rt[ux].r),
            }
        })
        .collect();
    let violations = rows.iter().filter(|r| !r.holds).count();

    let mut degree_cache: HashMap<(bool, ObjId), ExtNat> = HashMap::new();
    let mut degree = |source: bool, a: ObjId| -> Result<ExtNat> {
        if let Some(&d) = degree_cache.get(&(source, a)) {
            return Ok(d);
        }
        let cat = if source { s } else { t };
        let d = degree_exact_finite(cat, a, ArrowKind::Structural, None, opts)?.value.expect("exact");
        degree_cache.insert((source, a), d);
        Ok(d)
    };
    let mut fiber_sums = Vec::new();
    for a in s.objects() {
        let ua = u.object(a);
        let mut reps: Vec<ObjId> = Vec::new();
        for c in u.preimage(ua) {
            if !reps.iter().any(|&r| s.isomorphism(r, c).is_some()) {
                reps.push(c);
            }
        }
        let degrees: Vec<ExtNat> = reps.iter().map(|&r| degree(true, r)).collect::<Result<_>>()?;
        let total = sum(&degrees);
        let target_degree = degree(false, ua)?;
        let closed: Vec<ExtNat> = reps.iter().map(|&r| closed_form_degree(s, r)).collect();
        fiber_sums.push(FiberSum {
            a: s.object_name(a),
            ua: t.object_name(ua),
            representatives: reps.iter().map(|&r| s.object_name(r)).collect(),
            representative_degrees: degrees,
            sum: total,
            target_degree,
            identity_holds: total == target_degree,
            matches_closed_form: sum(&closed) == total && closed_form_degree(t, ua) == target_degree,
        });
    }
    let fiber_disagreements = fiber_sums.iter().filter(|f| !f.identity_holds).count();
    Ok(NondecreasingReport {
        hypotheses_hold,
        properties,
        rows,
        violations,
        fiber_sums,
        fiber_disagreements,
        scope: "finite categories; Ramsey–Boltzmann entropy by essential search".into(),
    })
}

pub fn identity_functor(cat: &FinCategory) -> FunctorTable {
    FunctorTable {
        source: cat.clone(),
        target: cat.clone(),
        object_map: cat.objects().collect(),
        morphism_map: cat.mor_ids().collect(),
    }
}

/// Sends the duplicated copy `B2` in the doubled worked category onto `B`.
pub fn collapse_functor() -> Result<FunctorTable> {
    let objects: BTreeMap<String, String> = [("A", "A"), ("B", "B"), ("B2", "B")]
        .into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    let morphisms: BTreeMap<String, String> = [
        ("idA", "idA"),
        ("idB", "idB"),
        ("idB2", "idB"),
        ("f1", "f1"),
        ("f2", "f2"),
        ("σ", "σ"),
        ("g1", "f1"),
        ("g2", "f2"),
        ("σ2", "σ"),
        ("i", "idB"),
        ("j", "σ"),
        ("i'", "idB"),
        ("j'", "σ"),
    ]
    .into_iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    validate_functor(corpus::category_e_doubled(), corpus::category_e(), &objects, &morphisms)
}

fn labeled_graphs(n_max: usize) -> Vec<Structure> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        for mask in 0..1u32 << pairs.len() {
            let edges: Vec<(usize, usize)> = (0..pairs.len()).filter(|&e| mask >> e & 1 == 1).map(|e| pairs[e]).collect();
            out.push(Structure::new(StructClass::Graph, n, &edges).expect("simple graph"));
        }
    }
    out
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
    out.sort();
    out
}

fn map_name(dom: &str, cod: &str, map: &[u8]) -> String {
    let digits: String = map.iter().map(|x| x.to_string()).collect();
    format!("{dom}→{cod}:{digits}")
}

/// Ordered graphs on `{0..n-1}`, `n ≤ n_max`, with every linear order of
/// the vertices, mapped onto labeled graphs by forgetting the order.
pub fn ordered_graphs_forgetful(n_max: usize) -> Result<FunctorTable> {
    if n_max > 3 {
        return Err(Error::budget("ordered graph vertices", n_max as u128, 3));
    }
    let graphs = labeled_graphs(n_max);
    let gname: Vec<String> = graphs.iter().map(|g| g.label()).collect();
    let mut gb = ConcreteBuilder::new();
    for (g, name) in graphs.iter().zip(&gname) {
        gb = gb.object(name, g.size());
    }
    let mut g_maps: HashMap<(usize, usize, Vec<u8>), String> = HashMap::new();
    for (i, g) in graphs.iter().enumerate() {
        for (j, h) in graphs.iter().enumerate() {
            for m in embeddings(g, h)? {
                let identity = i == j && m.iter().enumerate().all(|(x, &y)| x == y as usize);
                let name = if identity {
                    format!("id{}", gname[i])
                } else {
                    let name = map_name(&gname[i], &gname[j], &m);
                    gb = gb.map(&name, &gname[i], &gname[j], &m.iter().map(|&x| x as usize).collect::<Vec<_>>());
                    name
                };
                g_maps.insert((i, j, m), name);
            }
        }
    }
    let target = gb.build()?;

    // (graph index, rank of each vertex)
    let mut ordered: Vec<(usize, Vec<usize>, String)> = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        for order in permutations(g.size()) {
            let mut rank = vec![0; g.size()];
            for (r, &v) in order.iter().enumerate() {
                rank[v] = r;
            }
            let seq: Vec<String> = order.iter().map(|v| v.to_string()).collect();
            ordered.push((i, rank, format!("{}:{}", gname[i], seq.join("<"))));
        }
    }
    let mut sb = ConcreteBuilder::new();
    for (i, _, name) in &ordered {
        sb = sb.object(name, graphs[*i].size());
    }
    let mut objects = BTreeMap::new();
    let mut morphisms = BTreeMap::new();
    for (p, (i, rank_p, name_p)) in ordered.iter().enumerate() {
        objects.insert(name_p.clone(), gname[*i].clone());
        for (q, (j, rank_q, name_q)) in ordered.iter().enumerate() {
            for m in embeddings(&graphs[*i], &graphs[*j])? {
                let monotone = (0..m.len())
                    .all(|x| (0..m.len()).all(|y| rank_p[x] >= rank_p[y] || rank_q[m[x] as usize] < rank_q[m[y] as usize]));
                if !monotone {
                    continue;
                }
                let image = g_maps[&(*i, *j, m.clone())].clone();
                let name = if p == q {
                    format!("id{name_p}")
                } else {
                    let name = map_name(name_p, name_q, &m);
                    sb = sb.map(&name, name_p, name_q, &m.iter().map(|&x| x as usize).collect::<Vec<_>>());
                    name
                };
                morphisms.insert(name, image);
            }
        }
    }
    let source = sb.build()?;
    validate_functor(source, target, &objects, &morphisms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_valid_and_has_every_property() {
        let e = corpus::category_e();
        let u = identity_functor(&e);
        let spec = u.to_spec("E.json", "E.json");
        let again = validate_functor(e.clone(), e.clone(), &spec.objects, &spec.morphisms).unwrap();
        let p = functor_properties(&again);
        assert!(p.all_hold());
        assert_eq!(p.expansion_records[0].found.as_deref(), Some("A"));
        let r = entropy_nondecreasing_check(&again, false, &SearchOptions::default()).unwrap();
        assert_eq!(r.violations, 0);
        assert_eq!(r.fiber_disagreements, 0);
    }

    #[test]
    fn broken_table_names_the_pair() {
        let e = corpus::category_e();
        let mut spec = identity_functor(&e).to_spec("E", "E");
        spec.morphisms.insert("σ".into(), "idB".into());
        let err = validate_functor(e.clone(), e, &spec.objects, &spec.morphisms).unwrap_err();
        match err {
            Error::Law(v) => {
                assert_eq!(v.law, "functor composition");
                assert_eq!(v.witnesses, ["σ", "f1"]);
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn collapse_functor_properties() {
        let u = collapse_functor().unwrap();
        let p = functor_properties(&u);
        assert!(p.reasonable.holds);
        assert!(!p.unique_restrictions.holds);
        let opts = SearchOptions::default();
        assert!(entropy_nondecreasing_check(&u, false, &opts).is_err());
        let r = entropy_nondecreasing_check(&u, true, &opts).unwrap();
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn ordered_graphs() {
        let u = ordered_graphs_forgetful(3).unwrap();
        assert_eq!(u.source.object_count(), 1 + 4 + 48);
        assert_eq!(u.target.object_count(), 1 + 2 + 8);
        let k2 = u.target.object("g2[0-1]").unwrap();
        assert_eq!(u.preimage(k2).len(), 2);
        let p = functor_properties(&u);
        assert!(p.reasonable.holds);
        assert!(p.unique_restrictions.holds);
        assert!(p.finitary.holds);
        assert!(!p.target_directed);
    }
}
