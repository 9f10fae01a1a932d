use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Category, ObjId};
use crate::error::{Error, Result};

/// Composition tables switch from pair-indexed to hashed storage at this many morphisms.
const DENSE_LIMIT: usize = 4096;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorId(pub u32);

impl MorId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for MorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub id: String,
    pub dom: ObjId,
    pub cod: ObjId,
}

/// A broken category or functor law, with the morphisms that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("{law}: {message}")]
pub struct LawViolation {
    pub law: String,
    pub message: String,
    pub witnesses: Vec<String>,
}

impl LawViolation {
    pub fn new(law: &str, message: impl Into<String>, witnesses: &[&str]) -> Self {
        LawViolation {
            law: law.to_string(),
            message: message.into(),
            witnesses: witnesses.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// The on-disk category format. Field order is alphabetical so serialized
/// keys come out sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCategory {
    /// Triples `[g, f, g·f]`.
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
    pub identities: BTreeMap<String, String>,
    pub morphisms: Vec<RawMorphism>,
    pub objects: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMorphism {
    pub cod: String,
    pub dom: String,
    pub id: String,
}

#[derive(Clone, Debug)]
enum Table {
    Dense { width: usize, cells: Vec<u32> },
    Sparse(HashMap<(u32, u32), u32>),
}

impl Table {
    const EMPTY: u32 = u32::MAX;

    fn new(morphisms: usize) -> Self {
        if morphisms < DENSE_LIMIT {
            Table::Dense {
                width: morphisms,
                cells: vec![Self::EMPTY; morphisms * morphisms],
            }
        } else {
            Table::Sparse(HashMap::new())
        }
    }

    fn get(&self, g: MorId, f: MorId) -> Option<MorId> {
        match self {
            Table::Dense { width, cells } => {
                let c = cells[g.index() * width + f.index()];
                (c != Self::EMPTY).then_some(MorId(c))
            }
            Table::Sparse(map) => map.get(&(g.0, f.0)).map(|&c| MorId(c)),
        }
    }

    fn set(&mut self, g: MorId, f: MorId, gf: MorId) {
        match self {
            Table::Dense { width, cells } => cells[g.index() * *width + f.index()] = gf.0,
            Table::Sparse(map) => {
                map.insert((g.0, f.0), gf.0);
            }
        }
    }
}

/// An explicit finite category: objects, morphisms with domain and codomain,
/// identities, and a total composition table on composable pairs.
///
/// Construction validates the identity and associativity laws exhaustively;
/// a value of this type is always a lawful category.
#[derive(Clone, Debug)]
pub struct FinCategory {
    objects: Vec<String>,
    obj_index: HashMap<String, ObjId>,
    morphisms: Vec<Morphism>,
    mor_index: HashMap<String, MorId>,
    identities: Vec<MorId>,
    table: Table,
    homs: Vec<Arc<[MorId]>>,
    mono_counterexample: Option<[MorId; 3]>,
}

impl FinCategory {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawCategory = serde_json::from_str(text)?;
        Self::from_raw(raw)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_raw()).expect("category serializes");
        s.push('\n');
        s
    }

    pub fn from_raw(raw: RawCategory) -> Result<Self> {
        let mut obj_index = HashMap::new();
        for (i, name) in raw.objects.iter().enumerate() {
            if obj_index.insert(name.clone(), i).is_some() {
                return Err(LawViolation::new("duplicate object", format!("object `{name}` declared twice"), &[name]).into());
            }
        }
        let mut morphisms = Vec::with_capacity(raw.morphisms.len());
        let mut mor_index = HashMap::new();
        for m in &raw.morphisms {
            let endpoint = |o: &str| {
                obj_index.get(o).copied().ok_or_else(|| {
                    LawViolation::new("dangling endpoint", format!("morphism `{}` refers to unknown object `{o}`", m.id), &[&m.id])
                })
            };
            let (dom, cod) = (endpoint(&m.dom)?, endpoint(&m.cod)?);
            let id = MorId(morphisms.len() as u32);
            if mor_index.insert(m.id.clone(), id).is_some() {
                return Err(LawViolation::new("duplicate morphism", format!("morphism `{}` declared twice", m.id), &[&m.id]).into());
            }
            morphisms.push(Morphism {
                id: m.id.clone(),
                dom,
                cod,
            });
        }
        let lookup = |name: &str| {
            mor_index.get(name).copied().ok_or_else(|| {
                Error::from(LawViolation::new("dangling morphism", format!("unknown morphism `{name}`"), &[name]))
            })
        };

        let mut identities = Vec::with_capacity(raw.objects.len());
        for (a, name) in raw.objects.iter().enumerate() {
            let id_name = raw.identities.get(name).ok_or_else(|| {
                LawViolation::new("missing identity", format!("object `{name}` has no identity"), &[name])
            })?;
            let id = lookup(id_name)?;
            let m = &morphisms[id.index()];
            if m.dom != a || m.cod != a {
                return Err(LawViolation::new("missing identity", format!("identity `{id_name}` of `{name}` is not an endomorphism of `{name}`"), &[id_name]).into());
            }
            identities.push(id);
        }
        for obj in raw.identities.keys() {
            if !obj_index.contains_key(obj) {
                return Err(LawViolation::new("dangling endpoint", format!("identity declared for unknown object `{obj}`"), &[obj]).into());
            }
        }

        let mut table = Table::new(morphisms.len());
        for [g_name, f_name, gf_name] in &raw.compose {
            let (g, f, gf) = (lookup(g_name)?, lookup(f_name)?, lookup(gf_name)?);
            let (mg, mf, mgf) = (&morphisms[g.index()], &morphisms[f.index()], &morphisms[gf.index()]);
            if mg.dom != mf.cod {
                return Err(LawViolation::new("ill-typed composite", format!("`{g_name}·{f_name}` declared but `{g_name}` does not start where `{f_name}` ends"), &[g_name, f_name]).into());
            }
            if mgf.dom != mf.dom || mgf.cod != mg.cod {
                return Err(LawViolation::new("ill-typed composite", format!("`{g_name}·{f_name} = {gf_name}` has the wrong domain or codomain"), &[g_name, f_name, gf_name]).into());
            }
            match table.get(g, f) {
                Some(prev) if prev != gf => {
                    return Err(LawViolation::new("conflicting composite", format!("`{g_name}·{f_name}` declared as both `{}` and `{gf_name}`", morphisms[prev.index()].id), &[g_name, f_name]).into());
                }
                _ => table.set(g, f, gf),
            }
        }

        // Identity composites are implied by the laws; fill them in when
        // omitted, then check every declared entry against them.
        let n = raw.objects.len();
        for (i, m) in morphisms.iter().enumerate() {
            let f = MorId(i as u32);
            for (g, h) in [(identities[m.cod], f), (f, identities[m.dom])] {
                match table.get(g, h) {
                    None => table.set(g, h, f),
                    Some(got) if got != f => {
                        let (gn, hn) = (&morphisms[g.index()].id, &morphisms[h.index()].id);
                        return Err(LawViolation::new("identity law", format!("`{gn}·{hn}` is `{}`, expected `{}`", morphisms[got.index()].id, m.id), &[gn, hn]).into());
                    }
                    _ => {}
                }
            }
        }

        let mut homs_vec: Vec<Vec<MorId>> = vec![Vec::new(); n * n];
        for (i, m) in morphisms.iter().enumerate() {
            homs_vec[m.dom * n + m.cod].push(MorId(i as u32));
        }

        for (gi, mg) in morphisms.iter().enumerate() {
            for f in (0..n).flat_map(|w| homs_vec[w * n + mg.dom].iter().copied()) {
                if table.get(MorId(gi as u32), f).is_none() {
                    let fname = &morphisms[f.index()].id;
                    return Err(LawViolation::new("missing composite", format!("`{}·{fname}` is composable but undefined", mg.id), &[&mg.id, fname]).into());
                }
            }
        }

        let homs: Vec<Arc<[MorId]>> = homs_vec.into_iter().map(Arc::from).collect();
        let mut cat = FinCategory {
            objects: raw.objects,
            obj_index,
            morphisms,
            mor_index,
            identities,
            table,
            homs,
            mono_counterexample: None,
        };
        cat.check_associativity()?;
        cat.mono_counterexample = cat.find_non_mono();
        if cat.mono_counterexample.is_none() {
            cat.check_endomorphism_groups()?;
        }
        Ok(cat)
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.objects.len();
        for h in self.mor_ids() {
            for g in self.into_object(self.morphisms[h.index()].dom, n) {
                let hg = self.comp(h, g);
                for f in self.into_object(self.morphisms[g.index()].dom, n) {
                    let left = self.comp(hg, f);
                    let right = self.comp(h, self.comp(g, f));
                    if left != right {
                        let [hn, gn, fn_] = [h, g, f].map(|m| self.morphisms[m.index()].id.clone());
                        return Err(LawViolation::new(
                            "associativity",
                            format!("({hn}·{gn})·{fn_} = {} but {hn}·({gn}·{fn_}) = {}", self.name_of(left), self.name_of(right)),
                            &[&hn, &gn, &fn_],
                        )
                        .into());
                    }
                }
            }
        }
        Ok(())
    }

    /// A finite left-cancellative monoid is a group, so in an all-mono
    /// category every endomorphism is invertible.
    fn check_endomorphism_groups(&self) -> Result<()> {
        for a in 0..self.objects.len() {
            let ends = &self.homs[a * self.objects.len() + a];
            if self.aut(a).len() != ends.len() {
                let name = &self.objects[a];
                return Err(LawViolation::new("endomorphism group", format!("hom({name},{name}) is not a group although all morphisms are mono"), &[name]).into());
            }
        }
        Ok(())
    }

    fn find_non_mono(&self) -> Option<[MorId; 3]> {
        let n = self.objects.len();
        for f in self.mor_ids() {
            let x = self.morphisms[f.index()].dom;
            for w in 0..n {
                let gs = &self.homs[w * n + x];
                for (i, &g) in gs.iter().enumerate() {
                    for &h in &gs[i + 1..] {
                        if self.comp(f, g) == self.comp(f, h) {
                            return Some([f, g, h]);
                        }
                    }
                }
            }
        }
        None
    }

    /// Morphisms whose codomain is `obj`.
    fn into_object(&self, obj: ObjId, n: usize) -> impl Iterator<Item = MorId> + '_ {
        (0..n).flat_map(move |w| self.homs[w * n + obj].iter().copied())
    }

    fn comp(&self, g: MorId, f: MorId) -> MorId {
        self.table
            .get(g, f)
            .unwrap_or_else(|| panic!("`{}·{}` is not composable", self.name_of(g), self.name_of(f)))
    }

    fn name_of(&self, m: MorId) -> &str {
        &self.morphisms[m.index()].id
    }

    pub fn to_raw(&self) -> RawCategory {
        let mut raw = RawCategory {
            objects: self.objects.clone(),
            ..RawCategory::default()
        };
        for (a, &id) in self.identities.iter().enumerate() {
            raw.identities
                .insert(self.objects[a].clone(), self.name_of(id).to_string());
        }
        for m in &self.morphisms {
            raw.morphisms.push(RawMorphism {
                cod: self.objects[m.cod].clone(),
                dom: self.objects[m.dom].clone(),
                id: m.id.clone(),
            });
        }
        let n = self.objects.len();
        for g in self.mor_ids() {
            for f in self.into_object(self.morphisms[g.index()].dom, n).collect::<Vec<_>>() {
                let gf = self.comp(g, f);
                raw.compose.push([
                    self.name_of(g).to_string(),
                    self.name_of(f).to_string(),
                    self.name_of(gf).to_string(),
                ]);
            }
        }
        raw.compose.sort_by_key(|[g, f, _]| {
            (self.mor_index[g], self.mor_index[f])
        });
        raw
    }

    pub fn mor_ids(&self) -> impl Iterator<Item = MorId> {
        (0..self.morphisms.len() as u32).map(MorId)
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn morphism(&self, m: MorId) -> &Morphism {
        &self.morphisms[m.index()]
    }

    pub fn object(&self, name: &str) -> Result<ObjId> {
        self.obj_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn morphism_id(&self, name: &str) -> Result<MorId> {
        self.mor_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn try_compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.table.get(g, f)
    }

    /// A witness `(f, g, h)` with `f·g = f·h` and `g ≠ h`, if any morphism fails to be mono.
    pub fn mono_counterexample(&self) -> Option<[MorId; 3]> {
        self.mono_counterexample
    }

    /// The full subcategory on the listed objects, in the given order.
    pub fn full_subcategory(&self, objects: &[ObjId]) -> Result<FinCategory> {
        let keep: std::collections::HashSet<ObjId> = objects.iter().copied().collect();
        let raw = self.to_raw();
        let kept_obj = |name: &String| keep.contains(&self.obj_index[name]);
        let kept_mor = |id: &String| {
            let m = &self.morphisms[self.mor_index[id].index()];
            keep.contains(&m.dom) && keep.contains(&m.cod)
        };
        let sub = RawCategory {
            objects: objects.iter().map(|&a| self.objects[a].clone()).collect(),
            identities: raw.identities.into_iter().filter(|(o, _)| kept_obj(o)).collect(),
            morphisms: raw.morphisms.into_iter().filter(|m| kept_mor(&m.id)).collect(),
            compose: raw
                .compose
                .into_iter()
                .filter(|[g, f, _]| kept_mor(g) && kept_mor(f))
                .collect(),
        };
        FinCategory::from_raw(sub)
    }
}

impl Category for FinCategory {
    type Mor = MorId;

    fn object_count(&self) -> usize {
        self.objects.len()
    }

    fn object_name(&self, a: ObjId) -> String {
        self.objects[a].clone()
    }

    fn hom(&self, a: ObjId, b: ObjId) -> Arc<[MorId]> {
        self.homs[a * self.objects.len() + b].clone()
    }

    fn compose(&self, g: &MorId, f: &MorId) -> MorId {
        self.comp(*g, *f)
    }

    fn identity(&self, a: ObjId) -> MorId {
        self.identities[a]
    }

    fn dom(&self, f: &MorId) -> ObjId {
        self.morphisms[f.index()].dom
    }

    fn cod(&self, f: &MorId) -> ObjId {
        self.morphisms[f.index()].cod
    }

    fn morphism_name(&self, f: &MorId) -> String {
        self.morphisms[f.index()].id.clone()
    }

    fn all_mono(&self) -> bool {
        self.mono_counterexample.is_none()
    }

    fn object_id(&self, name: &str) -> Option<ObjId> {
        self.obj_index.get(name).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn e_json() -> String {
        corpus::category_e().to_json()
    }

    #[test]
    fn standing_example_round_trips() {
        let e = corpus::category_e();
        let back = FinCategory::from_json(&e.to_json()).unwrap();
        assert_eq!(back.to_raw(), e.to_raw());
        let (a, b) = (e.object("A").unwrap(), e.object("B").unwrap());
        assert_eq!(e.hom(a, b).len(), 2);
        assert_eq!(e.aut(b).len(), 2);
        assert_eq!(e.upset(a), vec![a, b]);
        assert!(e.reaches(a, a) && !e.reaches(b, a));
        let names: Vec<String> = e.hom(b, b).iter().map(|m| e.morphism_name(m)).collect();
        assert_eq!(names, ["idB", "σ"]);
    }

    #[test]
    fn json_keys_sorted() {
        let text = e_json();
        let keys = ["\"compose\"", "\"identities\"", "\"morphisms\"", "\"objects\""];
        let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn idempotent_swap_breaks_associativity() {
        let mut raw = corpus::category_e().to_raw();
        for entry in raw.compose.iter_mut() {
            if entry[0] == "σ" && entry[1] == "σ" {
                entry[2] = "σ".into();
            }
        }
        let err = FinCategory::from_raw(raw).unwrap_err();
        let Error::Law(v) = err else { panic!("{err}") };
        assert_eq!(v.law, "associativity");
        assert_eq!(v.witnesses, ["σ", "σ", "f1"]);
    }

    #[test]
    fn one_morphism_category() {
        let c = FinCategory::from_json(
            r#"{"objects":["X"],"morphisms":[{"id":"i","dom":"X","cod":"X"}],"identities":{"X":"i"},"compose":[]}"#,
        )
        .unwrap();
        assert_eq!(c.morphism_count(), 1);
        assert!(c.all_mono());
    }

    #[test]
    fn missing_identity_and_dangling() {
        let no_id = r#"{"objects":["X"],"morphisms":[{"id":"i","dom":"X","cod":"X"}],"identities":{},"compose":[]}"#;
        let Err(Error::Law(v)) = FinCategory::from_json(no_id) else { panic!() };
        assert_eq!(v.law, "missing identity");
        let dangling = r#"{"objects":["X"],"morphisms":[{"id":"i","dom":"X","cod":"Y"}],"identities":{"X":"i"},"compose":[]}"#;
        let Err(Error::Law(v)) = FinCategory::from_json(dangling) else { panic!() };
        assert_eq!(v.law, "dangling endpoint");
    }

    #[test]
    fn missing_composite() {
        let mut raw = corpus::category_e().to_raw();
        raw.compose.retain(|[g, f, _]| !(g == "σ" && f == "f1"));
        let Err(Error::Law(v)) = FinCategory::from_raw(raw) else { panic!() };
        assert_eq!(v.law, "missing composite");
    }

    #[test]
    fn mono_matches_definition() {
        for (_, cat) in corpus::named() {
            let n = cat.object_count();
            let mut mono = true;
            for f in cat.mor_ids() {
                let x = cat.morphism(f).dom;
                for w in 0..n {
                    for g in cat.hom(w, x).iter() {
                        for h in cat.hom(w, x).iter() {
                            if g != h && cat.compose(&f, g) == cat.compose(&f, h) {
                                mono = false;
                            }
                        }
                    }
                }
            }
            assert_eq!(mono, cat.all_mono());
        }
    }

    #[test]
    fn full_subcategory_keeps_homs() {
        let e = corpus::category_e_doubled();
        let sub = e.full_subcategory(&[0, 1]).unwrap();
        assert_eq!(sub.morphism_count(), corpus::category_e().morphism_count());
    }
}
