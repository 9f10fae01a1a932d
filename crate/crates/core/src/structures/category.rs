use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use super::{canonical_form, embeddings, universe, StructClass, Structure};
use crate::category::{Category, ObjId};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Embedding {
    pub dom: u32,
    pub cod: u32,
    pub map: Box<[u8]>,
}

/// Structures of one class with embeddings as morphisms. Hom-sets are
/// enumerated on first use and cached.
pub struct StructCategory {
    class: StructClass,
    objects: Vec<Structure>,
    names: Vec<String>,
    homs: Vec<OnceLock<Arc<[Embedding]>>>,
}

impl StructCategory {
    pub fn new(class: StructClass, objects: Vec<Structure>) -> Result<Self> {
        if let Some(s) = objects.iter().find(|s| s.class() != class) {
            return Err(Error::invalid(format!("{s} is not a {class}")));
        }
        let mut seen: HashMap<String, usize> = HashMap::new();
        let names = objects
            .iter()
            .map(|s| {
                let label = s.label();
                let k = seen.entry(label.clone()).or_insert(0);
                *k += 1;
                if *k == 1 {
                    label
                } else {
                    format!("{label}#{k}")
                }
            })
            .collect();
        let n = objects.len();
        Ok(StructCategory {
            class,
            objects,
            names,
            homs: (0..n * n).map(|_| OnceLock::new()).collect(),
        })
    }

    /// All structures of the class up to size `n_max`, one per isomorphism type.
    pub fn universe(class: StructClass, n_max: usize) -> Result<Self> {
        Self::new(class, universe(class, n_max)?)
    }

    pub fn class(&self) -> StructClass {
        self.class
    }

    pub fn structure(&self, a: ObjId) -> &Structure {
        &self.objects[a]
    }

    pub fn structures(&self) -> &[Structure] {
        &self.objects
    }

    /// The first object isomorphic to `s`.
    pub fn find(&self, s: &Structure) -> Option<ObjId> {
        let c = canonical_form(s);
        self.objects
            .iter()
            .position(|o| o.size() == s.size() && canonical_form(o) == c)
    }
}

impl Category for StructCategory {
    type Mor = Embedding;

    fn object_count(&self) -> usize {
        self.objects.len()
    }

    fn object_name(&self, a: ObjId) -> String {
        self.names[a].clone()
    }

    fn hom(&self, a: ObjId, b: ObjId) -> Arc<[Embedding]> {
        self.homs[a * self.objects.len() + b]
            .get_or_init(|| {
                embeddings(&self.objects[a], &self.objects[b])
                    .expect("same class")
                    .into_iter()
                    .map(|m| Embedding {
                        dom: a as u32,
                        cod: b as u32,
                        map: m.into_boxed_slice(),
                    })
                    .collect()
            })
            .clone()
    }

    fn compose(&self, g: &Embedding, f: &Embedding) -> Embedding {
        debug_assert_eq!(f.cod, g.dom);
        Embedding {
            dom: f.dom,
            cod: g.cod,
            map: f.map.iter().map(|&x| g.map[x as usize]).collect(),
        }
    }

    fn identity(&self, a: ObjId) -> Embedding {
        Embedding {
            dom: a as u32,
            cod: a as u32,
            map: (0..self.objects[a].size() as u8).collect(),
        }
    }

    fn dom(&self, f: &Embedding) -> ObjId {
        f.dom as usize
    }

    fn cod(&self, f: &Embedding) -> ObjId {
        f.cod as usize
    }

    fn morphism_name(&self, f: &Embedding) -> String {
        let wide = self.objects[f.cod as usize].size() > 10;
        let digits: Vec<String> = f.map.iter().map(|x| x.to_string()).collect();
        let map = if wide { digits.join(",") } else { digits.concat() };
        format!("{}→{}:{map}", self.names[f.dom as usize], self.names[f.cod as usize])
    }

    fn all_mono(&self) -> bool {
        true
    }

    fn object_id(&self, name: &str) -> Option<ObjId> {
        self.names.iter().position(|n| n == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{materialize, Predicates};

    #[test]
    fn linord_homs() {
        let c = StructCategory::universe(StructClass::Linord, 4).unwrap();
        let two = c.find(&Structure::chain(StructClass::Linord, 2)).unwrap();
        let four = c.find(&Structure::chain(StructClass::Linord, 4)).unwrap();
        assert_eq!(c.hom(two, four).len(), 6);
        assert!(c.all_mono());
    }

    #[test]
    fn materialized_graphs_are_lawful() {
        let c = StructCategory::universe(StructClass::Graph, 3).unwrap();
        let m = materialize(&c).unwrap();
        assert!(m.all_mono());
        let p = Predicates::compute(&m);
        assert!(p.all_mono.holds);
        // K3 and its complement have no common extension on three vertices.
        assert!(!p.directed.holds);
    }

    #[test]
    fn duplicate_objects_get_distinct_names() {
        let c = StructCategory::new(
            StructClass::Graph,
            vec![Structure::path(3), Structure::parse(StructClass::Graph, "0-1,1-2").unwrap()],
        )
        .unwrap();
        assert_ne!(c.object_name(0), c.object_name(1));
        assert_eq!(c.hom(0, 1).len(), 2);
    }
}
