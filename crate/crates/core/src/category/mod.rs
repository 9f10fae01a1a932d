//! Finite categories.
//!
//! Everything above this layer (subobjects, arrows, degrees, entropies) is
//! written against the [`Category`] trait, which two backends implement:
//! [`FinCategory`] holds an explicit composition table, while
//! [`crate::structures::StructCategory`] computes hom-sets of embeddings on
//! demand. [`Product`] composes either kind componentwise.

mod amalgam;
mod concrete;
mod fincat;
mod predicates;
mod product;

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

pub use amalgam::{amalgamate_ext, AmalgamWitness};
pub use concrete::ConcreteBuilder;
pub use fincat::{FinCategory, LawViolation, MorId, Morphism, RawCategory, RawMorphism};
pub use predicates::{
    amalgamation, cofinal, directed, first_non_mono, Predicates, Witnessed,
};
pub use product::{power, product, state_space, Product, StateSpace, StateSpaceObject};

pub type ObjId = usize;

pub trait Category: Sync {
    type Mor: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn object_count(&self) -> usize;
    fn object_name(&self, a: ObjId) -> String;
    fn hom(&self, a: ObjId, b: ObjId) -> Arc<[Self::Mor]>;
    /// `g · f`; the caller guarantees `cod(f) = dom(g)`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor;
    fn identity(&self, a: ObjId) -> Self::Mor;
    fn dom(&self, f: &Self::Mor) -> ObjId;
    fn cod(&self, f: &Self::Mor) -> ObjId;
    fn morphism_name(&self, f: &Self::Mor) -> String;
    /// Whether every morphism is left-cancellable.
    fn all_mono(&self) -> bool;

    fn object_id(&self, name: &str) -> Option<ObjId> {
        (0..self.object_count()).find(|&a| self.object_name(a) == name)
    }

    fn objects(&self) -> std::ops::Range<ObjId> {
        0..self.object_count()
    }

    /// `A → B`, i.e. `hom(A, B) ≠ ∅`.
    fn reaches(&self, a: ObjId, b: ObjId) -> bool {
        a == b || !self.hom(a, b).is_empty()
    }

    /// `↑A`, in object order; contains `A`.
    fn upset(&self, a: ObjId) -> Vec<ObjId> {
        self.objects().filter(|&b| self.reaches(a, b)).collect()
    }

    /// The invertible endomorphisms of `A`, in hom order.
    fn aut(&self, a: ObjId) -> Vec<Self::Mor> {
        let ends = self.hom(a, a);
        let id = self.identity(a);
        ends.iter()
            .filter(|f| {
                ends.iter()
                    .any(|g| self.compose(g, f) == id && self.compose(f, g) == id)
            })
            .cloned()
            .collect()
    }

    /// An isomorphism `A → B` if one exists.
    fn isomorphism(&self, a: ObjId, b: ObjId) -> Option<Self::Mor> {
        let there = self.hom(a, b);
        let back = self.hom(b, a);
        let (ida, idb) = (self.identity(a), self.identity(b));
        there
            .iter()
            .find(|f| {
                back.iter()
                    .any(|g| self.compose(g, f) == ida && self.compose(f, g) == idb)
            })
            .cloned()
    }
}

impl<C: Category + ?Sized> Category for &C {
    type Mor = C::Mor;

    fn object_count(&self) -> usize {
        (**self).object_count()
    }
    fn object_name(&self, a: ObjId) -> String {
        (**self).object_name(a)
    }
    fn hom(&self, a: ObjId, b: ObjId) -> Arc<[Self::Mor]> {
        (**self).hom(a, b)
    }
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor {
        (**self).compose(g, f)
    }
    fn identity(&self, a: ObjId) -> Self::Mor {
        (**self).identity(a)
    }
    fn dom(&self, f: &Self::Mor) -> ObjId {
        (**self).dom(f)
    }
    fn cod(&self, f: &Self::Mor) -> ObjId {
        (**self).cod(f)
    }
    fn morphism_name(&self, f: &Self::Mor) -> String {
        (**self).morphism_name(f)
    }
    fn all_mono(&self) -> bool {
        (**self).all_mono()
    }
    fn object_id(&self, name: &str) -> Option<ObjId> {
        (**self).object_id(name)
    }
}

/// Copies any finite category into an explicit table. Morphism ids are the
/// source's morphism names, which must be unique.
pub fn materialize<C: Category>(cat: &C) -> crate::Result<FinCategory> {
    let mut raw = RawCategory::default();
    let mut all = Vec::new();
    for a in cat.objects() {
        raw.objects.push(cat.object_name(a));
        raw.identities
            .insert(cat.object_name(a), cat.morphism_name(&cat.identity(a)));
    }
    for a in cat.objects() {
        for b in cat.objects() {
            for f in cat.hom(a, b).iter() {
                raw.morphisms.push(RawMorphism {
                    id: cat.morphism_name(f),
                    dom: cat.object_name(a),
                    cod: cat.object_name(b),
                });
                all.push(f.clone());
            }
        }
    }
    for f in &all {
        for c in cat.objects() {
            for g in cat.hom(cat.cod(f), c).iter() {
                let gf = cat.compose(g, f);
                raw.compose.push([
                    cat.morphism_name(g),
                    cat.morphism_name(f),
                    cat.morphism_name(&gf),
                ]);
            }
        }
    }
    FinCategory::from_raw(raw)
}
