//! Subobject sets `(B choose A) = hom(A, B)/∼_A`, left multiplication by a
//! morphism, and pulled-back partitions.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::category::{Category, ObjId};
use crate::error::{Error, Result};
use crate::partition::{count_partitions, Partition, Partitions};

/// `hom(A, B)` split into `∼_A` classes (`f ∼ g` iff `f = g·α` for some
/// `α ∈ Aut(A)`), ordered by least member in hom order.
#[derive(Clone, Debug)]
pub struct SubobjectSet<M> {
    pub a: ObjId,
    pub b: ObjId,
    classes: Vec<Vec<M>>,
    index: HashMap<M, usize>,
}

impl<M: Clone + Eq + std::hash::Hash> SubobjectSet<M> {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<M>] {
        &self.classes
    }

    pub fn representative(&self, i: usize) -> &M {
        &self.classes[i][0]
    }

    pub fn class_of(&self, f: &M) -> Option<usize> {
        self.index.get(f).copied()
    }
}

fn require_mono<C: Category>(cat: &C) -> Result<()> {
    if cat.all_mono() {
        Ok(())
    } else {
        Err(Error::NotMono("subobjects need every morphism to be mono".into()))
    }
}

pub fn subobjects<C: Category>(cat: &C, a: ObjId, b: ObjId) -> Result<SubobjectSet<C::Mor>> {
    require_mono(cat)?;
    let aut = cat.aut(a);
    let mut classes: Vec<Vec<C::Mor>> = Vec::new();
    let mut index = HashMap::new();
    let homs = cat.hom(a, b);
    let position: HashMap<&C::Mor, usize> = homs.iter().enumerate().map(|(i, f)| (f, i)).collect();
    for f in homs.iter() {
        if index.contains_key(f) {
            continue;
        }
        let mut class: Vec<C::Mor> = aut.iter().map(|alpha| cat.compose(f, alpha)).collect();
        class.sort_by_key(|g| position[g]);
        class.dedup();
        debug_assert_eq!(class.len(), aut.len(), "Aut(A) acts freely on mono hom-sets");
        for g in &class {
            index.insert(g.clone(), classes.len());
        }
        classes.push(class);
    }
    Ok(SubobjectSet { a, b, classes, index })
}

/// The class map `g/∼_A ↦ w·g/∼_A` from `(B choose A)` to `(C choose A)`.
pub fn class_image<C: Category>(
    cat: &C,
    w: &C::Mor,
    from: &SubobjectSet<C::Mor>,
    to: &SubobjectSet<C::Mor>,
) -> Vec<u32> {
    (0..from.len())
        .map(|i| {
            let wg = cat.compose(w, from.representative(i));
            to.class_of(&wg).expect("w·g lies in hom(A, C)") as u32
        })
        .collect()
}

/// The map `f ↦ w·f` from `hom(A, B)` to `hom(A, C)` as hom-order indices.
pub fn hom_image<C: Category>(cat: &C, w: &C::Mor, a: ObjId) -> Vec<u32> {
    let b = cat.dom(w);
    let c = cat.cod(w);
    let target = cat.hom(a, c);
    let position: HashMap<&C::Mor, usize> = target.iter().enumerate().map(|(i, f)| (f, i)).collect();
    cat.hom(a, b)
        .iter()
        .map(|f| position[&cat.compose(w, f)] as u32)
        .collect()
}

/// `ℓ_w⁻¹(Π)` given the class map of `w`: two classes of `(B choose A)` share
/// a block iff their images share a block of `Π`. Blocks with empty
/// preimage disappear.
pub fn pullback_by_image(image: &[u32], pi: &Partition, target_len: usize) -> Result<Partition> {
    if pi.ground_size() != target_len {
        return Err(Error::GroundMismatch(pi.ground_size(), target_len));
    }
    let labels: Vec<usize> = image.iter().map(|&x| pi.block_of(x as usize)).collect();
    Ok(Partition::from_labels(&labels))
}

/// `ℓ_w⁻¹(Π)` for `w: B → C` and `Π` over `(C choose A)`.
pub fn pullback<C: Category>(cat: &C, a: ObjId, w: &C::Mor, pi: &Partition) -> Result<Partition> {
    let from = subobjects(cat, a, cat.dom(w))?;
    let to = subobjects(cat, a, cat.cod(w))?;
    let image = class_image(cat, w, &from, &to);
    let out = pullback_by_image(&image, pi, to.len())?;
    debug_assert!(pullback_by_sets(cat, w, &from, &to, pi).is_some_and(|p| p == out));
    Ok(out)
}

/// `ℓ_w⁻¹(Π)` computed literally from its definition on sets of morphisms:
/// `ℓ_w⁻¹(F)` per class `F`, unions per block, empty sets dropped. `None`
/// when the resulting family is not a partition of `(B choose A)`.
fn pullback_by_sets<C: Category>(
    cat: &C,
    w: &C::Mor,
    from: &SubobjectSet<C::Mor>,
    to: &SubobjectSet<C::Mor>,
    pi: &Partition,
) -> Option<Partition> {
    let homs = cat.hom(to.a, from.b);
    let mut labels = vec![usize::MAX; from.len()];
    for (bi, block) in pi.blocks().iter().enumerate() {
        for &class in block {
            let f_class = &to.classes()[class];
            for g in homs.iter() {
                if f_class.contains(&cat.compose(w, g)) {
                    let gi = from.class_of(g)?;
                    if labels[gi] != usize::MAX && labels[gi] != bi {
                        return None;
                    }
                    labels[gi] = bi;
                }
            }
        }
    }
    if labels.contains(&usize::MAX) {
        return None;
    }
    Some(Partition::from_labels(&labels))
}

/// Partitions of an `n`-set to test: all of them when there are at most
/// `limit`, otherwise `samples` uniformly random labelings.
fn partitions_to_check(n: usize, limit: u128, samples: usize, rng: &mut ChaCha8Rng) -> (Vec<Partition>, bool) {
    if count_partitions(n, None) <= limit {
        (Partitions::new(n, None).collect(), true)
    } else {
        let parts = (0..samples)
            .map(|_| {
                let k = rng.gen_range(1..=n.max(1));
                let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
                Partition::from_labels(&labels)
            })
            .collect();
        (parts, false)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BasicPropsReport {
    pub a_holds: bool,
    pub b_holds: bool,
    pub c_holds: bool,
    pub d_holds: bool,
    pub partitions_checked: usize,
    pub exhaustive: bool,
    pub colorings_checked: usize,
    pub violations: Vec<String>,
}

impl BasicPropsReport {
    pub fn passed(&self) -> bool {
        self.a_holds && self.b_holds && self.c_holds && self.d_holds
    }
}

const EXHAUSTIVE_LIMIT: u128 = 10_000;

/// Checks the four basic facts about `ℓ_w` for `w: B → C` by recomputing
/// everything from morphism sets rather than class indices:
/// (a) `ℓ_w⁻¹(w·g/∼) = g/∼`; (b) nonempty preimages of classes are classes;
/// (c) pullbacks of partitions are partitions, agreeing with the indexed
/// computation; (d) `Λ` refines `ℓ_w⁻¹(Π(χ))` iff `Λ`-equivalent classes get
/// equal `χ`-colours after `w`.
pub fn check_basic_props<C: Category>(cat: &C, a: ObjId, w: &C::Mor, seed: u64) -> Result<BasicPropsReport> {
    let (b, c) = (cat.dom(w), cat.cod(w));
    let from = subobjects(cat, a, b)?;
    let to = subobjects(cat, a, c)?;
    let hom_ab = cat.hom(a, b);
    let hom_ac = cat.hom(a, c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = BasicPropsReport {
        a_holds: true,
        b_holds: true,
        c_holds: true,
        d_holds: true,
        ..Default::default()
    };
    let preimage = |class: &[C::Mor]| -> Vec<C::Mor> {
        hom_ab
            .iter()
            .filter(|g| class.contains(&cat.compose(w, g)))
            .cloned()
            .collect()
    };
    let sorted = |mut v: Vec<C::Mor>| {
        v.sort();
        v
    };

    for g in hom_ab.iter() {
        let wg = cat.compose(w, g);
        let wg_class = &to.classes()[to.class_of(&wg).expect("w·g in hom(A,C)")];
        let own = &from.classes()[from.class_of(g).expect("g in hom(A,B)")];
        if sorted(preimage(wg_class)) != sorted(own.clone()) {
            r.a_holds = false;
            r.violations.push(format!("(a) fails at g = {}", cat.morphism_name(g)));
        }
    }
    for f in hom_ac.iter() {
        let class = &to.classes()[to.class_of(f).expect("f in hom(A,C)")];
        let pre = preimage(class);
        if let Some(g) = pre.first() {
            let own = &from.classes()[from.class_of(g).expect("g in hom(A,B)")];
            if sorted(pre.clone()) != sorted(own.clone()) {
                r.b_holds = false;
                r.violations.push(format!("(b) fails at f = {}", cat.morphism_name(f)));
            }
        }
    }

    let image = class_image(cat, w, &from, &to);
    let (pis, exhaustive) = partitions_to_check(to.len(), EXHAUSTIVE_LIMIT, 200, &mut rng);
    r.exhaustive = exhaustive;
    for pi in &pis {
        r.partitions_checked += 1;
        let indexed = pullback_by_image(&image, pi, to.len())?;
        if pullback_by_sets(cat, w, &from, &to, pi).as_ref() != Some(&indexed) {
            r.c_holds = false;
            r.violations.push(format!("(c) fails at Π = {pi}"));
        }
    }

    let (lambdas, _) = partitions_to_check(from.len(), EXHAUSTIVE_LIMIT, 200, &mut rng);
    for lambda in &lambdas {
        for _ in 0..8 {
            let k = rng.gen_range(1..=4usize);
            let chi: Vec<usize> = (0..to.len()).map(|_| rng.gen_range(0..k)).collect();
            r.colorings_checked += 1;
            let pulled = pullback_by_image(&image, &Partition::from_labels(&chi), to.len())?;
            let refines = lambda.is_finer_than(&pulled);
            let compatible = (0..from.len()).all(|x| {
                (0..from.len()).all(|y| {
                    !lambda.same_block(x, y) || chi[image[x] as usize] == chi[image[y] as usize]
                })
            });
            if refines != compatible {
                r.d_holds = false;
                r.violations.push(format!("(d) fails at Λ = {lambda}, χ = {chi:?}"));
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::structures::{StructCategory, StructClass, Structure};

    #[test]
    fn standing_example_classes() {
        let e = corpus::category_e();
        let (a, b) = (e.object("A").unwrap(), e.object("B").unwrap());
        let s = subobjects(&e, a, b).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.classes().iter().all(|c| c.len() == 1));
        let bb = subobjects(&e, b, b).unwrap();
        assert_eq!(bb.len(), 1);
        assert_eq!(bb.classes()[0].len(), 2);
    }

    #[test]
    fn edges_of_triangle() {
        let g = StructCategory::universe(StructClass::Graph, 3).unwrap();
        let k2 = g.find(&Structure::complete_graph(2)).unwrap();
        let k3 = g.find(&Structure::complete_graph(3)).unwrap();
        let s = subobjects(&g, k2, k3).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.classes().iter().all(|c| c.len() == 2));
    }

    #[test]
    fn rejects_non_mono() {
        let cat = crate::category::ConcreteBuilder::new()
            .object("X", 1)
            .object("Y", 2)
            .object("Z", 1)
            .map("a", "X", "Y", &[0])
            .map("b", "X", "Y", &[1])
            .map("c", "Y", "Z", &[0, 0])
            .map("ca", "X", "Z", &[0])
            .build()
            .unwrap();
        assert!(matches!(subobjects(&cat, 0, 1), Err(Error::NotMono(_))));
    }

    #[test]
    fn swap_pullbacks() {
        let e = corpus::category_e();
        let (a, b) = (e.object("A").unwrap(), e.object("B").unwrap());
        let sigma = e.morphism_id("σ").unwrap();
        assert!(pullback(&e, a, &sigma, &Partition::discrete(2)).unwrap().is_discrete());
        assert!(pullback(&e, a, &sigma, &Partition::trivial(2)).unwrap().is_trivial());
        let r = check_basic_props(&e, a, &sigma, 1).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        let _ = b;
    }

    #[test]
    fn chain_pullback() {
        let cat = StructCategory::universe(StructClass::Linord, 4).unwrap();
        let c2 = cat.find(&Structure::chain(StructClass::Linord, 2)).unwrap();
        let c3 = cat.find(&Structure::chain(StructClass::Linord, 3)).unwrap();
        let c4 = cat.find(&Structure::chain(StructClass::Linord, 4)).unwrap();
        let w = cat
            .hom(c3, c4)
            .iter()
            .find(|w| &*w.map == [0, 1, 3])
            .unwrap()
            .clone();
        let to = subobjects(&cat, c2, c4).unwrap();
        let labels: Vec<usize> = (0..to.len())
            .map(|i| to.representative(i).map.contains(&3) as usize)
            .collect();
        let pi = Partition::from_labels(&labels);
        let pulled = pullback(&cat, c2, &w, &pi).unwrap();
        let from = subobjects(&cat, c2, c3).unwrap();
        let expected: Vec<usize> = (0..from.len())
            .map(|i| from.representative(i).map.contains(&2) as usize)
            .collect();
        assert_eq!(pulled, Partition::from_labels(&expected));
        assert_eq!(pulled.block_count(), 2);
    }
}
