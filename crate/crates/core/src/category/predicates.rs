use std::collections::HashSet;

use serde::Serialize;

use super::{Category, ObjId};

/// A decided predicate. On failure `witness` names the objects or morphisms
/// that refute it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witnessed {
    pub holds: bool,
    pub witness: Option<Vec<String>>,
}

impl Witnessed {
    fn yes() -> Self {
        Witnessed {
            holds: true,
            witness: None,
        }
    }

    fn no(witness: Vec<String>) -> Self {
        Witnessed {
            holds: false,
            witness: Some(witness),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Predicates {
    pub all_mono: Witnessed,
    pub directed: Witnessed,
    pub amalgamation: Witnessed,
}

impl Predicates {
    pub fn compute<C: Category>(cat: &C) -> Self {
        let all_mono = match first_non_mono(cat) {
            None => Witnessed::yes(),
            Some((f, g, h)) => Witnessed::no(
                [f, g, h].iter().map(|m| cat.morphism_name(m)).collect(),
            ),
        };
        Predicates {
            all_mono,
            directed: directed(cat),
            amalgamation: amalgamation(cat),
        }
    }
}

/// The first `(f, g, h)` with `f·g = f·h` and `g ≠ h`, scanning `f` in
/// object-pair then hom order.
pub fn first_non_mono<C: Category>(cat: &C) -> Option<(C::Mor, C::Mor, C::Mor)> {
    for x in cat.objects() {
        for y in cat.objects() {
            for f in cat.hom(x, y).iter() {
                for w in cat.objects() {
                    let gs = cat.hom(w, x);
                    let mut seen = std::collections::HashMap::new();
                    for g in gs.iter() {
                        if let Some(prev) = seen.insert(cat.compose(f, g), g.clone()) {
                            return Some((f.clone(), prev, g.clone()));
                        }
                    }
                }
            }
        }
    }
    None
}

/// Every pair of objects has a common upper bound.
pub fn directed<C: Category>(cat: &C) -> Witnessed {
    for a in cat.objects() {
        for b in cat.objects() {
            if !cat.objects().any(|c| cat.reaches(a, c) && cat.reaches(b, c)) {
                return Witnessed::no(vec![cat.object_name(a), cat.object_name(b)]);
            }
        }
    }
    Witnessed::yes()
}

/// Every span `B ←f− A −g→ C` closes to a commuting square `h·f = k·g`.
/// The witness on failure is the span `[f, g]`.
pub fn amalgamation<C: Category>(cat: &C) -> Witnessed {
    for a in cat.objects() {
        let out: Vec<C::Mor> = cat
            .objects()
            .flat_map(|b| cat.hom(a, b).iter().cloned().collect::<Vec<_>>())
            .collect();
        for f in &out {
            for g in &out {
                if !closes(cat, f, g) {
                    return Witnessed::no(vec![cat.morphism_name(f), cat.morphism_name(g)]);
                }
            }
        }
    }
    Witnessed::yes()
}

fn closes<C: Category>(cat: &C, f: &C::Mor, g: &C::Mor) -> bool {
    let (b, c) = (cat.cod(f), cat.cod(g));
    cat.objects().any(|d| {
        let left: HashSet<C::Mor> = cat.hom(b, d).iter().map(|h| cat.compose(h, f)).collect();
        !left.is_empty() && cat.hom(c, d).iter().any(|k| left.contains(&cat.compose(k, g)))
    })
}

/// Whether every object reaches some object of `subset`. The witness on
/// failure is the first object that reaches none.
pub fn cofinal<C: Category>(cat: &C, subset: &[ObjId]) -> Witnessed {
    for a in cat.objects() {
        if !subset.iter().any(|&b| cat.reaches(a, b)) {
            return Witnessed::no(vec![cat.object_name(a)]);
        }
    }
    Witnessed::yes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn standing_example() {
        let e = corpus::category_e();
        let p = Predicates::compute(&e);
        assert!(p.all_mono.holds && p.directed.holds && p.amalgamation.holds);
    }

    #[test]
    fn without_swap_no_amalgamation() {
        let e = corpus::category_e_without_swap();
        let p = Predicates::compute(&e);
        assert!(p.all_mono.holds);
        assert_eq!(p.amalgamation.witness, Some(vec!["f1".into(), "f2".into()]));
    }

    #[test]
    fn cofinal_subsets() {
        let e = corpus::category_e();
        let a = e.object_id("A").unwrap();
        let b = e.object_id("B").unwrap();
        let r = cofinal(&e, &[a]);
        assert_eq!(r.witness, Some(vec!["B".into()]));
        assert!(cofinal(&e, &[b]).holds);
    }

    #[test]
    fn non_mono_witness() {
        // Two parallel maps collapsed by a map to a point.
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
        let p = Predicates::compute(&cat);
        assert!(!p.all_mono.holds);
        assert_eq!(p.all_mono.witness, Some(vec!["c".into(), "a".into(), "b".into()]));
    }
}
