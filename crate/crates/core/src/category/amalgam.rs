use std::collections::HashSet;

use serde::Serialize;

use super::{Category, ObjId};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmalgamWitness<M> {
    pub d: ObjId,
    pub w: M,
}

/// Finds the first `D` (object order) and `w: C → D` (hom order) with
/// `w · hom(A, C) ⊆ hom(B, D) · f`. `None` means no such pair exists in
/// this category, which may be a truncation of a larger one.
pub fn amalgamate_ext<C: Category>(
    cat: &C,
    a: ObjId,
    b: ObjId,
    c: ObjId,
    f: &C::Mor,
) -> Result<Option<AmalgamWitness<C::Mor>>> {
    if cat.dom(f) != a || cat.cod(f) != b {
        return Err(Error::invalid(format!(
            "`{}` is not a morphism {} → {}",
            cat.morphism_name(f),
            cat.object_name(a),
            cat.object_name(b)
        )));
    }
    let from_a = cat.hom(a, c);
    for d in cat.objects() {
        let through_f: HashSet<C::Mor> = cat.hom(b, d).iter().map(|v| cat.compose(v, f)).collect();
        for w in cat.hom(c, d).iter() {
            if from_a.iter().all(|u| through_f.contains(&cat.compose(w, u))) {
                let found = AmalgamWitness { d, w: w.clone() };
                verify(cat, a, b, c, f, &found)?;
                return Ok(Some(found));
            }
        }
    }
    Ok(None)
}

/// Recomputes the inclusion by brute force over `hom(B, D)`.
fn verify<C: Category>(
    cat: &C,
    a: ObjId,
    b: ObjId,
    c: ObjId,
    f: &C::Mor,
    found: &AmalgamWitness<C::Mor>,
) -> Result<()> {
    let homs_bd = cat.hom(b, found.d);
    for u in cat.hom(a, c).iter() {
        let wu = cat.compose(&found.w, u);
        if !homs_bd.iter().any(|v| cat.compose(v, f) == wu) {
            return Err(Error::invalid(format!(
                "extension witness `{}` fails re-verification",
                cat.morphism_name(&found.w)
            )));
        }
    }
    Ok(())
}
