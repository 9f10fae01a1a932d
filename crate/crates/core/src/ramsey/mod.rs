//! Arrow relations, Ramsey degrees and essential partitions.
//!
//! Colorings are quantified up to relabeling of colors: whether `w` sees at
//! most `t` colors depends only on the partition a coloring induces, so a
//! sweep over partitions into at most `k` blocks decides the same question
//! as a sweep over all `k^N` colorings.

mod degree;
mod essential;
mod laws;
mod sweep;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::category::{Category, ObjId};
use crate::error::{Error, Result};
use crate::par::SearchOptions;
use crate::partition::Partition;
use crate::subobj::{class_image, hom_image, subobjects};

pub use degree::{
    degree_bounds_universe, degree_exact_finite, forcing_number, saturation_k, DegreeEstimate, DegreeWitness,
    Forcing, OracleCrossRef,
};
pub use essential::{
    discrepancy_probe, essential_check, essential_min, tensor_essential_check, DiscrepancyObject,
    DiscrepancyReport, DiscrepancyRow, EssentialMin, EssentialMode, EssentialVerdict, Refutation, TensorReport,
    TensorSide,
};
pub use laws::{
    degree_law_suite, CategoryDegrees, DegreeLawReport, MonotonicityCase, ObjectDegrees, ProductLaw,
};

pub(crate) use sweep::{Instance, Score};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrowKind {
    /// Colors subobjects `(C choose A)`.
    Structural,
    /// Colors embeddings `hom(A, C)`.
    Embedding,
}

impl fmt::Display for ArrowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArrowKind::Structural => "structural",
            ArrowKind::Embedding => "embedding",
        })
    }
}

impl FromStr for ArrowKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "structural" => Ok(ArrowKind::Structural),
            "embedding" => Ok(ArrowKind::Embedding),
            _ => Err(Error::invalid(format!("unknown arrow kind `{s}`"))),
        }
    }
}

/// The colored set over `C` and the image of each `w ∈ hom(B, C)` in it.
pub(crate) fn arrow_instance<C: Category>(
    cat: &C,
    c: ObjId,
    b: ObjId,
    a: ObjId,
    kind: ArrowKind,
    k: usize,
) -> Result<Instance> {
    let ws = cat.hom(b, c);
    let id = cat.identity(c);
    let auts: Vec<C::Mor> = cat.aut(c).into_iter().filter(|s| *s != id).collect();
    let (ground, images, symmetries) = match kind {
        ArrowKind::Structural => {
            let from = subobjects(cat, a, b)?;
            let to = subobjects(cat, a, c)?;
            let images = ws.iter().map(|w| class_image(cat, w, &from, &to)).collect();
            let syms = auts.iter().map(|s| class_image(cat, s, &to, &to)).collect();
            (to.len(), images, syms)
        }
        ArrowKind::Embedding => {
            if !cat.all_mono() {
                return Err(Error::NotMono("arrow checks need mono morphisms".into()));
            }
            let images = ws.iter().map(|w| hom_image(cat, w, a)).collect();
            let syms = auts.iter().map(|s| hom_image(cat, s, a)).collect();
            (cat.hom(a, c).len(), images, syms)
        }
    };
    Ok(Instance {
        ground,
        max_blocks: k.min(ground),
        images,
        symmetries,
    })
}

fn require_path<C: Category>(cat: &C, from: ObjId, to: ObjId) -> Result<()> {
    if cat.reaches(from, to) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{} does not map into {}",
            cat.object_name(from),
            cat.object_name(to)
        )))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ArrowQuery {
    #[serde(rename = "C")]
    pub c: String,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "A")]
    pub a: String,
    pub k: usize,
    pub t: usize,
    pub kind: ArrowKind,
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub coloring: Partition,
    /// Fewest colors any `w` sees.
    pub min_colors: usize,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WorstColoring {
    pub coloring: Partition,
    pub colors: usize,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ArrowResult {
    pub query: ArrowQuery,
    pub holds: bool,
    pub colored_set_size: usize,
    pub witness_candidates: usize,
    pub colorings_total: u128,
    pub colorings_examined: u64,
    pub colorings_pruned: u64,
    pub counterexample: Option<Counterexample>,
    pub worst_coloring: Option<WorstColoring>,
}

/// Fewest colors of `coloring` that a single `w ∈ hom(B, C)` sees, and the
/// first such `w`. Works from the composites `w·g` directly rather than
/// from precomputed images.
pub fn min_colors_seen<C: Category>(
    cat: &C,
    c: ObjId,
    b: ObjId,
    a: ObjId,
    kind: ArrowKind,
    coloring: &Partition,
) -> Result<(usize, Option<C::Mor>)> {
    let colored: Vec<Vec<C::Mor>> = match kind {
        ArrowKind::Structural => subobjects(cat, a, c)?.classes().to_vec(),
        ArrowKind::Embedding => cat.hom(a, c).iter().map(|f| vec![f.clone()]).collect(),
    };
    if coloring.ground_size() != colored.len() {
        return Err(Error::GroundMismatch(coloring.ground_size(), colored.len()));
    }
    let color: HashMap<&C::Mor, usize> = colored
        .iter()
        .enumerate()
        .flat_map(|(i, class)| class.iter().map(move |f| (f, coloring.block_of(i))))
        .collect();
    let mut best: Option<(usize, C::Mor)> = None;
    for w in cat.hom(b, c).iter() {
        let mut seen: Vec<usize> = cat.hom(a, b).iter().map(|g| color[&cat.compose(w, g)]).collect();
        seen.sort_unstable();
        seen.dedup();
        if best.as_ref().is_none_or(|(n, _)| seen.len() < *n) {
            best = Some((seen.len(), w.clone()));
        }
    }
    Ok(match best {
        Some((n, w)) => (n, Some(w)),
        None => (usize::MAX, None),
    })
}

/// Decides `C → (B)^A_{k,t}` by sweeping all colorings with at most `k`
/// colors.
#[allow(clippy::too_many_arguments)]
pub fn arrow_check<C: Category>(
    cat: &C,
    c: ObjId,
    b: ObjId,
    a: ObjId,
    k: usize,
    t: usize,
    kind: ArrowKind,
    opts: &SearchOptions,
) -> Result<ArrowResult> {
    if k == 0 || t == 0 {
        return Err(Error::invalid("k and t must be positive"));
    }
    require_path(cat, a, b)?;
    require_path(cat, b, c)?;
    let inst = arrow_instance(cat, c, b, a, kind, k)?;
    let threshold = t.min(u32::MAX as usize - 1) as u32;
    let sweep = inst.sweep(&Score::Colors, threshold, opts)?;
    let ws = cat.hom(b, c);
    let counterexample = match sweep.failure {
        Some(found) => {
            let (seen, _) = min_colors_seen(cat, c, b, a, kind, &found.coloring)?;
            let min_colors = if found.cost == u32::MAX { usize::MAX } else { found.cost as usize };
            Some(Counterexample {
                verified: seen > t && seen == min_colors,
                coloring: found.coloring,
                min_colors,
            })
        }
        None => None,
    };
    let worst_coloring = sweep.worst.map(|found| WorstColoring {
        witness: found.witness.map_or_else(String::new, |i| cat.morphism_name(&ws[i])),
        colors: found.cost as usize,
        coloring: found.coloring,
    });
    Ok(ArrowResult {
        query: ArrowQuery {
            c: cat.object_name(c),
            b: cat.object_name(b),
            a: cat.object_name(a),
            k,
            t,
            kind,
        },
        holds: counterexample.is_none(),
        colored_set_size: inst.ground,
        witness_candidates: ws.len(),
        colorings_total: sweep.total,
        colorings_examined: sweep.examined,
        colorings_pruned: sweep.pruned,
        counterexample,
        worst_coloring,
    })
}

/// Draws `samples` random colorings with at most `k` colors and checks that
/// each has a `w` seeing at most `t` colors. Returns the first coloring that
/// does not.
#[allow(clippy::too_many_arguments)]
pub fn spot_check_holds<C: Category>(
    cat: &C,
    c: ObjId,
    b: ObjId,
    a: ObjId,
    k: usize,
    t: usize,
    kind: ArrowKind,
    samples: usize,
    seed: u64,
) -> Result<Option<Partition>> {
    let inst = arrow_instance(cat, c, b, a, kind, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let labels: Vec<usize> = (0..inst.ground).map(|_| rng.gen_range(0..k)).collect();
        let coloring = Partition::from_labels(&labels);
        if min_colors_seen(cat, c, b, a, kind, &coloring)?.0 > t {
            return Ok(Some(coloring));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateVerdict {
    #[serde(rename = "C")]
    pub c: String,
    /// `holds`, `fails`, or `skipped` when the sweep exceeds its budget.
    pub status: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessResult {
    pub found: Option<String>,
    pub checked: Vec<CandidateVerdict>,
    pub scope: String,
}

/// The first candidate `C`, in the given order, with `C → (B)^A_{k,t}`.
/// Candidates not reachable from `B` are passed over silently.
#[allow(clippy::too_many_arguments)]
pub fn witness_search<C: Category>(
    cat: &C,
    b: ObjId,
    a: ObjId,
    k: usize,
    t: usize,
    kind: ArrowKind,
    candidates: &[ObjId],
    scope: &str,
    opts: &SearchOptions,
) -> Result<WitnessResult> {
    require_path(cat, a, b)?;
    let mut checked = Vec::new();
    let mut skipped = 0;
    for &c in candidates {
        if !cat.reaches(b, c) {
            continue;
        }
        let status = match arrow_check(cat, c, b, a, k, t, kind, opts) {
            Ok(r) if r.holds => "holds",
            Ok(_) => "fails",
            Err(Error::Budget { .. }) => {
                skipped += 1;
                "skipped"
            }
            Err(e) => return Err(e),
        };
        checked.push(CandidateVerdict {
            c: cat.object_name(c),
            status,
        });
        if status == "holds" {
            return Ok(WitnessResult {
                found: Some(cat.object_name(c)),
                checked,
                scope: scope.to_string(),
            });
        }
    }
    let scope = if skipped > 0 {
        format!("{scope}; {skipped} candidates skipped over budget")
    } else {
        scope.to_string()
    };
    Ok(WitnessResult {
        found: None,
        checked,
        scope,
    })
}
