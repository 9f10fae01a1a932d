use serde::Serialize;

use super::{arrow_instance, ArrowKind, Score};
use crate::category::{Category, ObjId};
use crate::error::{Error, Result};
use crate::extended::ExtNat;
use crate::par::SearchOptions;
use crate::partition::Partition;
use crate::structures::OracleDegree;
use crate::subobj::subobjects;

/// A coloring of the colored set over `C` under which every `w: B → C`
/// sees at least `colors` colors.
#[derive(Clone, Debug, Serialize)]
pub struct Forcing {
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "C")]
    pub c: String,
    pub coloring: Partition,
    pub colors: usize,
}

/// Outcome for one `(B, k)`: the least `t` any candidate `C` achieves.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeWitness {
    #[serde(rename = "B")]
    pub b: String,
    pub k: usize,
    pub t: Option<usize>,
    #[serde(rename = "C")]
    pub c: Option<String>,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleCrossRef {
    pub oracle: OracleDegree,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeEstimate {
    pub kind: ArrowKind,
    pub object: String,
    pub value: Option<ExtNat>,
    pub lower_bound: ExtNat,
    pub upper_bound: ExtNat,
    pub exact: bool,
    pub scope: String,
    pub k: usize,
    pub witnesses: Vec<DegreeWitness>,
    pub certificate: Option<Forcing>,
    pub oracle: Option<OracleCrossRef>,
}

fn colored_len<C: Category>(cat: &C, a: ObjId, c: ObjId, kind: ArrowKind) -> Result<usize> {
    Ok(match kind {
        ArrowKind::Structural => subobjects(cat, a, c)?.len(),
        ArrowKind::Embedding => cat.hom(a, c).len(),
    })
}

/// `max_C |(C choose A)|` (or `max_C |hom(A, C)|`): with this many colors
/// every coloring pattern on any single `C` is available.
pub fn saturation_k<C: Category>(cat: &C, a: ObjId, kind: ArrowKind) -> Result<usize> {
    let mut k = 1;
    for c in cat.upset(a) {
        k = k.max(colored_len(cat, a, c, kind)?);
    }
    Ok(k)
}

/// The largest, over colorings of the colored set over `C` with at most `k`
/// colors, of the fewest colors a single `w: B → C` sees. Returns it with
/// the first coloring attaining it.
#[allow(clippy::too_many_arguments)]
pub fn forcing_number<C: Category>(
    cat: &C,
    c: ObjId,
    b: ObjId,
    a: ObjId,
    kind: ArrowKind,
    k: usize,
    opts: &SearchOptions,
) -> Result<(usize, Partition)> {
    if !cat.reaches(b, c) || !cat.reaches(a, b) {
        return Err(Error::invalid(format!(
            "no path {} → {} → {}",
            cat.object_name(a),
            cat.object_name(b),
            cat.object_name(c)
        )));
    }
    let inst = arrow_instance(cat, c, b, a, kind, k.max(1))?;
    let sweep = inst.sweep(&Score::Colors, u32::MAX - 1, opts)?;
    let worst = sweep.worst.expect("at least one coloring");
    Ok((worst.cost as usize, worst.coloring))
}

/// Exact degree of `A` in a finite category: the largest over `B ∈ ↑A` of
/// the least over `C ∈ ↑B` of the forcing number. All `k` are covered by
/// `k = saturation_k` unless `k` is given.
pub fn degree_exact_finite<C: Category>(
    cat: &C,
    a: ObjId,
    kind: ArrowKind,
    k: Option<usize>,
    opts: &SearchOptions,
) -> Result<DegreeEstimate> {
    let k = match k {
        Some(k) => k,
        None => saturation_k(cat, a, kind)?,
    };
    let mut witnesses = Vec::new();
    let mut best: Option<(usize, Forcing)> = None;
    for b in cat.upset(a) {
        let mut least: Option<(usize, ObjId, Partition)> = None;
        for c in cat.upset(b) {
            let (t, coloring) = forcing_number(cat, c, b, a, kind, k, opts)?;
            if least.as_ref().is_none_or(|(cur, _, _)| t < *cur) {
                least = Some((t, c, coloring));
            }
        }
        let (t, c, coloring) = least.expect("B ∈ ↑B");
        witnesses.push(DegreeWitness {
            b: cat.object_name(b),
            k,
            t: Some(t),
            c: Some(cat.object_name(c)),
            failure: None,
        });
        if best.as_ref().is_none_or(|(cur, _)| t > *cur) {
            best = Some((
                t,
                Forcing {
                    b: cat.object_name(b),
                    c: cat.object_name(c),
                    coloring,
                    colors: t,
                },
            ));
        }
    }
    let (t, cert) = best.expect("A ∈ ↑A");
    let value = ExtNat::Fin(t as u64);
    Ok(DegreeEstimate {
        kind,
        object: cat.object_name(a),
        value: Some(value),
        lower_bound: value,
        upper_bound: value,
        exact: true,
        scope: "exact on finite category".into(),
        k,
        witnesses,
        certificate: Some(cert),
        oracle: None,
    })
}

/// Degree evidence inside a truncated universe: for every `B` and every
/// `k ≤ k_max`, the least `t` achieved by a candidate `C`. The upper bound
/// only speaks for the listed `B` and `k`; no lower bound beyond 1 is
/// claimed.
#[allow(clippy::too_many_arguments)]
pub fn degree_bounds_universe<C: Category>(
    cat: &C,
    a: ObjId,
    kind: ArrowKind,
    b_range: &[ObjId],
    c_range: &[ObjId],
    k_max: usize,
    scope: &str,
    oracle: Option<OracleDegree>,
    opts: &SearchOptions,
) -> Result<DegreeEstimate> {
    let mut witnesses = Vec::new();
    let mut upper = 1usize;
    let mut cert: Option<Forcing> = None;
    for &b in b_range.iter().filter(|&&b| cat.reaches(a, b)) {
        for k in 1..=k_max.max(1) {
            let mut least: Option<(usize, ObjId, Partition)> = None;
            let mut skipped = 0;
            for &c in c_range.iter().filter(|&&c| cat.reaches(b, c)) {
                match forcing_number(cat, c, b, a, kind, k, opts) {
                    Ok((t, coloring)) => {
                        if least.as_ref().is_none_or(|(cur, _, _)| t < *cur) {
                            least = Some((t, c, coloring));
                        }
                    }
                    Err(Error::Budget { .. }) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
            let skipped_note = (skipped > 0).then(|| format!("{skipped} candidates skipped over budget"));
            match least {
                Some((t, c, coloring)) => {
                    let failure = match (t > 1, &skipped_note) {
                        (true, Some(note)) => Some(format!("t = {} fails for every checked C in scope; {note}", t - 1)),
                        (true, None) => Some(format!("t = {} fails for every C in scope", t - 1)),
                        (false, note) => note.clone(),
                    };
                    witnesses.push(DegreeWitness {
                        b: cat.object_name(b),
                        k,
                        t: Some(t),
                        c: Some(cat.object_name(c)),
                        failure,
                    });
                    if t > upper || cert.is_none() {
                        upper = upper.max(t);
                        cert = Some(Forcing {
                            b: cat.object_name(b),
                            c: cat.object_name(c),
                            coloring,
                            colors: t,
                        });
                    }
                }
                None => witnesses.push(DegreeWitness {
                    b: cat.object_name(b),
                    k,
                    t: None,
                    c: None,
                    failure: Some(skipped_note.unwrap_or_else(|| "no candidate C in scope".into())),
                }),
            }
        }
    }
    let upper = ExtNat::Fin(upper as u64);
    let oracle = oracle.map(|o| OracleCrossRef {
        agrees: o.value == upper,
        oracle: o,
    });
    Ok(DegreeEstimate {
        kind,
        object: cat.object_name(a),
        value: None,
        lower_bound: ExtNat::Fin(1),
        upper_bound: upper,
        exact: false,
        scope: format!("{scope}, k ≤ {k_max}"),
        k: k_max,
        witnesses,
        certificate: cert,
        oracle,
    })
}
