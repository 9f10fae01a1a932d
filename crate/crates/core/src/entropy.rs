//! Ramsey entropy: `φ(A) = sup_{B ∈ ↑A} min_{Λ essential} H(Λ)` and
//! `r̃(X) = inf_{A ∈ ↑X} φ(A)`, computed by essential-partition search on
//! finite categories or from closed-form degrees on structure classes.

use serde::Serialize;

use crate::category::{amalgamation, Category, FinCategory, ObjId, Product, StateSpace};
use crate::error::{Error, Result};
use crate::extended::{ExtNat, ExtReal};
use crate::par::SearchOptions;
use crate::partition::{EntropyKind, Partition, PartitionEntropy};
use crate::ramsey::{degree_exact_finite, essential_min, saturation_k, ArrowKind, EssentialMode};
use crate::structures::{count_embeddings, degree_oracle, universe, OracleDegree, Structure};

pub const ORACLE_SCOPE_NOTE: &str = "upper bound of the true infimum; stabilization not guaranteed by the tool";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum EntropyScope {
    Finite,
    Oracle { truncation: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct EntropyConfig {
    pub h: EntropyKind,
    /// `None` grades each `A` at its saturation `k`, where graded and
    /// all-`k` readings coincide.
    pub mode: Option<EssentialMode>,
    pub scope: EntropyScope,
}

impl EntropyConfig {
    pub fn finite(h: EntropyKind) -> Self {
        EntropyConfig {
            h,
            mode: None,
            scope: EntropyScope::Finite,
        }
    }

    fn mode_for<C: Category>(&self, cat: &C, a: ObjId) -> Result<EssentialMode> {
        match self.mode {
            Some(m) => Ok(m),
            None => Ok(EssentialMode::Graded(saturation_k(cat, a, ArrowKind::Structural)?)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiTerm {
    #[serde(rename = "B")]
    pub b: String,
    pub min_entropy: ExtReal,
    pub argmin: Option<Partition>,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiReport {
    pub object: String,
    pub value: ExtReal,
    pub entropy: EntropyKind,
    pub route: &'static str,
    pub scope: String,
    pub mode: Option<EssentialMode>,
    pub terms: Vec<PhiTerm>,
    pub oracle: Option<OracleDegree>,
}

/// `φ(A)` on a finite category by essential-partition search, each `B`
/// searched with witnesses from `↑B`.
pub fn phi<C: Category>(cat: &C, a: ObjId, cfg: &EntropyConfig, opts: &SearchOptions) -> Result<PhiReport> {
    let mode = cfg.mode_for(cat, a)?;
    let mut value = ExtReal::ZERO;
    let mut terms = Vec::new();
    for b in cat.upset(a) {
        let m = essential_min(cat, a, b, mode, &cat.upset(b), &cfg.h, opts)?;
        value = value.max(m.min_entropy);
        terms.push(PhiTerm {
            b: cat.object_name(b),
            min_entropy: m.min_entropy,
            argmin: m.argmin_entropy,
            witness: m.entropy_witness,
        });
    }
    Ok(PhiReport {
        object: cat.object_name(a),
        value,
        entropy: cfg.h,
        route: "essential-search",
        scope: "finite".into(),
        mode: Some(mode),
        terms,
        oracle: None,
    })
}

fn require_boltzmann(h: EntropyKind) -> Result<()> {
    if h == EntropyKind::Boltzmann {
        Ok(())
    } else {
        Err(Error::Unsupported(
            "the oracle route gives φ = log t̃, which holds for the Boltzmann entropy only".into(),
        ))
    }
}

/// `φ(A) = log₂ t̃(A)` from the closed-form degree.
pub fn phi_oracle(a: &Structure, h: EntropyKind) -> Result<PhiReport> {
    require_boltzmann(h)?;
    let oracle = degree_oracle(a)?;
    Ok(PhiReport {
        object: a.label(),
        value: oracle.value.log2(),
        entropy: h,
        route: "oracle",
        scope: format!("closed-form degree for {}", a.class()),
        mode: None,
        terms: Vec::new(),
        oracle: Some(oracle),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ObjectEntropy {
    pub object: String,
    pub phi: ExtReal,
    pub r: ExtReal,
    /// First `A ∈ ↑X` attaining `r`.
    pub argmin: String,
}

/// `φ` and `r̃` for every object of a finite category.
pub fn entropy_table<C: Category>(cat: &C, cfg: &EntropyConfig, opts: &SearchOptions) -> Result<Vec<ObjectEntropy>> {
    let phis: Vec<ExtReal> = cat
        .objects()
        .map(|a| phi(cat, a, cfg, opts).map(|p| p.value))
        .collect::<Result<_>>()?;
    Ok(cat
        .objects()
        .map(|x| {
            let up = cat.upset(x);
            let best = up
                .iter()
                .copied()
                .reduce(|m, a| if phis[a].approx_le(phis[m]) && !phis[a].approx_eq(phis[m]) { a } else { m })
                .expect("X ∈ ↑X");
            debug_assert!(up.iter().all(|&a| phis[best].approx_le(phis[a])));
            ObjectEntropy {
                object: cat.object_name(x),
                phi: phis[x],
                r: phis[best],
                argmin: cat.object_name(best),
            }
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct RamseyEntropyReport {
    pub object: String,
    pub value: ExtReal,
    pub argmin: String,
    pub entropy: EntropyKind,
    pub route: &'static str,
    pub scope: String,
    pub phi: Vec<PhiReport>,
}

/// `r̃(X)` on a finite category: the least `φ(A)` over `A ∈ ↑X`.
pub fn ramsey_entropy<C: Category>(
    cat: &C,
    x: ObjId,
    cfg: &EntropyConfig,
    opts: &SearchOptions,
) -> Result<RamseyEntropyReport> {
    let phis: Vec<PhiReport> = cat
        .upset(x)
        .into_iter()
        .map(|a| phi(cat, a, cfg, opts))
        .collect::<Result<_>>()?;
    let best = phis
        .iter()
        .reduce(|m, p| if p.value.approx_le(m.value) && !p.value.approx_eq(m.value) { p } else { m })
        .expect("X ∈ ↑X");
    Ok(RamseyEntropyReport {
        object: cat.object_name(x),
        value: best.value,
        argmin: best.object.clone(),
        entropy: cfg.h,
        route: "essential-search",
        scope: "finite".into(),
        phi: phis.clone(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleEntropyReport {
    pub object: String,
    pub value: ExtReal,
    pub argmin: String,
    pub degree: ExtNat,
    pub candidates: usize,
    pub route: &'static str,
    pub scope: String,
}

/// `r̃(X)` over the members of a truncated universe that `X` embeds into,
/// from closed-form degrees.
pub fn ramsey_entropy_oracle(x: &Structure, truncation: usize, h: EntropyKind) -> Result<OracleEntropyReport> {
    require_boltzmann(h)?;
    let mut best: Option<(ExtNat, String)> = None;
    let mut candidates = 0;
    for s in universe(x.class(), truncation)? {
        if count_embeddings(x, &s)? == 0 {
            continue;
        }
        candidates += 1;
        let d = degree_oracle(&s)?.value;
        if best.as_ref().is_none_or(|(cur, _)| d < *cur) {
            best = Some((d, s.label()));
        }
    }
    let (degree, argmin) = best.ok_or_else(|| Error::invalid(format!("{x} exceeds the truncation {truncation}")))?;
    Ok(OracleEntropyReport {
        object: x.label(),
        value: degree.log2(),
        argmin,
        degree,
        candidates,
        route: "oracle",
        scope: format!("{} ≤ {truncation}: {ORACLE_SCOPE_NOTE}", x.class()),
    })
}

/// `r̃((X₁, X₂))` in the product of two structure classes, with product
/// degrees `t̃(A₁)·t̃(A₂)` over pairs from both truncated upsets.
pub fn ramsey_entropy_oracle_product(
    x1: &Structure,
    x2: &Structure,
    truncation: usize,
    h: EntropyKind,
) -> Result<OracleEntropyReport> {
    require_boltzmann(h)?;
    let upset = |x: &Structure| -> Result<Vec<(ExtNat, String)>> {
        let mut out = Vec::new();
        for s in universe(x.class(), truncation)? {
            if count_embeddings(x, &s)? > 0 {
                out.push((degree_oracle(&s)?.value, s.label()));
            }
        }
        Ok(out)
    };
    let (u1, u2) = (upset(x1)?, upset(x2)?);
    let mut best: Option<(ExtNat, String)> = None;
    for (d1, n1) in &u1 {
        for (d2, n2) in &u2 {
            let d = *d1 * *d2;
            if best.as_ref().is_none_or(|(cur, _)| d < *cur) {
                best = Some((d, format!("({n1},{n2})")));
            }
        }
    }
    let (degree, argmin) = best.ok_or_else(|| Error::invalid("empty truncated upset"))?;
    Ok(OracleEntropyReport {
        object: format!("({},{})", x1.label(), x2.label()),
        value: degree.log2(),
        argmin,
        degree,
        candidates: u1.len() * u2.len(),
        route: "oracle-product",
        scope: format!(
            "{} × {} ≤ {truncation}, degrees multiplied across factors: {ORACLE_SCOPE_NOTE}",
            x1.class(),
            x2.class()
        ),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityRow {
    pub category: String,
    pub object: String,
    pub phi_boltzmann: ExtReal,
    pub log_degree: ExtReal,
    pub phi_matches: bool,
    pub r_shannon: ExtReal,
    pub r_boltzmann: ExtReal,
    pub shannon_below: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub rows: Vec<IdentityRow>,
    pub mismatches: usize,
}

/// Per object: Boltzmann `φ` by essential search against `log₂ t̃`, and
/// Shannon `r̃` against Boltzmann `r̃`.
pub fn boltzmann_identity_check(corpus: &[(String, FinCategory)], opts: &SearchOptions) -> Result<IdentityReport> {
    let mut rows = Vec::new();
    for (name, cat) in corpus {
        let bol = entropy_table(cat, &EntropyConfig::finite(EntropyKind::Boltzmann), opts)?;
        let sha = entropy_table(cat, &EntropyConfig::finite(EntropyKind::Shannon), opts)?;
        for a in cat.objects() {
            let t = degree_exact_finite(cat, a, ArrowKind::Structural, None, opts)?;
            let log_degree = t.value.expect("exact").log2();
            rows.push(IdentityRow {
                category: name.clone(),
                object: cat.object_name(a),
                phi_boltzmann: bol[a].phi,
                log_degree,
                phi_matches: bol[a].phi.approx_eq(log_degree),
                r_shannon: sha[a].r,
                r_boltzmann: bol[a].r,
                shannon_below: sha[a].r.approx_le(bol[a].r),
            });
        }
    }
    let mismatches = rows.iter().filter(|r| !r.phi_matches || !r.shannon_below).count();
    Ok(IdentityReport { rows, mismatches })
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremCheck {
    pub theorem: &'static str,
    pub category: String,
    pub subject: String,
    pub holds: bool,
    /// Recorded for reference; does not count as a failure.
    pub informational: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub checks: Vec<TheoremCheck>,
    pub failures: usize,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Recorder {
    category: String,
    checks: Vec<TheoremCheck>,
}

impl Recorder {
    fn push(&mut self, theorem: &'static str, subject: String, holds: bool, detail: String) {
        self.checks.push(TheoremCheck {
            theorem,
            category: self.category.clone(),
            subject,
            holds,
            informational: false,
            detail,
        });
    }

    fn note(&mut self, theorem: &'static str, subject: String, holds: bool, detail: String) {
        self.push(theorem, subject, holds, detail);
        self.checks.last_mut().unwrap().informational = true;
    }
}

fn category_checks<C: Category>(rec: &mut Recorder, cat: &C, opts: &SearchOptions) -> Result<()> {
    let bol = entropy_table(cat, &EntropyConfig::finite(EntropyKind::Boltzmann), opts)?;
    let sha = entropy_table(cat, &EntropyConfig::finite(EntropyKind::Shannon), opts)?;
    let degrees: Vec<ExtNat> = cat
        .objects()
        .map(|a| Ok(degree_exact_finite(cat, a, ArrowKind::Structural, None, opts)?.value.expect("exact")))
        .collect::<Result<_>>()?;
    let emb: Vec<ExtNat> = cat
        .objects()
        .map(|a| Ok(degree_exact_finite(cat, a, ArrowKind::Embedding, None, opts)?.value.expect("exact")))
        .collect::<Result<_>>()?;
    let amalg = amalgamation(cat).holds;
    let name = |x: ObjId| cat.object_name(x);
    for x in cat.objects() {
        for (h, table) in [("boltzmann", &bol), ("shannon", &sha)] {
            let log_t = degrees[x].log2();
            rec.push(
                "log-degree bound",
                format!("{} [{h}]", name(x)),
                table[x].r.approx_le(log_t),
                format!("r = {} ≤ log t̃ = {log_t}", table[x].r),
            );
            let subramsey = cat.upset(x).iter().any(|&a| degrees[a] == ExtNat::Fin(1));
            if subramsey {
                rec.push(
                    "zero on subramsey",
                    format!("{} [{h}]", name(x)),
                    table[x].r.approx_eq(ExtReal::ZERO),
                    format!("r = {}", table[x].r),
                );
            }
            for y in cat.objects() {
                if x != y && cat.reaches(x, y) {
                    rec.push(
                        "monotone along arrows",
                        format!("{} → {} [{h}]", name(x), name(y)),
                        table[x].r.approx_le(table[y].r),
                        format!("{} ≤ {}", table[x].r, table[y].r),
                    );
                }
                if x < y && cat.isomorphism(x, y).is_some() {
                    rec.push(
                        "isomorphism invariance",
                        format!("{} ≅ {} [{h}]", name(x), name(y)),
                        table[x].r.approx_eq(table[y].r),
                        format!("{} = {}", table[x].r, table[y].r),
                    );
                }
            }
        }
        rec.push(
            "shannon below boltzmann",
            name(x),
            sha[x].r.approx_le(bol[x].r),
            format!("{} ≤ {}", sha[x].r, bol[x].r),
        );
        let subramsey = cat.upset(x).iter().any(|&a| degrees[a] == ExtNat::Fin(1));
        if amalg {
            rec.push(
                "subramsey iff zero",
                name(x),
                subramsey == bol[x].r.approx_eq(ExtReal::ZERO),
                format!("subramsey = {subramsey}, r = {}", bol[x].r),
            );
        }
        rec.push(
            "finite all-mono: zero and subramsey",
            name(x),
            subramsey && bol[x].r.approx_eq(ExtReal::ZERO),
            format!("subramsey = {subramsey}, r = {}", bol[x].r),
        );
        for y in cat.objects() {
            if x != y && cat.reaches(x, y) && emb[x] > emb[y] {
                let detail = format!("t = {} > {}, amalgamation = {amalg}", emb[x], emb[y]);
                let subject = format!("{} → {}", name(x), name(y));
                if amalg {
                    rec.push("degree monotone along arrows", subject, false, detail);
                } else {
                    rec.note("degree monotone along arrows", subject, false, detail);
                }
            }
        }
    }
    if amalg {
        let degrees_finite = degrees.iter().all(|d| d.is_finite());
        let entropy_finite = bol.iter().all(|e| e.r.is_finite());
        rec.push(
            "finite degrees iff finite entropy",
            "all objects".into(),
            degrees_finite == entropy_finite,
            format!("degrees finite = {degrees_finite}, entropy finite = {entropy_finite}"),
        );
    }
    Ok(())
}

fn product_checks(
    rec: &mut Recorder,
    left: &FinCategory,
    right: &FinCategory,
    opts: &SearchOptions,
) -> Result<()> {
    let prod = Product::new(left, right);
    for h in [EntropyKind::Boltzmann, EntropyKind::Shannon] {
        let cfg = EntropyConfig::finite(h);
        let (l, r, p) = (
            entropy_table(left, &cfg, opts)?,
            entropy_table(right, &cfg, opts)?,
            entropy_table(&prod, &cfg, opts)?,
        );
        for x in prod.objects() {
            let (i, j) = prod.split(x);
            let sum = l[i].r + r[j].r;
            let subject = format!("{} [{}]", prod.object_name(x), h.name());
            if h == EntropyKind::Boltzmann {
                rec.push("additive on products", subject, p[x].r.approx_eq(sum), format!("{} = {sum}", p[x].r));
            } else {
                rec.push("subadditive on products", subject, p[x].r.approx_le(sum), format!("{} ≤ {sum}", p[x].r));
            }
        }
    }
    Ok(())
}

fn star_checks(rec: &mut Recorder, base: &FinCategory, max_len: usize, opts: &SearchOptions) -> Result<()> {
    let space = StateSpace::new(base, max_len);
    let table = entropy_table(&space, &EntropyConfig::finite(EntropyKind::Boltzmann), opts)?;
    for x in space.objects() {
        for y in space.objects() {
            if let Some(xy) = space.star(x, y) {
                let sum = table[x].r + table[y].r;
                rec.push(
                    "additive on concatenation",
                    format!("{} ⋆ {}", space.object_name(x), space.object_name(y)),
                    table[xy].r.approx_eq(sum),
                    format!("{} = {sum}", table[xy].r),
                );
            }
        }
    }
    Ok(())
}

/// Runs every entropy theorem check on the corpus: per-category checks for
/// both entropies, product checks on `pairs`, and concatenation checks on
/// the state spaces (tuples up to `star_len`) of the categories in `star`.
pub fn entropy_theorem_suite(
    corpus: &[(String, FinCategory)],
    pairs: &[(usize, usize)],
    star: &[usize],
    star_len: usize,
    opts: &SearchOptions,
) -> Result<TheoremReport> {
    let mut checks = Vec::new();
    for (name, cat) in corpus {
        let mut rec = Recorder {
            category: name.clone(),
            checks: Vec::new(),
        };
        category_checks(&mut rec, cat, opts)?;
        checks.append(&mut rec.checks);
    }
    for &(i, j) in pairs {
        let mut rec = Recorder {
            category: format!("{} × {}", corpus[i].0, corpus[j].0),
            checks: Vec::new(),
        };
        product_checks(&mut rec, &corpus[i].1, &corpus[j].1, opts)?;
        checks.append(&mut rec.checks);
    }
    for &i in star {
        let mut rec = Recorder {
            category: format!("state space of {}", corpus[i].0),
            checks: Vec::new(),
        };
        star_checks(&mut rec, &corpus[i].1, star_len, opts)?;
        checks.append(&mut rec.checks);
    }
    let failures = checks.iter().filter(|c| !c.holds && !c.informational).count();
    Ok(TheoremReport { checks, failures })
}
