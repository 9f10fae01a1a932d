use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use ramseylab::category::{Category, FinCategory, ObjId, Predicates};
use ramseylab::corpus;
use ramseylab::entropy::{
    entropy_table, phi, ramsey_entropy, ramsey_entropy_oracle, ramsey_entropy_oracle_product,
    boltzmann_identity_check, entropy_theorem_suite, EntropyConfig, EntropyScope,
};
use ramseylab::functors::{
    collapse_functor, entropy_nondecreasing_check, functor_properties, identity_functor,
    ordered_graphs_forgetful, validate_functor, FunctorSpec, FunctorTable,
};
use ramseylab::par::SearchOptions;
use ramseylab::partition::{check_entropy_axioms, EntropyKind, Partition};
use ramseylab::ramsey::{
    arrow_check, degree_bounds_universe, degree_exact_finite, discrepancy_probe, essential_check,
    essential_min, degree_law_suite, witness_search, ArrowKind, EssentialMode,
};
use ramseylab::structures::{automorphism_count, degree_oracle, universe, StructCategory, StructClass, Structure};
use ramseylab::subobj::subobjects;
use ramseylab::Error;

use crate::args::{Command, Entropy, Kind, Source, SuitePart};

/// A mistake in how the tool was invoked rather than in its input data.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

pub const PAPER_INTERNAL: &str = "paper-internal";
pub const LITERATURE_ORACLE: &str = "literature oracle";

pub struct Outcome {
    pub result: Value,
    pub provenance: &'static str,
}

fn outcome(result: impl serde::Serialize, provenance: &'static str) -> Result<Outcome> {
    Ok(Outcome {
        result: serde_json::to_value(result)?,
        provenance,
    })
}

impl From<Kind> for ArrowKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Structural => ArrowKind::Structural,
            Kind::Embedding => ArrowKind::Embedding,
        }
    }
}

impl From<Entropy> for EntropyKind {
    fn from(h: Entropy) -> Self {
        match h {
            Entropy::Shannon => EntropyKind::Shannon,
            Entropy::Boltzmann => EntropyKind::Boltzmann,
        }
    }
}

pub fn load_fin(spec: &str) -> Result<FinCategory> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
        return Ok(FinCategory::from_json(&text)?);
    }
    corpus::by_name(spec)
        .ok_or_else(|| Error::Invalid(format!("`{spec}` is neither a file nor a built-in category")).into())
}

fn parse_class(text: &str) -> Result<StructClass> {
    Ok(text.parse::<StructClass>()?)
}

/// A bare number names the chain of that length in ordered classes.
fn parse_structure(class: StructClass, text: &str) -> Result<Structure> {
    if let (Ok(n), StructClass::Linord | StructClass::Poset) = (text.parse::<usize>(), class) {
        return Ok(Structure::chain(class, n));
    }
    Ok(Structure::parse(class, text)?)
}

pub enum Loaded {
    Fin(FinCategory),
    Struct(StructClass, StructCategory),
}

macro_rules! with_cat {
    ($loaded:expr, $c:ident => $body:expr) => {
        match $loaded {
            Loaded::Fin($c) => $body,
            Loaded::Struct(_, $c) => $body,
        }
    };
}

impl Loaded {
    /// Without `--n-max` a structure class yields the category on exactly
    /// the mentioned structures.
    fn from_source(src: &Source, mentioned: &[&str]) -> Result<(Loaded, String)> {
        match (&src.cat, &src.class) {
            (Some(cat), None) => Ok((Loaded::Fin(load_fin(cat)?), format!("finite category {cat}"))),
            (None, Some(class)) => {
                let class = parse_class(class)?;
                match src.n_max {
                    Some(n) => Ok((
                        Loaded::Struct(class, StructCategory::universe(class, n)?),
                        format!("{class} universe up to {n} elements"),
                    )),
                    None => {
                        let mut objects: Vec<Structure> = Vec::new();
                        for text in mentioned {
                            let s = parse_structure(class, text)?;
                            if !objects.iter().any(|o| ramseylab::structures::is_isomorphic(o, &s)) {
                                objects.push(s);
                            }
                        }
                        objects.sort_by_key(|s| s.size());
                        let names: Vec<String> = objects.iter().map(|s| s.label()).collect();
                        Ok((
                            Loaded::Struct(class, StructCategory::new(class, objects)?),
                            format!("{class}s {}", names.join(", ")),
                        ))
                    }
                }
            }
            _ => Err(usage("give exactly one of --cat or --class")),
        }
    }

    fn object(&self, text: &str) -> Result<ObjId> {
        match self {
            Loaded::Fin(c) => Ok(c.object(text)?),
            Loaded::Struct(class, c) => {
                let s = parse_structure(*class, text)?;
                c.find(&s)
                    .ok_or_else(|| Error::Invalid(format!("{s} is not in the universe")).into())
            }
        }
    }
}

fn parse_mode(mode: &str, k: Option<usize>) -> Result<EssentialMode> {
    match (mode, k) {
        ("graded", Some(k)) => Ok(EssentialMode::Graded(k)),
        ("graded", None) => Err(usage("--mode graded needs --k")),
        (m, _) => Ok(m.parse()?),
    }
}

fn parse_blocks(text: &str, ground: usize) -> Result<Partition> {
    let blocks: Vec<Vec<usize>> =
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("partition literal: {e}")))?;
    Ok(Partition::from_blocks(&blocks, ground)?)
}

pub fn execute(cmd: &Command, opts: &SearchOptions) -> Result<Outcome> {
    match cmd {
        Command::ValidateCat { file } => {
            let cat = load_fin(file)?;
            outcome(
                json!({
                    "valid": true,
                    "objects": cat.object_count(),
                    "morphisms": cat.morphism_count(),
                    "predicates": Predicates::compute(&cat),
                }),
                PAPER_INTERNAL,
            )
        }
        Command::Structures { class, n_max } => {
            let class = parse_class(class)?;
            let rows: Vec<Value> = universe(class, *n_max)?
                .iter()
                .map(|s| {
                    json!({
                        "label": s.label(),
                        "size": s.size(),
                        "structure": s,
                        "automorphisms": automorphism_count(s),
                        "degree_oracle": degree_oracle(s).ok(),
                    })
                })
                .collect();
            outcome(
                json!({"class": class, "n_max": n_max, "structures": rows, "scope": format!("{class}s up to {n_max} elements, one per isomorphism type")}),
                LITERATURE_ORACLE,
            )
        }
        Command::Hom { source, a, b } => {
            let (loaded, scope) = Loaded::from_source(source, &[a, b])?;
            let (ia, ib) = (loaded.object(a)?, loaded.object(b)?);
            let names: Vec<String> = with_cat!(&loaded, c => c.hom(ia, ib).iter().map(|f| c.morphism_name(f)).collect());
            outcome(json!({"A": a, "B": b, "count": names.len(), "morphisms": names, "scope": scope}), PAPER_INTERNAL)
        }
        Command::Subobj { source, a, b } => {
            let (loaded, scope) = Loaded::from_source(source, &[a, b])?;
            let (ia, ib) = (loaded.object(a)?, loaded.object(b)?);
            let classes: Vec<Value> = with_cat!(&loaded, c => {
                let set = subobjects(c, ia, ib)?;
                set.classes()
                    .iter()
                    .map(|class| json!({
                        "representative": c.morphism_name(&class[0]),
                        "members": class.iter().map(|f| c.morphism_name(f)).collect::<Vec<_>>(),
                    }))
                    .collect()
            });
            outcome(json!({"A": a, "B": b, "count": classes.len(), "classes": classes, "scope": scope}), PAPER_INTERNAL)
        }
        Command::Arrow { source, c, b, a, k, t, kind } => {
            let (loaded, scope) = Loaded::from_source(source, &[a, b, c])?;
            let (ia, ib, ic) = (loaded.object(a)?, loaded.object(b)?, loaded.object(c)?);
            let r = with_cat!(&loaded, cat => arrow_check(cat, ic, ib, ia, *k, *t, (*kind).into(), opts)?);
            let mut v = serde_json::to_value(r)?;
            v["scope"] = json!(format!("exhaustive over all colourings; {scope}"));
            outcome(v, PAPER_INTERNAL)
        }
        Command::Witness { source, b, a, k, t, kind } => {
            let (loaded, scope) = Loaded::from_source(source, &[a, b])?;
            let (ia, ib) = (loaded.object(a)?, loaded.object(b)?);
            let r = with_cat!(&loaded, cat => {
                let candidates: Vec<ObjId> = cat.objects().collect();
                witness_search(cat, ib, ia, *k, *t, (*kind).into(), &candidates, &scope, opts)?
            });
            outcome(r, PAPER_INTERNAL)
        }
        Command::Degree { source, object, exact, kind, k, k_max } => degree(source, object.as_deref(), *exact, (*kind).into(), *k, *k_max, opts),
        Command::Essential { source, a, b, lambda, mode, k, c, h } => {
            let mode = parse_mode(mode, *k)?;
            let mut mentioned: Vec<&str> = vec![a, b];
            mentioned.extend(c.iter().map(String::as_str));
            let (loaded, scope) = Loaded::from_source(source, &mentioned)?;
            let (ia, ib) = (loaded.object(a)?, loaded.object(b)?);
            let v = with_cat!(&loaded, cat => {
                let c_range: Vec<ObjId> = cat.objects().collect();
                match lambda {
                    Some(text) => {
                        let ground = subobjects(cat, ia, ib)?.len();
                        let lambda = parse_blocks(text, ground)?;
                        serde_json::to_value(essential_check(cat, ia, ib, &lambda, mode, &c_range, opts)?)?
                    }
                    None => {
                        let h: EntropyKind = (*h).into();
                        serde_json::to_value(essential_min(cat, ia, ib, mode, &c_range, &h, opts)?)?
                    }
                }
            });
            let mut v = v;
            v["universe"] = json!(scope);
            outcome(v, PAPER_INTERNAL)
        }
        Command::Entropy { source, object, h, mode, truncation, product } => {
            entropy(source, object.as_deref(), (*h).into(), mode.as_deref(), *truncation, product.as_deref(), opts)
        }
        Command::Suite { corpus, h, part } => suite(corpus.as_deref(), *h, *part, opts),
        Command::Functor { file, builtin, force } => functor(file.as_deref(), builtin.as_deref(), *force, opts),
        Command::Cache { .. } => unreachable!("cache commands are handled before dispatch"),
    }
}

fn degree(
    source: &Source,
    object: Option<&str>,
    exact: bool,
    kind: ArrowKind,
    k: Option<usize>,
    k_max: usize,
    opts: &SearchOptions,
) -> Result<Outcome> {
    let mentioned: Vec<&str> = object.into_iter().collect();
    let (loaded, scope) = Loaded::from_source(source, &mentioned)?;
    match &loaded {
        Loaded::Fin(cat) => {
            let objects: Vec<ObjId> = match object {
                Some(name) => vec![cat.object(name)?],
                None => cat.objects().collect(),
            };
            let degrees = objects
                .into_iter()
                .map(|a| degree_exact_finite(cat, a, kind, k, opts))
                .collect::<ramseylab::Result<Vec<_>>>()?;
            outcome(json!({"degrees": degrees, "universe": scope}), PAPER_INTERNAL)
        }
        Loaded::Struct(class, cat) => {
            if exact {
                bail!(usage("--exact needs a finite category (--cat)"));
            }
            let name = object.ok_or_else(|| usage("--object is required with --class"))?;
            let s = parse_structure(*class, name)?;
            let oracle = degree_oracle(&s).ok();
            if source.n_max.is_none() {
                let oracle = degree_oracle(&s)?;
                return outcome(
                    json!({"object": s.label(), "oracle": oracle, "scope": "closed form for the whole class"}),
                    LITERATURE_ORACLE,
                );
            }
            let a = loaded.object(name)?;
            let all: Vec<ObjId> = cat.objects().collect();
            let oracle = if kind == ArrowKind::Structural { oracle } else { None };
            let est = degree_bounds_universe(cat, a, kind, &all, &all, k_max, &scope, oracle, opts)?;
            outcome(json!({"degrees": [est], "universe": scope}), PAPER_INTERNAL)
        }
    }
}

fn entropy(
    source: &Source,
    object: Option<&str>,
    h: EntropyKind,
    mode: Option<&str>,
    truncation: Option<usize>,
    product: Option<&str>,
    opts: &SearchOptions,
) -> Result<Outcome> {
    let mode = mode.map(|m| parse_mode(m, None)).transpose()?;
    if let Some(class) = &source.class {
        let class = parse_class(class)?;
        let truncation = truncation
            .or(source.n_max)
            .ok_or_else(|| usage("structure classes need --truncation"))?;
        let name = object.ok_or_else(|| usage("--object is required with --class"))?;
        let x = parse_structure(class, name)?;
        let report = match product {
            Some(other) => ramsey_entropy_oracle_product(&x, &parse_structure(class, other)?, truncation, h)?,
            None => ramsey_entropy_oracle(&x, truncation, h)?,
        };
        return outcome(report, LITERATURE_ORACLE);
    }
    let (loaded, _) = Loaded::from_source(source, &[])?;
    let Loaded::Fin(cat) = &loaded else { unreachable!() };
    let cfg = EntropyConfig {
        h,
        mode,
        scope: EntropyScope::Finite,
    };
    let mode_text = mode.map_or_else(|| "graded at saturation".to_string(), |m| m.to_string());
    match object {
        Some(name) => {
            let x = cat.object(name)?;
            let r = ramsey_entropy(cat, x, &cfg, opts)?;
            let p = phi(cat, x, &cfg, opts)?;
            outcome(
                json!({
                    "object": name,
                    "phi": p,
                    "r": r.value,
                    "argmin": r.argmin,
                    "entropy": h,
                    "mode": mode_text,
                    "route": r.route,
                    "scope": r.scope,
                    "upset": r.phi,
                }),
                PAPER_INTERNAL,
            )
        }
        None => outcome(
            json!({
                "objects": entropy_table(cat, &cfg, opts)?,
                "entropy": h,
                "mode": mode_text,
                "route": "essential-search",
                "scope": "finite",
            }),
            PAPER_INTERNAL,
        ),
    }
}

/// Category files in `dir`, sorted by file name and named by stem.
pub fn load_corpus(dir: Option<&Path>) -> Result<Vec<(String, FinCategory)>> {
    let Some(dir) = dir else {
        return Ok(corpus::named_owned());
    };
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading corpus {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.retain(|p| p.is_file() && p.extension().is_some_and(|e| e == "json"));
    files.sort();
    if files.is_empty() {
        return Err(Error::Invalid(format!("no category files in {}", dir.display())).into());
    }
    files
        .iter()
        .map(|p| {
            let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let text = fs::read_to_string(p)?;
            let cat = FinCategory::from_json(&text).with_context(|| format!("in {}", p.display()))?;
            Ok((name, cat))
        })
        .collect()
}

/// Products are checked on pairs whose largest hom-sets multiply to at most
/// this, and state spaces on categories with hom-sets of at most
/// `STATE_SPACE_HOM`, concatenating up to `STATE_SPACE_LEN` objects.
pub const PRODUCT_HOM: usize = 9;
pub const STATE_SPACE_HOM: usize = 2;
pub const STATE_SPACE_LEN: usize = 3;

fn suite(dir: Option<&Path>, h: Option<Entropy>, part: SuitePart, opts: &SearchOptions) -> Result<Outcome> {
    let corpus = load_corpus(dir)?;
    let want = |p: SuitePart| part == SuitePart::All || part == p;
    let mut sections = serde_json::Map::new();
    let mut passed = true;
    if want(SuitePart::Axioms) {
        let kinds: Vec<EntropyKind> = match h {
            Some(h) => vec![h.into()],
            None => vec![EntropyKind::Shannon, EntropyKind::Boltzmann],
        };
        let reports: Vec<_> = kinds.iter().map(|h| check_entropy_axioms(h, 6, 4)).collect();
        passed &= reports.iter().all(|r| r.passed);
        sections.insert("axioms".into(), serde_json::to_value(reports)?);
    }
    let pairs = corpus::product_pairs(&corpus, PRODUCT_HOM);
    if want(SuitePart::DegreeLaws) {
        let r = degree_law_suite(&corpus, &pairs, opts)?;
        passed &= r.passed();
        sections.insert("degree_laws".into(), serde_json::to_value(r)?);
    }
    if want(SuitePart::Theorems) {
        let star = corpus::small_categories(&corpus, STATE_SPACE_HOM);
        let r = entropy_theorem_suite(&corpus, &pairs, &star, STATE_SPACE_LEN, opts)?;
        passed &= r.passed();
        sections.insert("theorems".into(), serde_json::to_value(r)?);
    }
    if want(SuitePart::Identity) {
        let r = boltzmann_identity_check(&corpus, opts)?;
        passed &= r.mismatches == 0;
        sections.insert("identity".into(), serde_json::to_value(r)?);
    }
    if want(SuitePart::Discrepancy) {
        let probes = corpus
            .iter()
            .map(|(name, cat)| Ok(json!({"category": name, "probe": discrepancy_probe(cat, opts)?})))
            .collect::<Result<Vec<_>>>()?;
        sections.insert("discrepancy".into(), Value::Array(probes));
    }
    outcome(
        json!({
            "corpus": corpus.iter().map(|(n, _)| n).collect::<Vec<_>>(),
            "product_pairs": pairs.iter().map(|&(i, j)| [&corpus[i].0, &corpus[j].0]).collect::<Vec<_>>(),
            "passed": passed,
            "sections": sections,
            "scope": format!(
                "exhaustive on the corpus; products with hom-size product ≤ {PRODUCT_HOM}; state spaces of categories with hom-sets ≤ {STATE_SPACE_HOM}, tuples ≤ {STATE_SPACE_LEN}"
            ),
        }),
        PAPER_INTERNAL,
    )
}

pub fn read_functor_spec(file: &Path) -> Result<(FunctorSpec, PathBuf, PathBuf)> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let spec: FunctorSpec = serde_json::from_str(&text).map_err(Error::from)?;
    let base = file.parent().unwrap_or(Path::new("."));
    let (s, t) = (base.join(&spec.source), base.join(&spec.target));
    Ok((spec, s, t))
}

fn functor(file: Option<&Path>, builtin: Option<&str>, force: bool, opts: &SearchOptions) -> Result<Outcome> {
    let u: FunctorTable = match (file, builtin) {
        (Some(file), _) => {
            let (spec, s, t) = read_functor_spec(file)?;
            let load = |p: &Path| -> Result<FinCategory> {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                Ok(FinCategory::from_json(&text)?)
            };
            validate_functor(load(&s)?, load(&t)?, &spec.objects, &spec.morphisms)?
        }
        (None, Some("ordered-graphs")) => ordered_graphs_forgetful(3)?,
        (None, Some("collapse")) => collapse_functor()?,
        (None, Some(other)) => match other.strip_prefix("identity:") {
            Some(name) => identity_functor(&load_fin(name)?),
            None => bail!(usage(format!("unknown built-in functor `{other}`"))),
        },
        (None, None) => bail!(usage("give a functor file or --builtin")),
    };
    let properties = functor_properties(&u);
    let check = match entropy_nondecreasing_check(&u, force, opts) {
        Ok(r) => serde_json::to_value(r)?,
        Err(Error::Unsupported(reason)) => json!({"refused": reason}),
        Err(e) => return Err(e.into()),
    };
    outcome(
        json!({
            "valid": true,
            "source_objects": u.source.object_count(),
            "target_objects": u.target.object_count(),
            "properties": properties,
            "entropy_check": check,
            "forced": force,
        }),
        PAPER_INTERNAL,
    )
}

/// Files whose bytes a command's result depends on.
pub fn inputs(cmd: &Command) -> Result<Vec<PathBuf>> {
    let cat_file = |s: &Source| s.cat.as_ref().map(PathBuf::from).filter(|p| p.is_file());
    Ok(match cmd {
        Command::ValidateCat { file } => Some(PathBuf::from(file)).filter(|p| p.is_file()).into_iter().collect(),
        Command::Hom { source, .. }
        | Command::Subobj { source, .. }
        | Command::Arrow { source, .. }
        | Command::Witness { source, .. }
        | Command::Degree { source, .. }
        | Command::Essential { source, .. }
        | Command::Entropy { source, .. } => cat_file(source).into_iter().collect(),
        Command::Suite { corpus: Some(dir), .. } => {
            let mut files: Vec<PathBuf> = fs::read_dir(dir)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "json"))
                .collect();
            files.sort();
            files
        }
        Command::Functor { file: Some(file), .. } => match read_functor_spec(file) {
            Ok((_, s, t)) => vec![file.clone(), s, t],
            Err(_) => vec![file.clone()],
        },
        _ => Vec::new(),
    })
}

pub fn tsv(cmd: &Command, result: &Value) -> Option<String> {
    use crate::report::{cell, tsv};
    let rows = |items: &Value, keys: &[&str]| -> Vec<Vec<String>> {
        items
            .as_array()
            .map(|xs| xs.iter().map(|x| keys.iter().map(|k| cell(&x[*k])).collect()).collect())
            .unwrap_or_default()
    };
    match cmd {
        Command::Structures { .. } => {
            let keys = ["label", "size", "automorphisms"];
            let mut out = rows(&result["structures"], &keys);
            for (row, s) in out.iter_mut().zip(result["structures"].as_array()?) {
                row.push(cell(&s["degree_oracle"]["value"]));
            }
            Some(tsv(&["label", "size", "automorphisms", "degree_oracle"], &out))
        }
        Command::Degree { .. } => {
            let keys = ["object", "kind", "value", "lower_bound", "upper_bound", "exact", "k", "scope"];
            Some(tsv(&keys, &rows(&result["degrees"], &keys)))
        }
        Command::Entropy { object: None, .. } if result.get("objects").is_some() => {
            let keys = ["object", "phi", "r", "argmin"];
            Some(tsv(&keys, &rows(&result["objects"], &keys)))
        }
        Command::Entropy { .. } => {
            let row = vec![
                cell(&result["object"]),
                cell(result["phi"].get("value").unwrap_or(&Value::Null)),
                cell(result.get("r").or(result.get("value")).unwrap_or(&Value::Null)),
                cell(&result["argmin"]),
            ];
            Some(tsv(&["object", "phi", "r", "argmin"], &[row]))
        }
        _ => None,
    }
}

pub fn supports_tsv(cmd: &Command) -> bool {
    matches!(cmd, Command::Structures { .. } | Command::Degree { .. } | Command::Entropy { .. })
}

pub fn no_tsv(cmd: &Command) -> anyhow::Error {
    let name = serde_json::to_value(cmd)
        .ok()
        .and_then(|v| v.as_object().and_then(|m| m.keys().next().cloned()).or(v.as_str().map(String::from)))
        .unwrap_or_default();
    anyhow!(Usage(format!("--tsv is not available for {name}")))
}
