use serde::Serialize;

use super::degree::degree_exact_finite;
use super::ArrowKind;
use crate::category::{amalgamation, Category, FinCategory, Product};
use crate::error::Result;
use crate::extended::ExtNat;
use crate::par::SearchOptions;

#[derive(Clone, Debug, Serialize)]
pub struct ObjectDegrees {
    pub object: String,
    pub automorphisms: u64,
    pub structural: ExtNat,
    pub embedding: ExtNat,
    /// `t = |Aut| · t̃`.
    pub law_holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityCase {
    pub from: String,
    pub to: String,
    pub t_from: ExtNat,
    pub t_to: ExtNat,
}

#[derive(Clone, Debug, Serialize)]
pub struct CategoryDegrees {
    pub name: String,
    pub amalgamation: bool,
    pub objects: Vec<ObjectDegrees>,
    /// Arrows `X → Y` with `t(X) > t(Y)`. A failure under amalgamation,
    /// an exhibit without it.
    pub monotonicity_violations: Vec<MonotonicityCase>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductLaw {
    pub left: String,
    pub right: String,
    pub object: String,
    pub structural: ExtNat,
    pub structural_expected: ExtNat,
    pub embedding: ExtNat,
    pub embedding_expected: ExtNat,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeLawReport {
    pub categories: Vec<CategoryDegrees>,
    pub products: Vec<ProductLaw>,
    pub failures: usize,
    pub exhibits: usize,
}

impl DegreeLawReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn degrees<C: Category>(cat: &C, opts: &SearchOptions) -> Result<Vec<ObjectDegrees>> {
    cat.objects()
        .map(|a| {
            let s = degree_exact_finite(cat, a, ArrowKind::Structural, None, opts)?.value.expect("exact");
            let e = degree_exact_finite(cat, a, ArrowKind::Embedding, None, opts)?.value.expect("exact");
            let aut = cat.aut(a).len() as u64;
            Ok(ObjectDegrees {
                object: cat.object_name(a),
                automorphisms: aut,
                structural: s,
                embedding: e,
                law_holds: e == ExtNat::Fin(aut) * s,
            })
        })
        .collect()
}

/// Checks `t = |Aut|·t̃` per object, degree monotonicity along arrows, and
/// multiplicativity of both degrees on the listed products.
pub fn degree_law_suite(
    corpus: &[(String, FinCategory)],
    pairs: &[(usize, usize)],
    opts: &SearchOptions,
) -> Result<DegreeLawReport> {
    let mut categories = Vec::new();
    let mut failures = 0;
    let mut exhibits = 0;
    for (name, cat) in corpus {
        let objects = degrees(cat, opts)?;
        let amalg = amalgamation(cat).holds;
        let mut violations = Vec::new();
        for x in cat.objects() {
            for y in cat.objects() {
                if x != y && cat.reaches(x, y) && objects[x].embedding > objects[y].embedding {
                    violations.push(MonotonicityCase {
                        from: cat.object_name(x),
                        to: cat.object_name(y),
                        t_from: objects[x].embedding,
                        t_to: objects[y].embedding,
                    });
                }
            }
        }
        failures += objects.iter().filter(|o| !o.law_holds).count();
        if amalg {
            failures += violations.len();
        } else {
            exhibits += violations.len();
        }
        categories.push(CategoryDegrees {
            name: name.clone(),
            amalgamation: amalg,
            objects,
            monotonicity_violations: violations,
        });
    }
    let mut products = Vec::new();
    for &(i, j) in pairs {
        let (ln, lc) = &corpus[i];
        let (rn, rc) = &corpus[j];
        let prod = Product::new(lc, rc);
        let (ld, rd) = (&categories[i].objects, &categories[j].objects);
        for (x, got) in degrees(&prod, opts)?.into_iter().enumerate() {
            let (p, q) = prod.split(x);
            let s_exp = ld[p].structural * rd[q].structural;
            let e_exp = ld[p].embedding * rd[q].embedding;
            let holds = got.structural == s_exp && got.embedding == e_exp && got.law_holds;
            failures += usize::from(!holds);
            products.push(ProductLaw {
                left: ln.clone(),
                right: rn.clone(),
                object: got.object,
                structural: got.structural,
                structural_expected: s_exp,
                embedding: got.embedding,
                embedding_expected: e_exp,
                holds,
            });
        }
    }
    Ok(DegreeLawReport {
        categories,
        products,
        failures,
        exhibits,
    })
}
