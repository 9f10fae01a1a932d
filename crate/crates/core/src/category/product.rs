use std::fmt;
use std::sync::{Arc, OnceLock};

use super::{materialize, Category, FinCategory, ObjId};
use crate::error::{Error, Result};

/// Largest morphism count a materialized product or power may have.
pub const MATERIALIZE_LIMIT: u128 = 20_000;

/// `C₁ × C₂` as a lazy view: objects and morphisms are pairs, composition is
/// componentwise. Object `(a, b)` has id `a · |Ob C₂| + b`.
pub struct Product<C1: Category, C2: Category> {
    pub left: C1,
    pub right: C2,
    homs: Vec<OnceLock<Arc<[(C1::Mor, C2::Mor)]>>>,
}

impl<C1: Category, C2: Category> Product<C1, C2> {
    pub fn new(left: C1, right: C2) -> Self {
        let n = left.object_count() * right.object_count();
        Product {
            homs: (0..n * n).map(|_| OnceLock::new()).collect(),
            left,
            right,
        }
    }

    pub fn pair(&self, a: ObjId, b: ObjId) -> ObjId {
        a * self.right.object_count() + b
    }

    pub fn split(&self, x: ObjId) -> (ObjId, ObjId) {
        let n2 = self.right.object_count();
        (x / n2, x % n2)
    }
}

impl<C1: Category, C2: Category> Category for Product<C1, C2> {
    type Mor = (C1::Mor, C2::Mor);

    fn object_count(&self) -> usize {
        self.left.object_count() * self.right.object_count()
    }

    fn object_name(&self, x: ObjId) -> String {
        let (a, b) = self.split(x);
        format!("({},{})", self.left.object_name(a), self.right.object_name(b))
    }

    fn hom(&self, x: ObjId, y: ObjId) -> Arc<[Self::Mor]> {
        self.homs[x * self.object_count() + y]
            .get_or_init(|| {
                let ((a1, a2), (b1, b2)) = (self.split(x), self.split(y));
                let h2 = self.right.hom(a2, b2);
                self.left
                    .hom(a1, b1)
                    .iter()
                    .flat_map(|f| h2.iter().map(move |g| (f.clone(), g.clone())))
                    .collect()
            })
            .clone()
    }

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor {
        (self.left.compose(&g.0, &f.0), self.right.compose(&g.1, &f.1))
    }

    fn identity(&self, x: ObjId) -> Self::Mor {
        let (a, b) = self.split(x);
        (self.left.identity(a), self.right.identity(b))
    }

    fn dom(&self, f: &Self::Mor) -> ObjId {
        self.pair(self.left.dom(&f.0), self.right.dom(&f.1))
    }

    fn cod(&self, f: &Self::Mor) -> ObjId {
        self.pair(self.left.cod(&f.0), self.right.cod(&f.1))
    }

    fn morphism_name(&self, f: &Self::Mor) -> String {
        format!("({},{})", self.left.morphism_name(&f.0), self.right.morphism_name(&f.1))
    }

    fn all_mono(&self) -> bool {
        self.left.all_mono() && self.right.all_mono()
    }
}

fn morphism_total<C: Category>(cat: &C) -> u128 {
    cat.objects()
        .flat_map(|a| cat.objects().map(move |b| (a, b)))
        .map(|(a, b)| cat.hom(a, b).len() as u128)
        .sum()
}

fn guarded(what: &str, needed: u128) -> Result<()> {
    if needed > MATERIALIZE_LIMIT {
        return Err(Error::budget(what, needed, MATERIALIZE_LIMIT));
    }
    Ok(())
}

/// `C₁ × C₂` as an explicit table.
pub fn product(left: &FinCategory, right: &FinCategory) -> Result<FinCategory> {
    guarded(
        "product morphisms",
        left.morphism_count() as u128 * right.morphism_count() as u128,
    )?;
    materialize(&Product::new(left, right))
}

/// `Cⁿ` as an explicit table, objects and morphisms named as `n`-tuples.
pub fn power(cat: &FinCategory, n: usize) -> Result<FinCategory> {
    if n == 0 {
        return Err(Error::invalid("power exponent must be at least 1"));
    }
    let needed = (cat.morphism_count() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    guarded("power morphisms", needed)?;
    materialize(&StateSpace::with_lengths(cat, n, n))
}

/// `∐_{n ≤ n_max} Cⁿ` as an explicit table.
pub fn state_space(cat: &FinCategory, n_max: usize) -> Result<FinCategory> {
    let space = StateSpace::new(cat, n_max);
    guarded("state space morphisms", morphism_total(&space))?;
    materialize(&space)
}

/// A tuple of base-category object names; `⋆` is concatenation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSpaceObject(pub Vec<String>);

impl StateSpaceObject {
    pub fn single(name: impl Into<String>) -> Self {
        StateSpaceObject(vec![name.into()])
    }

    pub fn star(&self, other: &StateSpaceObject) -> StateSpaceObject {
        StateSpaceObject(self.0.iter().chain(&other.0).cloned().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for StateSpaceObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.join(","))
    }
}

/// Tuples of length `min_len..=max_len` over a base category, with
/// componentwise morphisms between tuples of equal length and none between
/// tuples of different length. Objects are numbered by length, then
/// lexicographically.
pub struct StateSpace<C: Category> {
    pub base: C,
    min_len: usize,
    max_len: usize,
    /// `offsets[i]` is the id of the first tuple of length `min_len + i`.
    offsets: Vec<usize>,
    homs: Vec<OnceLock<Arc<[Vec<C::Mor>]>>>,
}

impl<C: Category> StateSpace<C> {
    pub fn new(base: C, n_max: usize) -> Self {
        Self::with_lengths(base, 1, n_max)
    }

    pub fn with_lengths(base: C, min_len: usize, max_len: usize) -> Self {
        assert!(min_len >= 1 && min_len <= max_len, "empty tuple range");
        let k = base.object_count();
        let mut offsets = vec![0];
        for len in min_len..=max_len {
            let last = *offsets.last().unwrap();
            offsets.push(last + k.pow(len as u32));
        }
        let total = *offsets.last().unwrap();
        StateSpace {
            base,
            min_len,
            max_len,
            offsets,
            homs: (0..total * total).map(|_| OnceLock::new()).collect(),
        }
    }

    /// The base objects making up tuple `x`.
    pub fn tuple(&self, x: ObjId) -> Vec<ObjId> {
        let i = self.offsets.partition_point(|&o| o <= x) - 1;
        let len = self.min_len + i;
        let k = self.base.object_count();
        let mut rest = x - self.offsets[i];
        let mut out = vec![0; len];
        for slot in out.iter_mut().rev() {
            *slot = rest % k;
            rest /= k;
        }
        out
    }

    pub fn object_of(&self, tuple: &[ObjId]) -> Option<ObjId> {
        if tuple.len() < self.min_len || tuple.len() > self.max_len {
            return None;
        }
        let k = self.base.object_count();
        let rank = tuple.iter().fold(0, |acc, &a| acc * k + a);
        Some(self.offsets[tuple.len() - self.min_len] + rank)
    }

    pub fn resolve(&self, obj: &StateSpaceObject) -> Option<ObjId> {
        let ids: Option<Vec<ObjId>> = obj.0.iter().map(|n| self.base.object_id(n)).collect();
        self.object_of(&ids?)
    }

    pub fn describe(&self, x: ObjId) -> StateSpaceObject {
        StateSpaceObject(self.tuple(x).into_iter().map(|a| self.base.object_name(a)).collect())
    }

    /// `X ⋆ Y`, if the concatenation is within the length range.
    pub fn star(&self, x: ObjId, y: ObjId) -> Option<ObjId> {
        let mut t = self.tuple(x);
        t.extend(self.tuple(y));
        self.object_of(&t)
    }

    /// `f ⋆ g`: componentwise concatenation of morphism tuples.
    pub fn star_morphisms(&self, f: &[C::Mor], g: &[C::Mor]) -> Vec<C::Mor> {
        f.iter().chain(g).cloned().collect()
    }
}

impl<C: Category> Category for StateSpace<C> {
    type Mor = Vec<C::Mor>;

    fn object_count(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn object_name(&self, x: ObjId) -> String {
        self.describe(x).to_string()
    }

    fn hom(&self, x: ObjId, y: ObjId) -> Arc<[Self::Mor]> {
        self.homs[x * self.object_count() + y]
            .get_or_init(|| {
                let (tx, ty) = (self.tuple(x), self.tuple(y));
                if tx.len() != ty.len() {
                    return Arc::from(Vec::new());
                }
                let mut acc: Vec<Vec<C::Mor>> = vec![Vec::new()];
                for (&a, &b) in tx.iter().zip(&ty) {
                    let h = self.base.hom(a, b);
                    acc = acc
                        .into_iter()
                        .flat_map(|prefix| {
                            h.iter().map(move |f| {
                                let mut p = prefix.clone();
                                p.push(f.clone());
                                p
                            })
                        })
                        .collect();
                }
                Arc::from(acc)
            })
            .clone()
    }

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor {
        g.iter().zip(f).map(|(g, f)| self.base.compose(g, f)).collect()
    }

    fn identity(&self, x: ObjId) -> Self::Mor {
        self.tuple(x).into_iter().map(|a| self.base.identity(a)).collect()
    }

    fn dom(&self, f: &Self::Mor) -> ObjId {
        let t: Vec<ObjId> = f.iter().map(|m| self.base.dom(m)).collect();
        self.object_of(&t).expect("morphism tuple length in range")
    }

    fn cod(&self, f: &Self::Mor) -> ObjId {
        let t: Vec<ObjId> = f.iter().map(|m| self.base.cod(m)).collect();
        self.object_of(&t).expect("morphism tuple length in range")
    }

    fn morphism_name(&self, f: &Self::Mor) -> String {
        let parts: Vec<String> = f.iter().map(|m| self.base.morphism_name(m)).collect();
        format!("({})", parts.join(","))
    }

    fn all_mono(&self) -> bool {
        self.base.all_mono()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::amalgamation;
    use crate::corpus;

    #[test]
    fn product_homs_multiply() {
        let e = corpus::category_e();
        let ee = product(&e, &e).unwrap();
        let aa = ee.object("(A,A)").unwrap();
        let bb = ee.object("(B,B)").unwrap();
        assert_eq!(ee.hom(aa, bb).len(), 4);
        let ab = ee.object("(A,B)").unwrap();
        assert_eq!(ee.morphism_name(&ee.identity(ab)), "(idA,idB)");
        assert!(ee.all_mono());
    }

    #[test]
    fn first_power_matches_base() {
        let e = corpus::category_e();
        let p = power(&e, 1).unwrap();
        assert_eq!(p.object_count(), e.object_count());
        assert_eq!(p.morphism_count(), e.morphism_count());
        for a in e.objects() {
            for b in e.objects() {
                assert_eq!(p.hom(a, b).len(), e.hom(a, b).len());
            }
        }
        assert_eq!(p.object_name(0), "(A)");
    }

    #[test]
    fn star_concatenates() {
        let e = corpus::category_e();
        let s = StateSpace::new(&e, 3);
        let a = s.resolve(&StateSpaceObject::single("A")).unwrap();
        let b = s.resolve(&StateSpaceObject::single("B")).unwrap();
        let ab = s.star(a, b).unwrap();
        assert_eq!(s.object_name(ab), "(A,B)");
        assert_eq!(
            StateSpaceObject::single("A").star(&StateSpaceObject::single("B")).to_string(),
            "(A,B)"
        );
        let aa = s.star(a, a).unwrap();
        assert!(s.hom(a, aa).is_empty());
        let f1 = e.morphism_id("f1").unwrap();
        let sigma = e.morphism_id("σ").unwrap();
        let m = s.star_morphisms(&[f1], &[sigma]);
        assert_eq!(s.dom(&m), ab);
        assert_eq!(s.morphism_name(&m), "(f1,σ)");
    }

    #[test]
    fn state_space_materializes() {
        let e = corpus::category_e();
        let s = state_space(&e, 2).unwrap();
        assert_eq!(s.object_count(), 2 + 4);
        assert!(s.all_mono());
    }

    #[test]
    fn predicate_transfer_on_products() {
        let e = corpus::category_e();
        let e2 = corpus::category_e_without_swap();
        assert!(amalgamation(&product(&e, &e).unwrap()).holds);
        assert!(!amalgamation(&product(&e, &e2).unwrap()).holds);
    }

    #[test]
    fn size_guard() {
        let e = corpus::category_e();
        assert!(matches!(power(&e, 12), Err(Error::Budget { .. })));
    }
}
