use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Partition, Partitions};
use crate::extended::{ExtReal, TOLERANCE};

/// An entropy on partitions: a family of maps `Part(X) → ℝ ∪ {∞}` over finite sets.
pub trait PartitionEntropy: Sync {
    fn name(&self) -> String;
    fn eval(&self, p: &Partition) -> ExtReal;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyKind {
    /// `-Σ p(β) log₂ p(β)` with `p(β) = |β| / |X|` and `0 · log 0 = 0`.
    Shannon,
    /// `log₂ |Π|`.
    Boltzmann,
}

impl EntropyKind {
    pub fn value(self, p: &Partition) -> f64 {
        match self {
            EntropyKind::Boltzmann => (p.block_count().max(1) as f64).log2(),
            EntropyKind::Shannon => {
                let n = p.ground_size() as f64;
                let h: f64 = p
                    .block_sizes()
                    .into_iter()
                    .filter(|&s| s > 0)
                    .map(|s| {
                        let q = s as f64 / n;
                        -q * q.log2()
                    })
                    .sum();
                // -0.0 for the trivial partition
                h.max(0.0)
            }
        }
    }
}

impl PartitionEntropy for EntropyKind {
    fn name(&self) -> String {
        match self {
            EntropyKind::Shannon => "shannon".into(),
            EntropyKind::Boltzmann => "boltzmann".into(),
        }
    }

    fn eval(&self, p: &Partition) -> ExtReal {
        ExtReal::Fin(self.value(p))
    }
}

impl std::str::FromStr for EntropyKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "shannon" => Ok(EntropyKind::Shannon),
            "boltzmann" => Ok(EntropyKind::Boltzmann),
            other => Err(crate::Error::invalid(format!("unknown entropy `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyAxiom {
    /// `H(Π) ≤ log |Π|`
    LogBound,
    /// `H(Π) = 0` iff `Π` is the one-block partition
    ZeroIffTrivial,
    /// finer partitions never have smaller entropy
    Monotone,
    /// isomorphic partitions have equal entropy
    IsoInvariant,
    /// `H(Π ⊗ Λ) = H(Π) + H(Λ)`
    Additive,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomViolation {
    pub axiom: EntropyAxiom,
    pub witnesses: Vec<Partition>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub entropy: String,
    pub n_max: usize,
    pub tensor_max: usize,
    pub tolerance: f64,
    pub partitions_checked: usize,
    pub pairs_checked: usize,
    pub passed: bool,
    pub first_violation: Option<AxiomViolation>,
}

/// Checks the five entropy axioms exhaustively on every partition of every
/// ground set of size `1..=n_max`, and additivity on every pair of
/// partitions of grounds up to `tensor_max`. Stops at the first violation,
/// scanning axioms in declaration order per ground size.
pub fn check_entropy_axioms<H: PartitionEntropy + ?Sized>(
    h: &H,
    n_max: usize,
    tensor_max: usize,
) -> AxiomReport {
    let mut report = AxiomReport {
        entropy: h.name(),
        n_max,
        tensor_max,
        tolerance: TOLERANCE,
        partitions_checked: 0,
        pairs_checked: 0,
        passed: true,
        first_violation: None,
    };
    let fail = |report: &mut AxiomReport, axiom, witnesses: Vec<Partition>, detail: String| {
        report.passed = false;
        report.first_violation = Some(AxiomViolation {
            axiom,
            witnesses,
            detail,
        });
    };

    for n in 1..=n_max {
        let parts: Vec<Partition> = Partitions::new(n, None).collect();
        let values: Vec<ExtReal> = parts.iter().map(|p| h.eval(p)).collect();
        report.partitions_checked += parts.len();

        for (p, &v) in parts.iter().zip(&values) {
            let bound = ExtReal::Fin((p.block_count() as f64).log2());
            if !v.approx_le(bound) {
                fail(&mut report, EntropyAxiom::LogBound, vec![p.clone()], format!(
                    "H = {v} exceeds log|Π| = {bound} at |Π| = {}",
                    p.block_count()
                ));
                return report;
            }
        }
        for (p, &v) in parts.iter().zip(&values) {
            let zero = v.approx_eq(ExtReal::ZERO);
            if zero != p.is_trivial() {
                fail(&mut report, EntropyAxiom::ZeroIffTrivial, vec![p.clone()], format!(
                    "H = {v} on a partition with {} blocks",
                    p.block_count()
                ));
                return report;
            }
        }
        for (i, coarse) in parts.iter().enumerate() {
            for (j, fine) in parts.iter().enumerate() {
                if i != j && fine.is_finer_than(coarse) {
                    report.pairs_checked += 1;
                    if !values[i].approx_le(values[j]) {
                        fail(&mut report, EntropyAxiom::Monotone, vec![coarse.clone(), fine.clone()], format!(
                            "coarser H = {} exceeds finer H = {}",
                            values[i], values[j]
                        ));
                        return report;
                    }
                }
            }
        }
        let mut by_shape: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for (i, p) in parts.iter().enumerate() {
            let mut shape = p.block_sizes();
            shape.sort_unstable();
            let first = *by_shape.entry(shape).or_insert(i);
            if !values[first].approx_eq(values[i]) {
                fail(&mut report, EntropyAxiom::IsoInvariant, vec![parts[first].clone(), p.clone()], format!(
                    "isomorphic partitions score {} and {}",
                    values[first], values[i]
                ));
                return report;
            }
        }
    }

    let small: Vec<(Partition, ExtReal)> = (1..=tensor_max)
        .flat_map(|n| Partitions::new(n, None))
        .map(|p| {
            let v = h.eval(&p);
            (p, v)
        })
        .collect();
    for (p, vp) in &small {
        for (q, vq) in &small {
            report.pairs_checked += 1;
            let lhs = h.eval(&p.tensor(q));
            if !lhs.approx_eq(*vp + *vq) {
                fail(&mut report, EntropyAxiom::Additive, vec![p.clone(), q.clone()], format!(
                    "H(Π⊗Λ) = {lhs} but H(Π) + H(Λ) = {}",
                    *vp + *vq
                ));
                return report;
            }
        }
    }
    report
}
