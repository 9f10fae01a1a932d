use serde::Serialize;

use super::{automorphism_count, StructClass, Structure};
use crate::error::{Error, Result};
use crate::extended::ExtNat;

/// Provenance tag on every degree taken from a published closed form
/// rather than computed from the category.
pub const LITERATURE_ORACLE: &str = "oracle (literature)";

const LINEAR_EXTENSION_LIMIT: usize = 24;

/// Number of linear extensions, by dynamic programming over down-sets:
/// `ways[S]` counts orderings of down-set `S` as an initial segment.
pub fn linear_extensions(p: &Structure) -> Result<u128> {
    if !matches!(p.class(), StructClass::Poset | StructClass::Linord) {
        return Err(Error::invalid(format!("linear extensions of a {}", p.class())));
    }
    let n = p.size();
    if n > LINEAR_EXTENSION_LIMIT {
        return Err(Error::budget("linear extension elements", n as u128, LINEAR_EXTENSION_LIMIT as u128));
    }
    let below: Vec<u32> = (0..n).map(|x| p.in_mask(x)).collect();
    let mut ways = vec![0u128; 1 << n];
    ways[0] = 1;
    for set in 0..(1usize << n) {
        let w = ways[set];
        if w == 0 {
            continue;
        }
        for (x, &down) in below.iter().enumerate() {
            if set >> x & 1 == 0 && down as usize & !set == 0 {
                ways[set | 1 << x] += w;
            }
        }
    }
    Ok(ways[(1 << n) - 1])
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleDegree {
    pub value: ExtNat,
    pub numerator: u128,
    pub automorphisms: u64,
    pub formula: &'static str,
    pub provenance: &'static str,
}

/// Closed-form structural degree: `n!/|Aut A|` for graphs, `e(A)/|Aut A|`
/// for posets, `1` for linear orders.
pub fn degree_oracle(a: &Structure) -> Result<OracleDegree> {
    let aut = automorphism_count(a);
    let (numerator, formula) = match a.class() {
        StructClass::Graph => ((1..=a.size() as u128).product(), "n!/|Aut|"),
        StructClass::Poset => (linear_extensions(a)?, "e/|Aut|"),
        StructClass::Linord => (1, "1"),
        StructClass::Digraph => {
            return Err(Error::Unsupported("no degree oracle for digraphs".into()))
        }
    };
    let value = if a.class() == StructClass::Linord {
        1
    } else {
        debug_assert_eq!(numerator % aut as u128, 0);
        (numerator / aut as u128) as u64
    };
    Ok(OracleDegree {
        value: ExtNat::Fin(value),
        numerator,
        automorphisms: aut,
        formula,
        provenance: LITERATURE_ORACLE,
    })
}
