use super::Structure;
use crate::error::{Error, Result};

/// Backtracking over target elements with forward checking: after placing
/// `i ↦ t`, every later position keeps only candidates whose relation to
/// `t` matches its relation to `i`. Visits maps in lexicographic order and
/// stops early when `visit` returns false.
fn search(a: &Structure, b: &Structure, visit: &mut dyn FnMut(&[u8]) -> bool) -> Result<()> {
    if a.class() != b.class() {
        return Err(Error::invalid(format!(
            "cannot embed a {} into a {}",
            a.class(),
            b.class()
        )));
    }
    let (na, nb) = (a.size(), b.size());
    if na > nb {
        return Ok(());
    }
    let full: u32 = if nb == 32 { u32::MAX } else { (1 << nb) - 1 };
    let out_b: Vec<u32> = (0..nb).map(|t| b.out_mask(t)).collect();
    let in_b: Vec<u32> = (0..nb).map(|t| b.in_mask(t)).collect();
    let mut map = vec![0u8; na];
    let mut domains = vec![vec![full; na]; na + 1];
    go(a, &out_b, &in_b, 0, &mut map, &mut domains, visit);
    Ok(())
}

fn go(
    a: &Structure,
    out_b: &[u32],
    in_b: &[u32],
    i: usize,
    map: &mut Vec<u8>,
    domains: &mut Vec<Vec<u32>>,
    visit: &mut dyn FnMut(&[u8]) -> bool,
) -> bool {
    let na = a.size();
    if i == na {
        return visit(map);
    }
    let mut cands = domains[i][i];
    while cands != 0 {
        let t = cands.trailing_zeros() as usize;
        cands &= cands - 1;
        map[i] = t as u8;
        let mut ok = true;
        for k in i + 1..na {
            let mut d = domains[i][k] & !(1 << t);
            d &= if a.rel(k, i) { in_b[t] } else { !in_b[t] };
            d &= if a.rel(i, k) { out_b[t] } else { !out_b[t] };
            domains[i + 1][k] = d;
            if d == 0 {
                ok = false;
                break;
            }
        }
        if ok && !go(a, out_b, in_b, i + 1, map, domains, visit) {
            return false;
        }
    }
    true
}

/// All embeddings `A → B` (injective, relation preserving and reflecting),
/// as element maps in lexicographic order.
pub fn embeddings(a: &Structure, b: &Structure) -> Result<Vec<Vec<u8>>> {
    let mut out = Vec::new();
    search(a, b, &mut |m| {
        out.push(m.to_vec());
        true
    })?;
    Ok(out)
}

pub fn count_embeddings(a: &Structure, b: &Structure) -> Result<u64> {
    let mut n = 0u64;
    search(a, b, &mut |_| {
        n += 1;
        true
    })?;
    Ok(n)
}

pub fn automorphisms(a: &Structure) -> Vec<Vec<u8>> {
    embeddings(a, a).expect("same class")
}

pub fn automorphism_count(a: &Structure) -> u64 {
    count_embeddings(a, a).expect("same class")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::StructClass;

    /// Every injective map, filtered by the definition.
    fn brute(a: &Structure, b: &Structure) -> Vec<Vec<u8>> {
        fn rec(a: &Structure, b: &Structure, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            if cur.len() == a.size() {
                let ok = (0..a.size()).all(|i| {
                    (0..a.size()).all(|j| a.rel(i, j) == b.rel(cur[i] as usize, cur[j] as usize))
                });
                if ok {
                    out.push(cur.clone());
                }
                return;
            }
            for t in 0..b.size() as u8 {
                if !cur.contains(&t) {
                    cur.push(t);
                    rec(a, b, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(a, b, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn counts() {
        let k2 = Structure::complete_graph(2);
        assert_eq!(count_embeddings(&k2, &Structure::complete_graph(3)).unwrap(), 6);
        let c2 = Structure::chain(StructClass::Linord, 2);
        let c4 = Structure::chain(StructClass::Linord, 4);
        assert_eq!(count_embeddings(&c2, &c4).unwrap(), 6);
        assert_eq!(count_embeddings(&Structure::path(3), &Structure::cycle(4)).unwrap(), 8);
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphism_count(&Structure::complete_graph(3)), 6);
        assert_eq!(automorphism_count(&Structure::cycle(4)), 8);
        assert_eq!(automorphism_count(&Structure::path(4)), 2);
    }

    #[test]
    fn matches_brute_force() {
        let shapes = [
            Structure::path(3),
            Structure::cycle(4),
            Structure::complete_graph(3),
            Structure::empty_graph(2),
            Structure::parse(StructClass::Graph, "5:0-1,1-2,2-0,3-4").unwrap(),
        ];
        for a in &shapes {
            for b in &shapes {
                assert_eq!(embeddings(a, b).unwrap(), brute(a, b), "{a} → {b}");
            }
        }
        let n = Structure::parse(StructClass::Poset, "N").unwrap();
        let v = Structure::parse(StructClass::Poset, "V").unwrap();
        assert_eq!(embeddings(&v, &n).unwrap(), brute(&v, &n));
    }

    #[test]
    fn class_mismatch() {
        let g = Structure::path(2);
        let l = Structure::chain(StructClass::Linord, 2);
        assert!(embeddings(&g, &l).is_err());
    }
}
