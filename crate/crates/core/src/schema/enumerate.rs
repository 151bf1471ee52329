//! Isomorphism classes of reduced schemata.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

use super::MappingSchema;

/// Enumeration is exhaustive over all maps `F`, so it is capped.
pub const MAX_ENUMERATION_WEIGHT: u32 = 6;

/// Canonical forms are computed over all vertex orderings.
const MAX_CANONICAL_VERTICES: usize = 8;

/// Encoding of a relabeled schema: entry `i` is `(w, F)` of new vertex `i`.
type Encoding = Vec<(u32, usize)>;

fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    // Heap's algorithm
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn canonical_encoding(weights: &[u32], images: &[usize]) -> Encoding {
    let n = weights.len();
    let mut best: Option<Encoding> = None;
    let mut enc = vec![(0u32, 0usize); n];
    for_each_permutation(n, |p| {
        for v in 0..n {
            enc[p[v]] = (weights[v], p[images[v]]);
        }
        if best.as_ref().is_none_or(|b| enc < *b) {
            best = Some(enc.clone());
        }
    });
    best.unwrap_or_default()
}

/// Minimal lexicographic `(w, F)` encoding over all vertex orderings.
pub fn canonical_form(s: &MappingSchema) -> Result<Vec<(u32, usize)>> {
    if s.len() > MAX_CANONICAL_VERTICES {
        return Err(Error::Budget(format!("canonical form limited to {MAX_CANONICAL_VERTICES} vertices")));
    }
    Ok(canonical_encoding(s.weights(), s.images()))
}

pub fn is_isomorphic(a: &MappingSchema, b: &MappingSchema) -> Result<bool> {
    if a.len() != b.len() || a.total_weight() != b.total_weight() {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 1..=total - (parts as u32 - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// One representative per isomorphism class of reduced schemata of total
/// weight `w`, ordered by vertex count and then canonical encoding; ids are
/// `v0, v1, …`.
pub fn enumerate_schemata(w: u32) -> Result<Vec<MappingSchema>> {
    if !(1..=MAX_ENUMERATION_WEIGHT).contains(&w) {
        return Err(Error::Budget(format!("total weight must be in 1..={MAX_ENUMERATION_WEIGHT}")));
    }
    let mut classes: BTreeSet<(usize, Encoding)> = BTreeSet::new();
    for n in 1..=w as usize {
        let weight_choices = compositions(w, n);
        let maps = n.pow(n as u32);
        let mut images = vec![0usize; n];
        for code in 0..maps {
            let mut c = code;
            for slot in images.iter_mut() {
                *slot = c % n;
                c /= n;
            }
            for weights in &weight_choices {
                classes.insert((n, canonical_encoding(weights, &images)));
            }
        }
    }
    classes
        .into_iter()
        .map(|(_, enc)| {
            let (weights, images) = enc.into_iter().unzip();
            MappingSchema::from_images(weights, images)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_lengths(p: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; p.len()];
        let mut out = Vec::new();
        for s in 0..p.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut v = s;
            while !seen[v] {
                seen[v] = true;
                v = p[v];
                len += 1;
            }
            out.push(len);
        }
        out
    }

    /// Burnside: the number of classes is the average number of labeled
    /// schemata fixed by a vertex permutation π. A fixed `F` maps each
    /// π-cycle of length ℓ onto a π-cycle of length ℓ′ | ℓ (ℓ′ phases), and
    /// a fixed `w` is constant on π-cycles.
    fn burnside_count(w: u32) -> u64 {
        let mut total: u64 = 0;
        for n in 1..=w as usize {
            let mut fixed_sum: u64 = 0;
            let mut count: u64 = 0;
            for_each_permutation(n, |p| {
                let lens = cycle_lengths(p);
                let maps: u64 =
                    lens.iter().map(|&l| lens.iter().filter(|&&m| l % m == 0).map(|&m| m as u64).sum::<u64>()).product();
                // weight assignments: positive w_c with Σ len(c)·w_c = w
                let mut ways = vec![0u64; w as usize + 1];
                ways[0] = 1;
                for &l in &lens {
                    let mut next = vec![0u64; w as usize + 1];
                    for (s, &cnt) in ways.iter().enumerate() {
                        let mut k = 1;
                        while s + k * l <= w as usize {
                            next[s + k * l] += cnt;
                            k += 1;
                        }
                    }
                    ways = next;
                }
                fixed_sum += maps * ways[w as usize];
                count += 1;
            });
            assert_eq!(fixed_sum % count, 0);
            total += fixed_sum / count;
        }
        total
    }

    #[test]
    fn small_weights() {
        assert_eq!(enumerate_schemata(1).unwrap().len(), 1);
        let two = enumerate_schemata(2).unwrap();
        assert_eq!(two.len(), 4);
        let mut shapes: Vec<(usize, usize)> = two.iter().map(|s| (s.len(), s.cycles().len())).collect();
        shapes.sort();
        // w=2 fixed; tail and 2-cycle (one cycle each); two fixed vertices
        assert_eq!(shapes, vec![(1, 1), (2, 1), (2, 1), (2, 2)]);
    }

    #[test]
    fn matches_orbit_counting() {
        for w in 1..=5 {
            assert_eq!(enumerate_schemata(w).unwrap().len() as u64, burnside_count(w), "weight {w}");
        }
    }

    #[test]
    fn representatives_pairwise_non_isomorphic() {
        let all = enumerate_schemata(4).unwrap();
        for (i, a) in all.iter().enumerate() {
            assert_eq!(a.total_weight(), 4);
            for b in &all[i + 1..] {
                assert!(!is_isomorphic(a, b).unwrap());
            }
        }
    }

    #[test]
    fn isomorphism_ignores_labels() {
        let a = MappingSchema::from_images(vec![1, 2], vec![1, 1]).unwrap();
        let b = MappingSchema::from_images(vec![2, 1], vec![0, 0]).unwrap();
        assert!(is_isomorphic(&a, &b).unwrap());
        let c = MappingSchema::from_images(vec![2, 1], vec![1, 1]).unwrap();
        assert!(!is_isomorphic(&a, &c).unwrap());
    }

    #[test]
    fn budget() {
        assert!(matches!(enumerate_schemata(0), Err(Error::Budget(_))));
        assert!(matches!(enumerate_schemata(7), Err(Error::Budget(_))));
    }
}
