//! Relabelling-invariant keys for candidate families.
//!
//! Items are coloured by iterated signature refinement over the
//! item/candidate incidence structure. When every colour class with more
//! than one item consists of pairwise *twins* (items whose transposition maps
//! the family onto itself), ordering items by colour yields a canonical
//! relabelling. Otherwise one class is split by individualising each of its
//! items in turn and the smallest relabelled family wins. That search is
//! capped; past the cap the key falls back to the raw mask list, which only
//! costs memo hits.

use crate::family::{CandidateFamily, ItemSet};

/// Individualisation leaves explored before giving up on a canonical form.
const LEAF_BUDGET: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CanonicalKey {
    /// Masks after a canonical relabelling of the items.
    Relabelled { n: usize, d: usize, masks: Vec<u64> },
    /// Refinement could not settle the labelling; the family itself.
    Raw { n: usize, d: usize, masks: Vec<u64> },
}

impl CanonicalKey {
    pub fn is_relabelled(&self) -> bool {
        matches!(self, CanonicalKey::Relabelled { .. })
    }
}

pub(crate) fn canonical_key(family: &CandidateFamily) -> CanonicalKey {
    let (n, d) = (family.n(), family.d());
    let twins = twin_classes(family);
    let mut twin_of = vec![0usize; n];
    for (class, members) in twins.iter().enumerate() {
        for item in members.iter() {
            twin_of[item] = class;
        }
    }
    let colours = refine(family, vec![0; n]);
    let mut budget = LEAF_BUDGET;
    match search(family, &twin_of, colours, &mut budget) {
        Some(masks) => CanonicalKey::Relabelled { n, d, masks },
        None => CanonicalKey::Raw {
            n,
            d,
            masks: family.masks().to_vec(),
        },
    }
}

fn search(
    family: &CandidateFamily,
    twin_of: &[usize],
    colours: Vec<u32>,
    budget: &mut usize,
) -> Option<Vec<u64>> {
    let n = family.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (colours[i], i));

    // First colour class that is not a single twin class.
    let mut target = None;
    let mut start = 0;
    while start < n {
        let c = colours[order[start]];
        let end = start
            + order[start..]
                .iter()
                .take_while(|&&i| colours[i] == c)
                .count();
        let cell = &order[start..end];
        if cell.iter().any(|&i| twin_of[i] != twin_of[cell[0]]) {
            target = Some(cell.to_vec());
            break;
        }
        start = end;
    }

    let Some(cell) = target else {
        let mut perm = vec![0; n];
        for (pos, &item) in order.iter().enumerate() {
            perm[item] = pos;
        }
        return Some(family.relabel(&perm).masks().to_vec());
    };

    let mut best: Option<Vec<u64>> = None;
    let mut seen_twins = Vec::new();
    for &item in &cell {
        if seen_twins.contains(&twin_of[item]) {
            continue;
        }
        seen_twins.push(twin_of[item]);
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        let mut split: Vec<u32> = colours.iter().map(|&c| 2 * c + 1).collect();
        split[item] -= 1;
        let leaf = search(family, twin_of, refine(family, split), budget)?;
        if best.as_ref().is_none_or(|b| leaf < *b) {
            best = Some(leaf);
        }
    }
    best
}

/// Iterated signature refinement starting from `colours`.
///
/// A candidate's signature is the sorted multiset of its items' colours; an
/// item's is its colour plus the sorted multiset of the signatures of the
/// candidates containing it. Colours are re-ranked by sorting signatures, so
/// the result depends only on the structure, never on item labels. Relative
/// order of existing colours is preserved. Runs at most `n` rounds.
pub fn refine(family: &CandidateFamily, mut colours: Vec<u32>) -> Vec<u32> {
    let n = family.n();
    let mut classes = count_distinct(&colours);
    for _ in 0..n {
        let cand_sigs: Vec<Vec<u32>> = family
            .iter()
            .map(|set| {
                let mut sig: Vec<u32> = set.iter().map(|i| colours[i]).collect();
                sig.sort_unstable();
                sig
            })
            .collect();
        let cand_colours = rank(&cand_sigs);

        let mut item_sigs: Vec<(u32, Vec<u32>)> =
            colours.iter().map(|&c| (c, Vec::new())).collect();
        for (set, &cc) in family.iter().zip(&cand_colours) {
            for i in set.iter() {
                item_sigs[i].1.push(cc);
            }
        }
        for sig in &mut item_sigs {
            sig.1.sort_unstable();
        }
        colours = rank(&item_sigs);
        let now = count_distinct(&colours);
        if now == classes {
            break;
        }
        classes = now;
    }
    colours
}

fn rank<T: Ord + Clone>(sigs: &[T]) -> Vec<u32> {
    let mut distinct: Vec<&T> = sigs.iter().collect();
    distinct.sort_unstable();
    distinct.dedup();
    sigs.iter()
        .map(|s| distinct.binary_search(&s).unwrap() as u32)
        .collect()
}

fn count_distinct(colours: &[u32]) -> usize {
    let mut v = colours.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Whether swapping items `a` and `b` maps the family onto itself.
pub fn are_twins(family: &CandidateFamily, a: usize, b: usize) -> bool {
    if a == b {
        return true;
    }
    let (ba, bb) = (1u64 << a, 1u64 << b);
    family.masks().iter().all(|&m| {
        let has_a = m & ba != 0;
        let has_b = m & bb != 0;
        has_a == has_b || family.masks().binary_search(&(m ^ ba ^ bb)).is_ok()
    })
}

/// Partition of the items into twin classes, ordered by smallest member.
///
/// Twinship is an equivalence relation, so each item only needs comparing
/// against one representative per existing class.
pub fn twin_classes(family: &CandidateFamily) -> Vec<ItemSet> {
    let n = family.n();
    let mut degree = vec![0usize; n];
    for set in family.iter() {
        for i in set.iter() {
            degree[i] += 1;
        }
    }
    let mut classes: Vec<(usize, ItemSet)> = Vec::new();
    'items: for item in 0..n {
        for (rep, members) in classes.iter_mut() {
            if degree[*rep] == degree[item] && are_twins(family, *rep, item) {
                members.insert(item);
                continue 'items;
            }
        }
        classes.push((item, ItemSet(1 << item)));
    }
    classes.into_iter().map(|(_, members)| members).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, d: usize, lists: &[&[usize]]) -> CandidateFamily {
        CandidateFamily::from_item_lists(n, d, lists).unwrap()
    }

    #[test]
    fn swap_relabelling_gives_equal_keys() {
        let a = fam(3, 1, &[&[0], &[1]]);
        let b = fam(3, 1, &[&[1], &[2]]);
        assert_eq!(canonical_key(&a), canonical_key(&b));
        assert_eq!(canonical_key(&a), canonical_key(&a));
    }

    #[test]
    fn disjoint_pairs_differ_from_overlapping_pairs() {
        let a = fam(4, 2, &[&[0, 1], &[2, 3]]);
        let b = fam(4, 2, &[&[0, 1], &[0, 2]]);
        assert_ne!(canonical_key(&a), canonical_key(&b));
    }

    #[test]
    fn initial_family_is_one_twin_class() {
        let f = CandidateFamily::initial(7, 3).unwrap();
        assert_eq!(twin_classes(&f), vec![ItemSet::full(7)]);
        assert!(canonical_key(&f).is_relabelled());
    }

    #[test]
    fn twin_classes_of_a_filtered_family() {
        // Defective pair among {0,1,2,3}: {0,1} tested contaminated.
        let f = CandidateFamily::initial(4, 1)
            .unwrap()
            .filter(ItemSet(0b0011), crate::Outcome::Contaminated);
        let classes = twin_classes(&f);
        assert_eq!(classes, vec![ItemSet(0b0011), ItemSet(0b1100)]);
    }

    #[test]
    fn cycle_needs_individualisation() {
        // Edges of a 6-cycle: vertex-transitive, but adjacent vertices are
        // not twins, so refinement alone cannot settle the labelling.
        let cycle = fam(
            6,
            2,
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[4, 5], &[0, 5]],
        );
        let relabelled = fam(
            6,
            2,
            &[&[0, 2], &[2, 4], &[4, 1], &[1, 3], &[3, 5], &[5, 0]],
        );
        let two_triangles = fam(
            6,
            2,
            &[&[0, 1], &[1, 2], &[0, 2], &[3, 4], &[4, 5], &[3, 5]],
        );
        let kc = canonical_key(&cycle);
        assert!(kc.is_relabelled());
        assert_eq!(kc, canonical_key(&relabelled));
        // Same refinement colours (2-regular), different structure.
        assert_ne!(kc, canonical_key(&two_triangles));
    }
}
