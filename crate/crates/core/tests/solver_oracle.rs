//! The solver against an independent brute-force minimax and against
//! properties that hold for any correct value.

use std::collections::HashMap;

use grouptest::solver::{it_lower_bound, Solver};
use grouptest::{exact_value, CandidateFamily, Instance, ItemSet, PoolSize, SolveConfig, Value};
use proptest::prelude::*;

/// Minimax straight from the definition: bitmask lists, every pool, no
/// symmetry, memoised on the raw candidate list. `None` is infinity.
struct Brute {
    pools: Vec<u64>,
    memo: HashMap<Vec<u64>, Option<u64>>,
}

impl Brute {
    fn new(n: usize, sizes: impl Iterator<Item = usize>) -> Self {
        let sizes: Vec<usize> = sizes.collect();
        let pools = (0u64..1 << n)
            .filter(|p| sizes.contains(&(p.count_ones() as usize)))
            .collect();
        Brute {
            pools,
            memo: HashMap::new(),
        }
    }

    fn value(&mut self, cands: Vec<u64>) -> Option<u64> {
        if cands.len() <= 1 {
            return Some(0);
        }
        if let Some(v) = self.memo.get(&cands) {
            return *v;
        }
        let mut best: Option<u64> = None;
        for i in 0..self.pools.len() {
            let p = self.pools[i];
            let (hit, miss): (Vec<u64>, Vec<u64>) = cands.iter().partition(|&&c| c & p != 0);
            if hit.is_empty() || miss.is_empty() {
                continue;
            }
            let (Some(a), Some(b)) = (self.value(hit), self.value(miss)) else {
                continue;
            };
            let v = 1 + a.max(b);
            best = Some(best.map_or(v, |x: u64| x.min(v)));
        }
        self.memo.insert(cands, best);
        best
    }
}

fn initial(n: usize, d: usize) -> Vec<u64> {
    (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == d)
        .collect()
}

fn brute(inst: &Instance) -> Value {
    let n = inst.n;
    let mut b = match inst.pools {
        PoolSize::Fixed(k) => Brute::new(n, std::iter::once(k)),
        PoolSize::Unrestricted => Brute::new(n, 1..n),
    };
    b.value(initial(n, inst.d))
        .map_or(Value::Infinite, Value::Finite)
}

#[test]
fn agrees_with_brute_force_fixed() {
    for n in 1..=6 {
        for d in 0..=n {
            for k in 0..=n {
                let inst = Instance::fixed(n, d, k).unwrap();
                assert_eq!(
                    exact_value(&inst, &SolveConfig::default()).unwrap(),
                    brute(&inst),
                    "{inst}"
                );
            }
        }
    }
}

#[test]
fn agrees_with_brute_force_unrestricted() {
    for n in 1..=6 {
        for d in 0..=n {
            let inst = Instance::unrestricted(n, d).unwrap();
            assert_eq!(
                exact_value(&inst, &SolveConfig::default()).unwrap(),
                brute(&inst),
                "{inst}"
            );
        }
    }
}

#[test]
fn known_small_values() {
    let v =
        |n, d, k| exact_value(&Instance::fixed(n, d, k).unwrap(), &SolveConfig::default()).unwrap();
    assert_eq!(v(7, 2, 2), Value::Finite(5));
    assert_eq!(v(7, 1, 2), Value::Finite(4));
    assert_eq!(v(5, 2, 3), Value::Finite(9));
    assert_eq!(v(5, 1, 4), Value::Finite(4));
    assert_eq!(v(6, 1, 4), Value::Finite(3));
    // no pool of the allowed size separates two candidates
    assert_eq!(v(5, 2, 4), Value::Infinite);
    assert_eq!(v(6, 3, 0), Value::Infinite);
    assert_eq!(v(6, 0, 0), Value::Finite(0));
}

#[test]
fn plain_minimax_matches_pruned_search() {
    let plain = SolveConfig {
        pruning: false,
        ..SolveConfig::default()
    };
    for n in 1..=6 {
        for d in 0..=n {
            let pools = (0..=n).map(PoolSize::Fixed).chain([PoolSize::Unrestricted]);
            for pools in pools {
                let inst = Instance::new(n, d, pools).unwrap();
                assert_eq!(
                    exact_value(&inst, &plain).unwrap(),
                    exact_value(&inst, &SolveConfig::default()).unwrap(),
                    "{inst}"
                );
            }
        }
    }
}

#[test]
fn configurations_agree() {
    let configs = [
        SolveConfig::default(),
        SolveConfig {
            memo: false,
            ..SolveConfig::default()
        },
        SolveConfig {
            canonicalize: false,
            ..SolveConfig::default()
        },
        SolveConfig::default().with_threads(4),
    ];
    for n in 2..=7 {
        for d in 1..n {
            for k in 1..=n - d {
                let inst = Instance::fixed(n, d, k).unwrap();
                let values: Vec<Value> = configs
                    .iter()
                    .map(|c| exact_value(&inst, c).unwrap())
                    .collect();
                assert!(
                    values.windows(2).all(|w| w[0] == w[1]),
                    "{inst}: {values:?}"
                );
            }
        }
    }
}

#[test]
fn values_respect_bounds_and_domination() {
    for n in 2..=7 {
        for d in 1..n {
            let free = exact_value(
                &Instance::unrestricted(n, d).unwrap(),
                &SolveConfig::default(),
            )
            .unwrap();
            let counting = it_lower_bound(&CandidateFamily::initial(n, d).unwrap());
            assert!(free >= Value::Finite(counting));
            for k in 1..n {
                let inst = Instance::fixed(n, d, k).unwrap();
                let v = exact_value(&inst, &SolveConfig::default()).unwrap();
                assert!(v >= free, "{inst}: {v} < {free}");
                // finite exactly up to k = n - d
                assert_eq!(v.is_infinite(), k > n - d, "{inst}");
            }
        }
    }
}

#[test]
fn trees_realise_the_value() {
    for (n, d, k) in [(6, 2, 2), (7, 1, 3), (6, 1, 4), (5, 2, 3), (7, 3, 2)] {
        let inst = Instance::fixed(n, d, k).unwrap();
        let mut solver = Solver::new(inst, SolveConfig::default());
        let value = solver.value().unwrap();
        let tree = solver.tree().unwrap();
        assert_eq!(Value::Finite(tree.depth()), value, "{inst}");
        assert_eq!(
            tree.leaves() as u64,
            grouptest::family::binomial(n as u64, d as u64).unwrap()
        );
        let greedy = solver.greedy_tree().unwrap();
        assert!(Value::Finite(greedy.depth()) >= value);
    }
}

fn permutation(n: usize, seed: &[usize]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for (i, &s) in seed.iter().enumerate().take(n) {
        perm.swap(i, i + s % (n - i));
    }
    perm
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in all_permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn family(n: usize, d: usize, pick: u64) -> Option<CandidateFamily> {
    let sets: Vec<ItemSet> = initial(n, d)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| pick >> (i % 64) & 1 == 1)
        .map(|(_, m)| ItemSet(m))
        .collect();
    if sets.is_empty() {
        return None;
    }
    CandidateFamily::from_sets(n, d, sets).ok()
}

fn isomorphic(a: &CandidateFamily, b: &CandidateFamily) -> bool {
    a.len() == b.len() && all_permutations(a.n()).iter().any(|p| a.relabel(p) == *b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn key_is_invariant_under_relabelling(n in 2usize..=8, d in 1usize..=4, pick: u64, seed in prop::collection::vec(0usize..64, 8)) {
        prop_assume!(d < n);
        let Some(f) = family(n, d, pick) else { return Ok(()) };
        let g = f.relabel(&permutation(n, &seed));
        let (kf, kg) = (f.canonical_key().unwrap(), g.canonical_key().unwrap());
        if kf.is_relabelled() && kg.is_relabelled() {
            prop_assert_eq!(kf, kg);
        }
    }

    #[test]
    fn equal_keys_mean_isomorphic(n in 2usize..=5, d in 1usize..=3, a: u64, b: u64) {
        prop_assume!(d < n);
        let (Some(f), Some(g)) = (family(n, d, a), family(n, d, b)) else { return Ok(()) };
        let same = f.canonical_key().unwrap() == g.canonical_key().unwrap();
        let iso = isomorphic(&f, &g);
        prop_assert!(!same || iso, "equal keys for non-isomorphic families");
        // small families always get a relabelled key, so isomorphic ones collide
        if iso {
            prop_assert!(same);
        }
    }

    #[test]
    fn split_partitions_the_family(n in 2usize..=8, d in 1usize..=4, pick: u64, pool: u64) {
        prop_assume!(d < n);
        let Some(f) = family(n, d, pick) else { return Ok(()) };
        let pool = ItemSet(pool & ((1 << n) - 1));
        let (hit, miss) = f.split(pool);
        prop_assert_eq!(hit.len() + miss.len(), f.len());
        prop_assert!(hit.iter().all(|c| c.intersects(pool)));
        prop_assert!(miss.iter().all(|c| !c.intersects(pool)));
    }
}
