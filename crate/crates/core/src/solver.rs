//! Exact worst-case test counts by minimax search over candidate families.
//!
//! The candidate family is a sufficient statistic for optimal play, so the
//! search state is the family alone and values are memoised under its
//! [`CanonicalKey`]. The default search answers "can this family be solved
//! within `b` tests?" and deepens `b` from an adversary lower bound; pools
//! are enumerated up to swaps of twin items and deduplicated by the split
//! they induce. [`SolveConfig::pruning`] switches to a plain min-max over
//! every legal pool, which is slow but shares none of those shortcuts.

use std::collections::HashSet;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use dashmap::DashMap;
use rayon::prelude::*;
use thiserror::Error;

use crate::canon::{twin_classes, CanonicalKey};
use crate::family::{
    self, subsets_of_size, CandidateFamily, Instance, ItemSet, Outcome, Pool, PoolSize,
};
use crate::formulas::ceil_log2;
use crate::strategies::{Decision, Strategy, StrategyError};
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    /// The wall-clock budget ran out; the value lies in `lower..=upper`.
    #[error("budget exceeded; value is between {lower} and {upper}")]
    BudgetExceeded { lower: u64, upper: Value },
    #[error("{0} has no decision tree: the value is infinite")]
    Unsolvable(String),
    #[error(transparent)]
    Family(#[from] family::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveConfig {
    pub memo: bool,
    pub canonicalize: bool,
    pub budget: Option<Duration>,
    /// Worker threads for the root level; 1 searches serially.
    pub threads: usize,
    /// Bounded decision search (default) or plain min-max over all pools.
    pub pruning: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            memo: true,
            canonicalize: true,
            budget: None,
            threads: 1,
            pruning: true,
        }
    }
}

impl SolveConfig {
    pub fn with_budget(mut self, budget: Duration) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn parallel_root(&self) -> bool {
        self.threads > 1
    }
}

/// `⌈log₂ |family|⌉`: each test has two outcomes.
pub fn it_lower_bound(family: &CandidateFamily) -> u64 {
    ceil_log2(family.len() as u64)
}

/// Whether some sequence of legal tests always identifies the defective set.
///
/// All candidates have the same size, so whether two of them can be told
/// apart by a legal pool does not depend on which two they are; a family is
/// solvable iff it is a singleton or that one pair can be separated.
pub fn solvable(instance: &Instance, family: &CandidateFamily) -> bool {
    match family.masks() {
        [] | [_] => true,
        [a, b, ..] => instance.separates(ItemSet(*a), ItemSet(*b)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecisionTree {
    Test {
        pool: Pool,
        on_contaminated: Box<DecisionTree>,
        on_pure: Box<DecisionTree>,
    },
    Conclude(ItemSet),
}

impl DecisionTree {
    pub fn depth(&self) -> u64 {
        match self {
            DecisionTree::Conclude(_) => 0,
            DecisionTree::Test {
                on_contaminated,
                on_pure,
                ..
            } => 1 + on_contaminated.depth().max(on_pure.depth()),
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            DecisionTree::Conclude(_) => 1,
            DecisionTree::Test {
                on_contaminated,
                on_pure,
                ..
            } => on_contaminated.leaves() + on_pure.leaves(),
        }
    }

    fn render(&self, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match self {
            DecisionTree::Conclude(set) => out.push_str(&format!("{pad}conclude {set}\n")),
            DecisionTree::Test {
                pool,
                on_contaminated,
                on_pure,
            } => {
                out.push_str(&format!("{pad}test {pool}\n"));
                out.push_str(&format!("{pad}- contaminated:\n"));
                on_contaminated.render(indent + 1, out);
                out.push_str(&format!("{pad}- pure:\n"));
                on_pure.render(indent + 1, out);
            }
        }
    }
}

impl fmt::Display for DecisionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.render(0, &mut out);
        f.write_str(&out)
    }
}

/// Plays a [`DecisionTree`] as a strategy.
#[derive(Debug, Clone)]
pub struct TreeStrategy {
    instance: Instance,
    tree: Arc<DecisionTree>,
    path: Vec<Outcome>,
}

impl TreeStrategy {
    pub fn new(instance: Instance, tree: DecisionTree) -> Self {
        TreeStrategy {
            instance,
            tree: Arc::new(tree),
            path: Vec::new(),
        }
    }
}

impl Strategy for TreeStrategy {
    fn name(&self) -> &'static str {
        "decision-tree"
    }

    fn instance(&self) -> &Instance {
        &self.instance
    }

    fn decide(&mut self) -> Result<Decision, StrategyError> {
        let mut node = self.tree.as_ref();
        for outcome in &self.path {
            node = match (node, outcome) {
                (
                    DecisionTree::Test {
                        on_contaminated, ..
                    },
                    Outcome::Contaminated,
                ) => on_contaminated,
                (DecisionTree::Test { on_pure, .. }, Outcome::Pure) => on_pure,
                (DecisionTree::Conclude(_), _) => return Err(StrategyError::Inconsistent),
            };
        }
        Ok(match node {
            DecisionTree::Conclude(set) => Decision::Conclude(*set),
            DecisionTree::Test { pool, .. } => Decision::Test(*pool),
        })
    }

    fn observe(&mut self, _pool: Pool, outcome: Outcome) {
        self.path.push(outcome);
    }

    fn box_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

#[derive(Debug, Clone, Copy)]
struct Bounds {
    lo: u64,
    hi: u64,
}

struct Split {
    pool: Pool,
    hit: Child,
    miss: Child,
}

/// One side of a split; its memo key is computed on first use.
struct Child {
    family: CandidateFamily,
    key: OnceLock<Option<CanonicalKey>>,
}

impl Child {
    fn new(family: CandidateFamily) -> Self {
        Child {
            family,
            key: OnceLock::new(),
        }
    }

    fn len(&self) -> usize {
        self.family.len()
    }
}

/// Search statistics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: u64,
    pub memo_entries: usize,
}

/// A reusable search for one instance; the memo persists across calls.
pub struct Solver {
    instance: Instance,
    config: SolveConfig,
    memo: DashMap<CanonicalKey, Bounds>,
    exact: DashMap<CanonicalKey, Value>,
    nodes: AtomicU64,
    deadline: Option<Instant>,
}

impl Solver {
    pub fn new(instance: Instance, config: SolveConfig) -> Self {
        Solver {
            instance,
            config,
            memo: DashMap::new(),
            exact: DashMap::new(),
            nodes: AtomicU64::new(0),
            deadline: None,
        }
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn stats(&self) -> SolveStats {
        SolveStats {
            nodes: self.nodes.load(Ordering::Relaxed),
            memo_entries: self.memo.len() + self.exact.len(),
        }
    }

    /// The worst-case number of tests of an optimal algorithm.
    pub fn value(&mut self) -> Result<Value, SolveError> {
        self.deadline = self.config.budget.map(|b| Instant::now() + b);
        let root = self.instance.initial_family()?;
        if !solvable(&self.instance, &root) {
            return Ok(Value::Infinite);
        }
        if !self.config.pruning {
            return self.with_pool(|s| s.minimax(&root));
        }
        self.with_pool(|s| s.deepen(&root)).map(Value::Finite)
    }

    /// An optimal decision tree; its depth equals [`Solver::value`].
    pub fn tree(&mut self) -> Result<DecisionTree, SolveError> {
        let value = self.value()?;
        let Value::Finite(depth) = value else {
            return Err(SolveError::Unsolvable(self.instance.to_string()));
        };
        let root = self.instance.initial_family()?;
        self.build(&root, depth)
    }

    /// A decision tree that always tests the most balanced pool. Its depth
    /// bounds the value from above.
    pub fn greedy_tree(&self) -> Result<DecisionTree, SolveError> {
        let root = self.instance.initial_family()?;
        if !solvable(&self.instance, &root) {
            return Err(SolveError::Unsolvable(self.instance.to_string()));
        }
        Ok(self.greedy(&root))
    }

    fn greedy(&self, family: &CandidateFamily) -> DecisionTree {
        if let Some(set) = family.solution() {
            return DecisionTree::Conclude(set);
        }
        let split = self.splits(family).swap_remove(0);
        DecisionTree::Test {
            pool: split.pool,
            on_contaminated: Box::new(self.greedy(&split.hit.family)),
            on_pure: Box::new(self.greedy(&split.miss.family)),
        }
    }

    fn with_pool<T: Send>(&self, f: impl FnOnce(&Self) -> T + Send) -> T {
        if self.config.parallel_root() {
            rayon::ThreadPoolBuilder::new()
                .num_threads(self.config.threads)
                .build()
                .expect("thread pool")
                .install(|| f(self))
        } else {
            f(self)
        }
    }

    fn key(&self, family: &CandidateFamily) -> CanonicalKey {
        if self.config.canonicalize {
            family.canonical_key().expect("nonempty family")
        } else {
            CanonicalKey::Raw {
                n: family.n(),
                d: family.d(),
                masks: family.masks().to_vec(),
            }
        }
    }

    /// Memo key for a family worth memoising.
    fn memo_key(&self, family: &CandidateFamily) -> Option<CanonicalKey> {
        (self.config.memo && family.len() > 2).then(|| self.key(family))
    }

    fn child_key<'c>(&self, child: &'c Child) -> Option<&'c CanonicalKey> {
        child
            .key
            .get_or_init(|| self.memo_key(&child.family))
            .as_ref()
    }

    fn check_deadline(&self, lower: u64, upper: u64) -> Result<(), SolveError> {
        match self.deadline {
            Some(t) if Instant::now() >= t => Err(SolveError::BudgetExceeded {
                lower,
                upper: Value::Finite(upper),
            }),
            _ => Ok(()),
        }
    }

    /// Legal pools, one per twin-symmetry class, deduplicated by the split
    /// they induce and ordered by balance.
    fn splits(&self, family: &CandidateFamily) -> Vec<Split> {
        let classes = twin_classes(family);
        let sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
        let members: Vec<Vec<usize>> = classes.iter().map(|c| c.iter().collect()).collect();
        let n = family.n();
        let (min_size, max_size) = match self.instance.pools {
            PoolSize::Fixed(k) => (k, k),
            PoolSize::Unrestricted => (1, n - 1),
        };

        let mut out = Vec::new();
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut counts = vec![0usize; classes.len()];
        loop {
            let total: usize = counts.iter().sum();
            if total >= min_size && total <= max_size {
                let pool = counts
                    .iter()
                    .zip(&members)
                    .flat_map(|(&c, m)| m[..c].iter().copied())
                    .fold(0u64, |acc, i| acc | 1 << i);
                let pool = ItemSet(pool);
                let (hit, miss) = family.split(pool);
                if !hit.is_empty() && !miss.is_empty() && seen.insert(hit.masks().to_vec()) {
                    out.push(Split {
                        pool,
                        hit: Child::new(hit),
                        miss: Child::new(miss),
                    });
                }
            }
            // odometer over the class counts
            let mut i = 0;
            loop {
                if i == counts.len() {
                    out.sort_by_key(|s| (s.hit.len().abs_diff(s.miss.len()), s.pool));
                    return out;
                }
                if counts[i] < sizes[i] {
                    counts[i] += 1;
                    break;
                }
                counts[i] = 0;
                i += 1;
            }
        }
    }

    /// Adversary bound: always answer one way while that removes at most
    /// `step` candidates per test, then fall back to the counting bound.
    fn adversary_bound(&self, family: &CandidateFamily, splits: &[Split]) -> u64 {
        let m = family.len() as u64;
        let it = ceil_log2(m);
        let max_hit = splits.iter().map(|s| s.hit.len()).max().unwrap_or(0) as u64;
        let max_miss = splits.iter().map(|s| s.miss.len()).max().unwrap_or(0) as u64;
        let chain = |step: u64| -> u64 {
            if step == 0 {
                return 0;
            }
            (0..=(m - 1) / step)
                .map(|t| t + ceil_log2(m - t * step))
                .max()
                .unwrap_or(0)
        };
        it.max(chain(max_hit)).max(chain(max_miss))
    }

    fn known_lo(&self, child: &Child) -> u64 {
        let it = it_lower_bound(&child.family);
        match self.child_key(child) {
            Some(key) => self.memo.get(key).map_or(it, |b| b.lo.max(it)),
            None => it,
        }
    }

    fn record(&self, key: CanonicalKey, lo: u64, hi: u64) {
        if !self.config.memo {
            return;
        }
        self.memo
            .entry(key)
            .and_modify(|b| {
                b.lo = b.lo.max(lo);
                b.hi = b.hi.min(hi);
            })
            .or_insert(Bounds { lo, hi });
    }

    fn deepen(&self, root: &CandidateFamily) -> Result<u64, SolveError> {
        let m = root.len() as u64;
        if m <= 1 {
            return Ok(0);
        }
        let upper = self.greedy(root).depth();
        let splits = self.splits(root);
        let mut budget = self.adversary_bound(root, &splits);
        while budget < upper {
            if self.root_within(&splits, budget, upper)? {
                return Ok(budget);
            }
            budget += 1;
        }
        Ok(upper)
    }

    fn root_within(&self, splits: &[Split], budget: u64, upper: u64) -> Result<bool, SolveError> {
        let try_split = |s: &Split| self.split_within(s, budget - 1);
        let found = if self.config.parallel_root() {
            splits
                .par_iter()
                .map(try_split)
                .find_any(|r| !matches!(r, Ok(false)))
        } else {
            splits
                .iter()
                .map(try_split)
                .find(|r| !matches!(r, Ok(false)))
        };
        match found {
            Some(Err(SolveError::BudgetExceeded { .. })) => Err(SolveError::BudgetExceeded {
                lower: budget,
                upper: Value::Finite(upper),
            }),
            Some(r) => r,
            None => Ok(false),
        }
    }

    fn split_within(&self, split: &Split, budget: u64) -> Result<bool, SolveError> {
        let (big, small) = if split.hit.len() >= split.miss.len() {
            (&split.hit, &split.miss)
        } else {
            (&split.miss, &split.hit)
        };
        if self.known_lo(big) > budget || self.known_lo(small) > budget {
            return Ok(false);
        }
        Ok(self.within(big, budget)? && self.within(small, budget)?)
    }

    /// Whether `family` can be solved with at most `budget` more tests.
    fn within(&self, child: &Child, budget: u64) -> Result<bool, SolveError> {
        let family = &child.family;
        let m = family.len() as u64;
        if m <= 1 {
            return Ok(true);
        }
        if budget == 0 || (budget < 64 && m > 1 << budget) {
            return Ok(false);
        }
        // every informative test removes at least one candidate
        if m - 1 <= budget {
            return Ok(true);
        }
        self.nodes.fetch_add(1, Ordering::Relaxed);
        let key = self.child_key(child);
        if let Some(b) = key.and_then(|k| self.memo.get(k).map(|b| *b)) {
            if b.lo > budget {
                return Ok(false);
            }
            if b.hi <= budget {
                return Ok(true);
            }
        }
        self.check_deadline(budget, m - 1)?;

        let splits = self.splits(family);
        let lo = self.adversary_bound(family, &splits);
        if lo > budget {
            if let Some(k) = key {
                self.record(k.clone(), lo, m - 1);
            }
            return Ok(false);
        }
        for split in &splits {
            if self.split_within(split, budget - 1)? {
                if let Some(k) = key {
                    self.record(k.clone(), lo, budget);
                }
                return Ok(true);
            }
        }
        if let Some(k) = key {
            self.record(k.clone(), budget + 1, m - 1);
        }
        Ok(false)
    }

    fn build(&self, family: &CandidateFamily, budget: u64) -> Result<DecisionTree, SolveError> {
        if let Some(set) = family.solution() {
            return Ok(DecisionTree::Conclude(set));
        }
        for split in self.splits(family) {
            if self.within(&split.hit, budget - 1)? && self.within(&split.miss, budget - 1)? {
                return Ok(DecisionTree::Test {
                    pool: split.pool,
                    on_contaminated: Box::new(self.build(&split.hit.family, budget - 1)?),
                    on_pure: Box::new(self.build(&split.miss.family, budget - 1)?),
                });
            }
        }
        unreachable!("family certified solvable within {budget} tests has no witness split")
    }

    fn legal_pools(&self) -> Box<dyn Iterator<Item = Pool>> {
        let n = self.instance.n;
        match self.instance.pools {
            PoolSize::Fixed(k) => Box::new(subsets_of_size(n, k)),
            PoolSize::Unrestricted => {
                Box::new((1..n).flat_map(move |size| subsets_of_size(n, size)))
            }
        }
    }

    /// Plain min-max over every legal pool; infinite when no pool helps.
    fn minimax(&self, family: &CandidateFamily) -> Result<Value, SolveError> {
        if family.len() <= 1 {
            return Ok(Value::Finite(0));
        }
        self.nodes.fetch_add(1, Ordering::Relaxed);
        let key = self.config.memo.then(|| self.key(family));
        if let Some(v) = key.as_ref().and_then(|k| self.exact.get(k).map(|v| *v)) {
            return Ok(v);
        }
        self.check_deadline(0, family.len() as u64 - 1)?;
        let mut best = Value::Infinite;
        for pool in self.legal_pools() {
            let (hit, miss) = family.split(pool);
            if hit.is_empty() || miss.is_empty() {
                continue;
            }
            let worse = self.minimax(&hit)?.max(self.minimax(&miss)?);
            best = best.min(worse.succ());
        }
        if let Some(k) = key {
            self.exact.insert(k, best);
        }
        Ok(best)
    }
}

/// The worst-case number of tests of an optimal algorithm for `instance`.
pub fn exact_value(instance: &Instance, config: &SolveConfig) -> Result<Value, SolveError> {
    Solver::new(*instance, config.clone()).value()
}

/// An optimal decision tree for `instance`.
pub fn extract_tree(instance: &Instance, config: &SolveConfig) -> Result<DecisionTree, SolveError> {
    Solver::new(*instance, config.clone()).tree()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixed(n: usize, d: usize, k: usize) -> Value {
        exact_value(&Instance::fixed(n, d, k).unwrap(), &SolveConfig::default()).unwrap()
    }

    fn free(n: usize, d: usize) -> Value {
        exact_value(
            &Instance::unrestricted(n, d).unwrap(),
            &SolveConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn known_small_values() {
        assert_eq!(free(5, 2), Value::Finite(4));
        assert_eq!(free(6, 2), Value::Finite(5));
        assert_eq!(free(7, 2), Value::Finite(5));
        assert_eq!(fixed(3, 2, 2), Value::Infinite);
        assert_eq!(fixed(4, 2, 2), Value::Finite(5));
        assert_eq!(fixed(6, 1, 4), Value::Finite(3));
        assert_eq!(fixed(5, 1, 4), Value::Finite(4));
    }

    #[test]
    fn degenerate_instances() {
        assert_eq!(fixed(5, 0, 3), Value::Finite(0));
        assert_eq!(fixed(5, 5, 0), Value::Finite(0));
        assert_eq!(fixed(5, 2, 0), Value::Infinite);
        assert_eq!(fixed(5, 2, 5), Value::Infinite);
        assert_eq!(free(1, 1), Value::Finite(0));
    }

    #[test]
    fn small_trees() {
        let inst = Instance::fixed(2, 1, 1).unwrap();
        let tree = extract_tree(&inst, &SolveConfig::default()).unwrap();
        assert_eq!(
            tree,
            DecisionTree::Test {
                pool: ItemSet(0b01),
                on_contaminated: Box::new(DecisionTree::Conclude(ItemSet(0b01))),
                on_pure: Box::new(DecisionTree::Conclude(ItemSet(0b10))),
            }
        );
        let inst = Instance::fixed(4, 1, 1).unwrap();
        assert_eq!(
            extract_tree(&inst, &SolveConfig::default())
                .unwrap()
                .depth(),
            3
        );
        let inst = Instance::fixed(3, 2, 2).unwrap();
        assert!(matches!(
            extract_tree(&inst, &SolveConfig::default()),
            Err(SolveError::Unsolvable(_))
        ));
    }

    #[test]
    fn it_bound_examples() {
        let f = CandidateFamily::initial(5, 1).unwrap();
        assert_eq!(it_lower_bound(&f), 3);
        assert_eq!(it_lower_bound(&CandidateFamily::initial(8, 1).unwrap()), 3);
        assert_eq!(it_lower_bound(&CandidateFamily::initial(3, 0).unwrap()), 0);
    }

    #[test]
    fn zero_budget_reports_bracket() {
        let inst = Instance::fixed(8, 4, 3).unwrap();
        let config = SolveConfig::default().with_budget(Duration::ZERO);
        let greedy = Solver::new(inst, config.clone())
            .greedy_tree()
            .unwrap()
            .depth();
        match exact_value(&inst, &config) {
            Err(SolveError::BudgetExceeded { lower, upper }) => {
                assert!(lower >= ceil_log2(70) && lower < greedy);
                assert_eq!(upper, Value::Finite(greedy));
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn plain_minimax_agrees_on_tiny_grid() {
        let plain = SolveConfig {
            pruning: false,
            ..SolveConfig::default()
        };
        for n in 1..=5 {
            for d in 0..=n {
                for k in 0..=n {
                    let inst = Instance::fixed(n, d, k).unwrap();
                    let a = exact_value(&inst, &SolveConfig::default()).unwrap();
                    let b = exact_value(&inst, &plain).unwrap();
                    assert_eq!(a, b, "{inst}");
                }
            }
        }
    }
}
