//! Items, pools, test outcomes and candidate families.
//!
//! Items are the integers `0..n` with `n <= 64`, so every subset of the
//! population fits in a single `u64`. A [`CandidateFamily`] is the set of
//! defective sets that are still consistent with everything observed so far.

use std::fmt;

use thiserror::Error;

use crate::canon::{self, CanonicalKey};

/// Largest supported population.
pub const MAX_ITEMS: usize = 64;

/// Families are materialised eagerly; refuse anything larger than this.
pub const MAX_FAMILY_LEN: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("population of {0} items exceeds the supported maximum of 64")]
    TooManyItems(usize),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("item {item} is out of range for a population of {n}")]
    ItemOutOfRange { item: usize, n: usize },
    #[error("pool {pool} has {got} items but the instance requires exactly {expected}")]
    PoolSize {
        pool: ItemSet,
        got: usize,
        expected: usize,
    },
    #[error("pool {0} is empty or covers the whole population")]
    TrivialPool(ItemSet),
    #[error("candidate {candidate} does not have exactly {d} members")]
    CandidateSize { candidate: ItemSet, d: usize },
    #[error("candidate family is empty")]
    EmptyFamily,
    #[error("C({n},{d}) candidates is too many to enumerate")]
    FamilyTooLarge { n: usize, d: usize },
}

/// A set of items, stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemSet(pub u64);

/// The subset submitted to a single test.
pub type Pool = ItemSet;

impl ItemSet {
    pub const EMPTY: ItemSet = ItemSet(0);

    /// All items of a population of size `n`.
    pub fn full(n: usize) -> Self {
        ItemSet(full_mask(n))
    }

    pub fn from_items<I: IntoIterator<Item = usize>>(n: usize, items: I) -> Result<Self, Error> {
        if n > MAX_ITEMS {
            return Err(Error::TooManyItems(n));
        }
        let mut mask = 0u64;
        for item in items {
            if item >= n {
                return Err(Error::ItemOutOfRange { item, n });
            }
            mask |= 1 << item;
        }
        Ok(ItemSet(mask))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, item: usize) -> bool {
        item < MAX_ITEMS && self.0 >> item & 1 == 1
    }

    pub fn insert(&mut self, item: usize) {
        self.0 |= 1 << item;
    }

    pub fn union(self, other: ItemSet) -> ItemSet {
        ItemSet(self.0 | other.0)
    }

    pub fn intersects(self, other: ItemSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Complement within a population of size `n`.
    pub fn complement(self, n: usize) -> ItemSet {
        ItemSet(!self.0 & full_mask(n))
    }

    /// Whether every member is below `n`.
    pub fn fits(self, n: usize) -> bool {
        self.0 & !full_mask(n) == 0
    }

    /// Members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let item = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(item)
            }
        })
    }

    /// The outcome of testing this pool when `defectives` is the true set.
    pub fn outcome_against(self, defectives: ItemSet) -> Outcome {
        if self.intersects(defectives) {
            Outcome::Contaminated
        } else {
            Outcome::Pure
        }
    }
}

impl fmt::Display for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, item) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{item}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Result of a single test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    /// The pool holds at least one defective item.
    Contaminated,
    /// The pool holds no defective item.
    Pure,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Contaminated, Outcome::Pure];

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Contaminated => "contaminated",
            Outcome::Pure => "pure",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Checked version of [`ItemSet::outcome_against`].
pub fn pool_outcome(n: usize, pool: Pool, defectives: ItemSet) -> Result<Outcome, Error> {
    for set in [pool, defectives] {
        if let Some(item) = ItemSet(set.0 & !full_mask(n)).iter().next() {
            return Err(Error::ItemOutOfRange { item, n });
        }
    }
    Ok(pool.outcome_against(defectives))
}

/// Which pools may be tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PoolSize {
    /// Every pool has exactly this many items.
    Fixed(usize),
    /// Any nonempty proper subset of the population.
    Unrestricted,
}

/// A `(d, n)` problem together with the pool-size rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Instance {
    pub n: usize,
    pub d: usize,
    pub pools: PoolSize,
}

impl Instance {
    pub fn fixed(n: usize, d: usize, k: usize) -> Result<Self, Error> {
        Self::new(n, d, PoolSize::Fixed(k))
    }

    pub fn unrestricted(n: usize, d: usize) -> Result<Self, Error> {
        Self::new(n, d, PoolSize::Unrestricted)
    }

    pub fn new(n: usize, d: usize, pools: PoolSize) -> Result<Self, Error> {
        if n > MAX_ITEMS {
            return Err(Error::TooManyItems(n));
        }
        if n == 0 {
            return Err(Error::InvalidInstance("population must be nonempty".into()));
        }
        if d > n {
            return Err(Error::InvalidInstance(format!("d = {d} exceeds n = {n}")));
        }
        if let PoolSize::Fixed(k) = pools {
            if k > n {
                return Err(Error::InvalidInstance(format!("k = {k} exceeds n = {n}")));
            }
        }
        Ok(Instance { n, d, pools })
    }

    /// Pool size, or `None` in unrestricted mode.
    pub fn k(&self) -> Option<usize> {
        match self.pools {
            PoolSize::Fixed(k) => Some(k),
            PoolSize::Unrestricted => None,
        }
    }

    pub fn is_fixed(&self) -> bool {
        matches!(self.pools, PoolSize::Fixed(_))
    }

    /// Checks that `pool` may be tested in this instance.
    pub fn check_pool(&self, pool: Pool) -> Result<(), Error> {
        if let Some(item) = ItemSet(pool.0 & !full_mask(self.n)).iter().next() {
            return Err(Error::ItemOutOfRange { item, n: self.n });
        }
        match self.pools {
            PoolSize::Fixed(k) if pool.len() != k => Err(Error::PoolSize {
                pool,
                got: pool.len(),
                expected: k,
            }),
            PoolSize::Fixed(_) => Ok(()),
            PoolSize::Unrestricted if pool.is_empty() || pool.len() == self.n => {
                Err(Error::TrivialPool(pool))
            }
            PoolSize::Unrestricted => Ok(()),
        }
    }

    /// Whether some legal pool contains one of `a`, `b` and avoids the other.
    pub fn separates(&self, a: ItemSet, b: ItemSet) -> bool {
        let n = self.n;
        let one_way = |inside: ItemSet, avoid: ItemSet| {
            let room = n - avoid.len();
            let hits = ItemSet(inside.0 & !avoid.0).len();
            if hits == 0 {
                return false;
            }
            match self.pools {
                PoolSize::Fixed(k) => k >= 1 && k <= room,
                // a single item of inside \ avoid is a proper subset
                PoolSize::Unrestricted => n >= 2,
            }
        };
        one_way(a, b) || one_way(b, a)
    }

    pub fn initial_family(&self) -> Result<CandidateFamily, Error> {
        CandidateFamily::initial(self.n, self.d)
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pools {
            PoolSize::Fixed(k) => write!(f, "M^[{k}]({},{})", self.d, self.n),
            PoolSize::Unrestricted => write!(f, "M({},{})", self.d, self.n),
        }
    }
}

/// `C(n, r)` or `None` on overflow.
pub fn binomial(n: u64, r: u64) -> Option<u64> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

/// All `size`-subsets of `0..n` in increasing mask order (Gosper's hack).
pub fn subsets_of_size(n: usize, size: usize) -> impl Iterator<Item = ItemSet> {
    let limit: u128 = 1u128 << n.min(MAX_ITEMS);
    let mut next: Option<u128> = if size > n {
        None
    } else {
        Some((1u128 << size) - 1)
    };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let low = cur & cur.wrapping_neg();
            let ripple = cur + low;
            let succ = (((ripple ^ cur) >> 2) / low) | ripple;
            (succ < limit).then_some(succ)
        };
        Some(ItemSet(cur as u64))
    })
}

/// The defective sets still consistent with the history, as a sorted,
/// deduplicated list of masks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CandidateFamily {
    n: usize,
    d: usize,
    masks: Vec<u64>,
}

impl CandidateFamily {
    /// Every `d`-subset of `0..n`.
    pub fn initial(n: usize, d: usize) -> Result<Self, Error> {
        if n > MAX_ITEMS {
            return Err(Error::TooManyItems(n));
        }
        if d > n {
            return Err(Error::InvalidInstance(format!("d = {d} exceeds n = {n}")));
        }
        match binomial(n as u64, d as u64) {
            Some(c) if c <= MAX_FAMILY_LEN => {}
            _ => return Err(Error::FamilyTooLarge { n, d }),
        }
        let masks = subsets_of_size(n, d).map(ItemSet::mask).collect();
        Ok(CandidateFamily { n, d, masks })
    }

    /// Builds a family from explicit candidates, checking sizes and range.
    pub fn from_sets<I>(n: usize, d: usize, sets: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = ItemSet>,
    {
        if n > MAX_ITEMS {
            return Err(Error::TooManyItems(n));
        }
        let mut masks = Vec::new();
        for set in sets {
            if let Some(item) = ItemSet(set.0 & !full_mask(n)).iter().next() {
                return Err(Error::ItemOutOfRange { item, n });
            }
            if set.len() != d {
                return Err(Error::CandidateSize { candidate: set, d });
            }
            masks.push(set.0);
        }
        masks.sort_unstable();
        masks.dedup();
        Ok(CandidateFamily { n, d, masks })
    }

    /// Convenience for tests and examples: candidates as item lists.
    pub fn from_item_lists(n: usize, d: usize, lists: &[&[usize]]) -> Result<Self, Error> {
        let sets = lists
            .iter()
            .map(|items| ItemSet::from_items(n, items.iter().copied()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_sets(n, d, sets)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn iter(&self) -> impl Iterator<Item = ItemSet> + '_ {
        self.masks.iter().map(|&m| ItemSet(m))
    }

    pub fn contains(&self, set: ItemSet) -> bool {
        self.masks.binary_search(&set.0).is_ok()
    }

    /// The candidates `S` for which testing `pool` yields `outcome`.
    pub fn filter(&self, pool: Pool, outcome: Outcome) -> CandidateFamily {
        let want = outcome == Outcome::Contaminated;
        let masks = self
            .masks
            .iter()
            .copied()
            .filter(|m| (m & pool.0 != 0) == want)
            .collect();
        CandidateFamily {
            n: self.n,
            d: self.d,
            masks,
        }
    }

    /// `(contaminated side, pure side)` of testing `pool`.
    pub fn split(&self, pool: Pool) -> (CandidateFamily, CandidateFamily) {
        let (hit, miss): (Vec<u64>, Vec<u64>) = self.masks.iter().partition(|&&m| m & pool.0 != 0);
        (
            CandidateFamily {
                n: self.n,
                d: self.d,
                masks: hit,
            },
            CandidateFamily {
                n: self.n,
                d: self.d,
                masks: miss,
            },
        )
    }

    /// Number of candidates on the contaminated side of `pool`.
    pub fn contaminated_count(&self, pool: Pool) -> usize {
        self.masks.iter().filter(|&&m| m & pool.0 != 0).count()
    }

    /// Whether both outcomes of testing `pool` remain possible.
    pub fn is_informative(&self, pool: Pool) -> bool {
        let hits = self.contaminated_count(pool);
        hits > 0 && hits < self.masks.len()
    }

    /// Exactly one candidate is left.
    pub fn is_solved(&self) -> Result<bool, Error> {
        if self.masks.is_empty() {
            Err(Error::EmptyFamily)
        } else {
            Ok(self.masks.len() == 1)
        }
    }

    /// The unique remaining candidate, if solved.
    pub fn solution(&self) -> Option<ItemSet> {
        match self.masks.as_slice() {
            [only] => Some(ItemSet(*only)),
            _ => None,
        }
    }

    /// Items that belong to at least one candidate.
    pub fn possibly_defective(&self) -> ItemSet {
        ItemSet(self.masks.iter().fold(0, |acc, m| acc | m))
    }

    /// Items that belong to every candidate.
    pub fn surely_defective(&self) -> ItemSet {
        if self.masks.is_empty() {
            return ItemSet::EMPTY;
        }
        ItemSet(self.masks.iter().fold(full_mask(self.n), |acc, m| acc & m))
    }

    /// Items that belong to no candidate: proven pure by the history.
    pub fn known_pure(&self) -> ItemSet {
        self.possibly_defective().complement(self.n)
    }

    /// Items whose status is still open.
    pub fn undetermined(&self) -> ItemSet {
        ItemSet(self.possibly_defective().0 & !self.surely_defective().0)
    }

    /// Key shared by families that are equal up to relabelling of items.
    pub fn canonical_key(&self) -> Result<CanonicalKey, Error> {
        if self.masks.is_empty() {
            return Err(Error::EmptyFamily);
        }
        Ok(canon::canonical_key(self))
    }

    /// Applies the item permutation `perm` (item `i` becomes `perm[i]`).
    pub fn relabel(&self, perm: &[usize]) -> CandidateFamily {
        let mut masks: Vec<u64> = self
            .masks
            .iter()
            .map(|&m| ItemSet(m).iter().fold(0u64, |acc, i| acc | 1 << perm[i]))
            .collect();
        masks.sort_unstable();
        CandidateFamily {
            n: self.n,
            d: self.d,
            masks,
        }
    }
}

impl fmt::Debug for CandidateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CandidateFamily(n={}, d={}, ", self.n, self.d)?;
        f.debug_list().entries(self.iter()).finish()?;
        f.write_str(")")
    }
}
