//! Adaptive testing strategies.
//!
//! A strategy is a deterministic decision procedure: after each observed
//! `(pool, outcome)` pair it either asks for another pool or concludes the
//! defective set. Every strategy here tracks the candidate family and
//! concludes as soon as it is a singleton, so phases can be cut short but
//! never lengthened. Ties are always broken towards the lowest item index.

use thiserror::Error;

use crate::family::{
    self, subsets_of_size, CandidateFamily, Instance, ItemSet, Outcome, Pool, PoolSize,
};
use crate::formulas::{ceil_log2, padded_halving_applies};

/// Stable identifiers, as accepted by [`by_name`].
pub const NAMES: [&str; 6] = [
    "individual",
    "complement",
    "halving",
    "halving-padded",
    "pairwise-d2",
    "pairwise-general",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),
    #[error("{strategy} does not apply to {instance}: {reason}")]
    NotApplicable {
        strategy: &'static str,
        instance: String,
        reason: String,
    },
    #[error("padded halving needs n >= max(2k - 2^(ceil(log2 k) - 1), k + 2^(ceil(log2 k) - 2)); got n = {n}, k = {k}")]
    HalvingConditionNotMet { n: usize, k: usize },
    #[error("{0} has no solution: no pool of the allowed size can separate candidates")]
    Unsolvable(String),
    #[error("no item is known to be pure yet")]
    NoPureItem,
    #[error("the observed outcomes are inconsistent with every candidate")]
    Inconsistent,
    #[error(transparent)]
    Family(#[from] family::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Test(Pool),
    Conclude(ItemSet),
}

pub trait Strategy: Send {
    fn name(&self) -> &'static str;

    fn instance(&self) -> &Instance;

    /// The next step given everything observed so far.
    fn decide(&mut self) -> Result<Decision, StrategyError>;

    fn observe(&mut self, pool: Pool, outcome: Outcome);

    /// Snapshot for branching exploration.
    fn box_clone(&self) -> Box<dyn Strategy>;
}

impl Clone for Box<dyn Strategy> {
    fn clone(&self) -> Self {
        self.box_clone()
    }
}

/// Builds the named strategy for `instance`.
pub fn by_name(name: &str, instance: Instance) -> Result<Box<dyn Strategy>, StrategyError> {
    Ok(match name {
        "individual" => Box::new(Individual::new(instance)?),
        "complement" => Box::new(ComplementEnumeration::new(instance)?),
        "halving" => Box::new(Halving::new(instance)?),
        "halving-padded" => Box::new(PaddedHalving::new(instance)?),
        "pairwise-d2" => Box::new(PairwiseTwo::new(instance)?),
        "pairwise-general" => Box::new(PairwiseGeneral::new(instance)?),
        other => return Err(StrategyError::UnknownStrategy(other.to_string())),
    })
}

/// Candidate family plus history, shared by all strategies.
#[derive(Debug, Clone)]
struct Tracker {
    instance: Instance,
    family: CandidateFamily,
    history: Vec<(Pool, Outcome)>,
}

impl Tracker {
    fn new(instance: Instance) -> Result<Self, StrategyError> {
        Ok(Tracker {
            family: instance.initial_family()?,
            instance,
            history: Vec::new(),
        })
    }

    fn observe(&mut self, pool: Pool, outcome: Outcome) {
        self.family = self.family.filter(pool, outcome);
        self.history.push((pool, outcome));
    }

    /// `Some(Conclude)` once a single candidate is left.
    fn settled(&self) -> Result<Option<Decision>, StrategyError> {
        match self.family.is_solved() {
            Ok(true) => Ok(self.family.solution().map(Decision::Conclude)),
            Ok(false) => Ok(None),
            Err(_) => Err(StrategyError::Inconsistent),
        }
    }

    fn lowest_pure(&self) -> Result<usize, StrategyError> {
        self.family
            .known_pure()
            .iter()
            .next()
            .ok_or(StrategyError::NoPureItem)
    }
}

fn not_applicable(
    strategy: &'static str,
    instance: &Instance,
    reason: impl Into<String>,
) -> StrategyError {
    StrategyError::NotApplicable {
        strategy,
        instance: instance.to_string(),
        reason: reason.into(),
    }
}

fn require_fixed(
    strategy: &'static str,
    instance: &Instance,
    k: usize,
) -> Result<(), StrategyError> {
    match instance.pools {
        PoolSize::Fixed(got) if got == k => Ok(()),
        _ => Err(not_applicable(
            strategy,
            instance,
            format!("requires pools of size {k}"),
        )),
    }
}

fn require_proper_d(strategy: &'static str, instance: &Instance) -> Result<(), StrategyError> {
    if instance.d == 0 || instance.d >= instance.n {
        return Err(not_applicable(strategy, instance, "requires 0 < d < n"));
    }
    Ok(())
}

/// Singleton pools `{0}, {1}, …` in order; `n − 1` tests in the worst case.
#[derive(Debug, Clone)]
pub struct Individual {
    tracker: Tracker,
}

impl Individual {
    pub fn new(instance: Instance) -> Result<Self, StrategyError> {
        require_fixed("individual", &instance, 1)?;
        require_proper_d("individual", &instance)?;
        Ok(Individual {
            tracker: Tracker::new(instance)?,
        })
    }
}

impl Strategy for Individual {
    fn name(&self) -> &'static str {
        "individual"
    }

    fn instance(&self) -> &Instance {
        &self.tracker.instance
    }

    fn decide(&mut self) -> Result<Decision, StrategyError> {
        if let Some(done) = self.tracker.settled()? {
            return Ok(done);
        }
        let next = self.tracker.history.len();
        Ok(Decision::Test(ItemSet(1 << next)))
    }

    fn observe(&mut self, pool: Pool, outcome: Outcome) {
        self.tracker.observe(pool, outcome);
    }

    fn box_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Pools of size `n − d` are pure only for the complement of the defective
/// set; walk through them in mask order until one is pure or a single
/// untested pool is left. `C(n, d) − 1` tests in the worst case.
#[derive(Debug, Clone)]
pub struct ComplementEnumeration {
    tracker: Tracker,
    pools: Vec<Pool>,
}

impl ComplementEnumeration {
    pub fn new(instance: Instance) -> Result<Self, StrategyError> {
        require_proper_d("complement", &instance)?;
        require_fixed("complement", &instance, instance.n - instance.d)?;
        let tracker = Tracker::new(instance)?;
        let pools = subsets_of_size(instance.n, instance.n - instance.d).collect();
        Ok(ComplementEnumeration { tracker, pools })
    }
}

impl Strategy for ComplementEnumeration {
    fn name(&self) -> &'static str {
        "complement"
    }

    fn instance(&self) -> &Instance {
        &self.tracker.instance
    }

    fn decide(&mut self) -> Result<Decision, StrategyError> {
        if let Some(done) = self.tracker.settled()? {
            return Ok(done);
        }
        let pool = self.pools[self.tracker.history.len()];
        Ok(Decision::Test(pool))
    }

    fn observe(&mut self, pool: Pool, outcome: Outcome) {
        self.tracker.observe(pool, outcome);
    }

    fn box_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Size of the next halving pool for a block of `m` candidates: the largest
/// power of two below `m`, i.e. `2^(⌈log₂ m⌉ − 1)`.
pub fn halving_size(m: usize) -> usize {
    if m <= 1 {
        0
    } else {
        1 << (ceil_log2(m as u64) - 1)
    }
}

/// Binary search for a single defective with pools of any size.
#[derive(Debug, Clone)]
pub struct Halving {
    tracker: Tracker,
}

impl Halving {
    pub fn new(instance: Instance) -> Result<Self, StrategyError> {
        if instance.d != 1 {
            return Err(not_applicable("halving", &instance, "requires d = 1"));
        }
        if instance.is_fixed() {
            return Err(not_applicable(
                "halving",
                &instance,
                "requires unrestricted pools",
            ));
        }
        Ok(Halving {
            tracker: Tracker::new(instance)?,
        })
    }
}

impl Strategy for Halving {
    fn name(&self) -> &'static str {
        "halving"
    }

    fn instance(&self) -> &Instance {
        &self.tracker.instance
    }

    fn decide(&mut self) -> Result<Decision, StrategyError> {
        if let Some(done) = self.tracker.settled()? {
            return Ok(done);
        }
        let block = self.tracker.family.possibly_defective();
        let take = halving_size(block.len());
        Ok(Decision::Test(ItemSet(
            block.iter().take(take).fold(0, |acc, i| acc | 1 << i),
        )))
    }

    fn observe(&mut self, pool: Pool, outcome: Outcome) {
        self.tracker.observe(pool, outcome);
    }

    fn box_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Shape of a padded-halving run for one defective and pools of size `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalvingPlan {
    /// Disjoint pools tested up front: `⌈n/k⌉ − 2`.
    pub initial_pool_count: usize,
    /// Items left when all of them test pure: `n − (⌈n/k⌉ − 2)·k`.
    pub residue: usize,
    /// `⌈log₂ k⌉ − 1`: the first halving pool inside a contaminated block
    /// has `2^t` items.
    pub t: i64,
}

impl HalvingPlan {
    pub fn new(n: usize, k: usize) -> Option<Self> {
        if k == 0 || k >= n {
            return None;
        }
        let initial_pool_count = n.div_ceil(k) - 2;
        Some(HalvingPlan {
            initial_pool_count,
            residue: n - initial_pool_count * k,
            t: ceil_log2(k as u64) as i64 - 1,
        })
    }
}

/// Disjoint `k`-pools first, then binary search inside the surviving block,
/// every halving pool topped up to `k` items with items already known pure.
///
/// When no disjoint pool is tested first (`⌈n/k⌉ = 2`) there may be no pure
/// items to pad with; the pool then takes more than half of the block and
/// the run can exceed the lower bound.
#[derive(Debug, Clone)]
pub struct PaddedHalving {
    tracker: Tracker,
    plan: HalvingPlan,
    k: usize,
}

impl PaddedHalving {
    pub fn new(instance: Instance) -> Result<Self, StrategyError> {
        if instance.d != 1 {
            return Err(not_applicable(
                "halving-padded",
                &instance,
                "requires d = 1",
            ));
        }
        let Some(k) = instance.k() else {
            return Err(not_applicable(
                "halving-padded",
                &instance,
                "requires fixed-size pools",
            ));
        };
        let plan = HalvingPlan::new(instance.n, k)
            .ok_or_else(|| not_applicable("halving-padded", &instance, "requires 0 < k < n"))?;
        if !padded_halving_applies(instance.n as u64, k as u64) {
            return Err(StrategyError::HalvingConditionNotMet { n: instance.n, k });
        }
        Ok(PaddedHalving {
            tracker: Tracker::new(instance)?,
            plan,
            k,
        })
    }

    pub fn plan(&self) -> HalvingPlan {
        self.plan
    }

    fn in_first_phase(&self) -> bool {
        let history = &self.tracker.history;
        history.len() < self.plan.initial_pool_count
            && history.iter().all(|&(_, o)| o == Outcome::Pure)
    }
}

impl Strategy for PaddedHalving {
    fn name(&self) -> &'static str {
        "halving-padded"
    }

    fn instance(&self) -> &Instance {
        &self.tracker.instance
    }

    fn decide(&mut self) -> Result<Decision, StrategyError> {
        if let Some(done) = self.tracker.settled()? {
            return Ok(done);
        }
        let k = self.k;
        if self.in_first_phase() {
            let start = self.tracker.history.len() * k;
            return Ok(Decision::Test(ItemSet(((1u64 << k) - 1) << start)));
        }
        let block = self.tracker.family.possibly_defective();
        let pure = self.tracker.family.known_pure();
        // Without enough pure items to pad (no disjoint pool came first),
        // extra block items fill the pool; k < n keeps it informative.
        let take = halving_size(block.len())
            .min(k)
            .max(k.saturating_sub(pure.len()));
        let pool = block
            .iter()
            .take(take)
            .chain(pure.iter().take(k - take))
            .fold(0u64, |acc, i| acc | 1 << i);
        Ok(Decision::Test(ItemSet(pool)))
    }

    fn observe(&mut self, pool: Pool, outcome: Outcome) {
        self.tracker.observe(pool, outcome);
    }

    fn box_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// What the pairwise strategies know after their disjoint-pair phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairwiseState {
    /// Initial pairs that tested contaminated; never more than `d`.
    pub contaminated_pairs: usize,
    pub known_pure: ItemSet,
}

/// Phase-one pair `i`: `{2i, 2i+1}`.
fn pair(i: usize) -> Pool {
    ItemSet(0b11 << (2 * i))
}

/// The pure helper item: the lowest item known pure when first needed, then
/// kept for the rest of the run.
fn helper(tracker: &Tracker, chosen: &mut Option<usize>) -> Result<usize, StrategyError> {
    if let Some(e) = *chosen {
        return Ok(e);
    }
    let e = tracker.lowest_pure()?;
    *chosen = Some(e);
    Ok(e)
}

/// Pairs `{x, e}` with `x` the lowest undetermined item and `e` the helper.
fn resolve_against_pure(tracker: &Tracker, e: usize) -> Result<Decision, StrategyError> {
    let x = tracker
        .family
        .undetermined()
        .iter()
        .next()
        .ok_or(StrategyError::Inconsistent)?;
    Ok(Decision::Test(ItemSet(1 << x | 1 << e)))
}

fn pairwise_state(tracker: &Tracker, pairs: usize) -> PairwiseState {
    let contaminated_pairs = tracker
        .history
        .iter()
        .take(pairs)
        .filter(|&&(_, o)| o == Outcome::Contaminated)
        .count();
    PairwiseState {
        contaminated_pairs,
        known_pure: tracker.family.known_pure(),
    }
}

/// Two defectives, pools of two: `⌊n/2⌋` disjoint pairs, then at most two
/// tests against a pure item. `⌊n/2⌋ + 2` tests in the worst case, `n ≥ 5`.
#[derive(Debug, Clone)]
pub struct PairwiseTwo {
    tracker: Tracker,
    helper: Option<usize>,
}

impl PairwiseTwo {
    pub fn new(instance: Instance) -> Result<Self, StrategyError> {
        require_fixed("pairwise-d2", &instance, 2)?;
        if instance.d != 2 {
            return Err(not_applicable("pairwise-d2", &instance, "requires d = 2"));
        }
        match instance.n {
            0..=3 => Err(StrategyError::Unsolvable(instance.to_string())),
            4 => Err(not_applicable(
                "pairwise-d2",
                &instance,
                "n = 4 has pools of size n - d; use complement",
            )),
            _ => Ok(PairwiseTwo {
                tracker: Tracker::new(instance)?,
                helper: None,
            }),
        }
    }

    pub fn state(&self) -> PairwiseState {
        pairwise_state(&self.tracker, self.tracker.instance.n / 2)
    }
}

impl Strategy for PairwiseTwo {
    fn name(&self) -> &'static str {
        "pairwise-d2"
    }

    fn instance(&self) -> &Instance {
        &self.tracker.instance
    }

    fn decide(&mut self) -> Result<Decision, StrategyError> {
        if let Some(done) = self.tracker.settled()? {
            return Ok(done);
        }
        let tested = self.tracker.history.len();
        if tested < self.tracker.instance.n / 2 {
            return Ok(Decision::Test(pair(tested)));
        }
        let e = helper(&self.tracker, &mut self.helper)?;
        resolve_against_pure(&self.tracker, e)
    }

    fn observe(&mut self, pool: Pool, outcome: Outcome) {
        self.tracker.observe(pool, outcome);
    }

    fn box_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Pools of two for `3 ≤ d ≤ ⌊n/2⌋ − 1`: disjoint pairs (plus the odd
/// leftover tested against a pure item), then the items of contaminated
/// pairs one at a time against a pure item. At most `⌈n/2⌉ + 2d − 3` tests.
#[derive(Debug, Clone)]
pub struct PairwiseGeneral {
    tracker: Tracker,
    helper: Option<usize>,
}

impl PairwiseGeneral {
    pub fn new(instance: Instance) -> Result<Self, StrategyError> {
        require_fixed("pairwise-general", &instance, 2)?;
        let (n, d) = (instance.n, instance.d);
        if d < 3 || d + 1 > n / 2 {
            return Err(not_applicable(
                "pairwise-general",
                &instance,
                "requires 3 <= d <= floor(n/2) - 1",
            ));
        }
        Ok(PairwiseGeneral {
            tracker: Tracker::new(instance)?,
            helper: None,
        })
    }

    pub fn state(&self) -> PairwiseState {
        pairwise_state(&self.tracker, self.tracker.instance.n / 2)
    }
}

impl Strategy for PairwiseGeneral {
    fn name(&self) -> &'static str {
        "pairwise-general"
    }

    fn instance(&self) -> &Instance {
        &self.tracker.instance
    }

    fn decide(&mut self) -> Result<Decision, StrategyError> {
        if let Some(done) = self.tracker.settled()? {
            return Ok(done);
        }
        let n = self.tracker.instance.n;
        let pairs = n / 2;
        let tested = self.tracker.history.len();
        if tested < pairs {
            return Ok(Decision::Test(pair(tested)));
        }
        let leftover = n - 1;
        let e = helper(&self.tracker, &mut self.helper)?;
        if n % 2 == 1 && tested == pairs && self.tracker.family.undetermined().contains(leftover) {
            return Ok(Decision::Test(ItemSet(1 << leftover | 1 << e)));
        }
        resolve_against_pure(&self.tracker, e)
    }

    fn observe(&mut self, pool: Pool, outcome: Outcome) {
        self.tracker.observe(pool, outcome);
    }

    fn box_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[usize]) -> ItemSet {
        ItemSet(items.iter().fold(0, |acc, i| acc | 1 << i))
    }

    /// Plays `strategy` against `truth`, returning the tests and conclusion.
    fn play(strategy: &mut dyn Strategy, truth: ItemSet) -> (Vec<(Pool, Outcome)>, ItemSet) {
        let mut tests = Vec::new();
        loop {
            match strategy.decide().unwrap() {
                Decision::Conclude(s) => return (tests, s),
                Decision::Test(p) => {
                    let o = p.outcome_against(truth);
                    tests.push((p, o));
                    strategy.observe(p, o);
                }
            }
        }
    }

    #[test]
    fn individual_stops_when_forced() {
        let mut s = Individual::new(Instance::fixed(2, 1, 1).unwrap()).unwrap();
        assert_eq!(s.decide().unwrap(), Decision::Test(set(&[0])));
        s.observe(set(&[0]), Outcome::Contaminated);
        assert_eq!(s.decide().unwrap(), Decision::Conclude(set(&[0])));
    }

    #[test]
    fn complement_concludes_on_first_pure_pool() {
        let mut s = ComplementEnumeration::new(Instance::fixed(3, 2, 1).unwrap()).unwrap();
        assert_eq!(s.decide().unwrap(), Decision::Test(set(&[0])));
        s.observe(set(&[0]), Outcome::Pure);
        assert_eq!(s.decide().unwrap(), Decision::Conclude(set(&[1, 2])));
    }

    #[test]
    fn halving_with_one_item_concludes_at_once() {
        let mut s = Halving::new(Instance::unrestricted(1, 1).unwrap()).unwrap();
        assert_eq!(s.decide().unwrap(), Decision::Conclude(set(&[0])));
    }

    #[test]
    fn halving_pool_sizes() {
        assert_eq!(halving_size(1), 0);
        assert_eq!(halving_size(2), 1);
        assert_eq!(halving_size(5), 4);
        assert_eq!(halving_size(8), 4);
        assert_eq!(halving_size(9), 8);
    }

    #[test]
    fn plan_matches_residue() {
        let plan = HalvingPlan::new(12, 4).unwrap();
        assert_eq!(
            plan,
            HalvingPlan {
                initial_pool_count: 1,
                residue: 8,
                t: 1
            }
        );
        let plan = HalvingPlan::new(6, 4).unwrap();
        assert_eq!((plan.initial_pool_count, plan.residue), (0, 6));
    }

    #[test]
    fn padded_halving_refuses_when_condition_fails() {
        let err = PaddedHalving::new(Instance::fixed(5, 1, 4).unwrap()).unwrap_err();
        assert_eq!(err, StrategyError::HalvingConditionNotMet { n: 5, k: 4 });
    }

    #[test]
    fn padded_halving_pools_are_padded_with_pure_items() {
        let inst = Instance::fixed(10, 1, 3).unwrap();
        for truth in 0..10 {
            let mut s = PaddedHalving::new(inst).unwrap();
            let mut family = inst.initial_family().unwrap();
            loop {
                match s.decide().unwrap() {
                    Decision::Conclude(c) => {
                        assert_eq!(c, set(&[truth]));
                        break;
                    }
                    Decision::Test(p) => {
                        assert_eq!(p.len(), 3);
                        // Items of the pool outside every candidate are padding.
                        let live = family.possibly_defective();
                        let padding = ItemSet(p.0 & !live.0);
                        assert!(!padding.intersects(live));
                        let o = p.outcome_against(set(&[truth]));
                        family = family.filter(p, o);
                        s.observe(p, o);
                    }
                }
            }
        }
    }

    #[test]
    fn pairwise_two_worked_example() {
        let mut s = PairwiseTwo::new(Instance::fixed(5, 2, 2).unwrap()).unwrap();
        let (tests, concluded) = play(&mut s, set(&[0, 3]));
        let expected = vec![
            (set(&[0, 1]), Outcome::Contaminated),
            (set(&[2, 3]), Outcome::Contaminated),
            (set(&[0, 4]), Outcome::Contaminated),
            (set(&[2, 4]), Outcome::Pure),
        ];
        assert_eq!(tests, expected);
        assert_eq!(concluded, set(&[0, 3]));
        assert_eq!(s.state().contaminated_pairs, 2);
    }

    #[test]
    fn pairwise_two_small_cases_are_rejected() {
        assert!(matches!(
            PairwiseTwo::new(Instance::fixed(3, 2, 2).unwrap()),
            Err(StrategyError::Unsolvable(_))
        ));
        assert!(matches!(
            PairwiseTwo::new(Instance::fixed(4, 2, 2).unwrap()),
            Err(StrategyError::NotApplicable { .. })
        ));
    }

    #[test]
    fn pairwise_general_one_defective_per_pair_branch() {
        // n = 8, d = 3 with defectives in three different pairs: 4 pair
        // tests plus one test per contaminated pair.
        let mut s = PairwiseGeneral::new(Instance::fixed(8, 3, 2).unwrap()).unwrap();
        let (tests, concluded) = play(&mut s, set(&[0, 2, 4]));
        assert_eq!(concluded, set(&[0, 2, 4]));
        assert_eq!(tests.len(), 4 + 3);
        assert_eq!(s.state().contaminated_pairs, 3);
    }

    #[test]
    fn pairwise_general_domain() {
        assert!(PairwiseGeneral::new(Instance::fixed(8, 4, 2).unwrap()).is_err());
        assert!(PairwiseGeneral::new(Instance::fixed(8, 2, 2).unwrap()).is_err());
        assert!(PairwiseGeneral::new(Instance::fixed(8, 3, 3).unwrap()).is_err());
        assert!(PairwiseGeneral::new(Instance::fixed(9, 3, 2).unwrap()).is_ok());
    }

    #[test]
    fn wrong_pool_size_is_rejected() {
        assert!(Individual::new(Instance::fixed(4, 1, 2).unwrap()).is_err());
        assert!(ComplementEnumeration::new(Instance::fixed(4, 1, 2).unwrap()).is_err());
        assert!(Halving::new(Instance::fixed(4, 1, 2).unwrap()).is_err());
        assert!(Halving::new(Instance::unrestricted(4, 2).unwrap()).is_err());
        assert!(matches!(
            by_name("bogus", Instance::fixed(4, 1, 1).unwrap()),
            Err(StrategyError::UnknownStrategy(_))
        ));
    }

    #[test]
    fn identical_histories_give_identical_decisions() {
        let inst = Instance::fixed(9, 3, 2).unwrap();
        let truth = set(&[1, 4, 8]);
        let mut a = by_name("pairwise-general", inst).unwrap();
        let mut b = a.clone();
        loop {
            let (da, db) = (a.decide().unwrap(), b.decide().unwrap());
            assert_eq!(da, db);
            match da {
                Decision::Conclude(_) => break,
                Decision::Test(p) => {
                    let o = p.outcome_against(truth);
                    a.observe(p, o);
                    b.observe(p, o);
                }
            }
        }
    }
}
