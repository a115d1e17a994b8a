//! Worst-case evaluation of a strategy against a consistent adversary.
//!
//! [`worst_case_tests`] walks the full outcome tree, following every outcome
//! that at least one remaining candidate allows. [`certify_sound`] replays
//! the strategy against every possible defective set instead. Both views
//! cover exactly the same branches, so they must agree.

use thiserror::Error;

use crate::family::{self, binomial, CandidateFamily, Instance, ItemSet, Outcome, Pool};
use crate::strategies::{Decision, Strategy, StrategyError};
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("strategy tested an illegal pool: {0}")]
    IllegalPool(family::Error),
    #[error("strategy concluded {0}, which is not a set of the right size")]
    IllegalConclusion(ItemSet),
    #[error("strategy did not finish within {0} tests")]
    DepthExceeded(u64),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Family(#[from] family::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationReport {
    pub worst_case: Value,
    /// Every leaf concluded the single remaining candidate.
    pub sound: bool,
    /// Lexicographically first branch (contaminated before pure) of maximal length.
    pub worst_trace: Vec<(Pool, Outcome)>,
    /// Number of leaves visited.
    pub branches_explored: u64,
}

/// Longest playout allowed before a strategy is declared broken.
pub fn depth_bound(instance: &Instance) -> u64 {
    binomial(instance.n as u64, instance.d as u64)
        .unwrap_or(u64::MAX)
        .max(1)
}

struct Walk {
    instance: Instance,
    bound: u64,
    worst: Option<u64>,
    worst_trace: Vec<(Pool, Outcome)>,
    trace: Vec<(Pool, Outcome)>,
    sound: bool,
    leaves: u64,
}

impl Walk {
    fn explore(
        &mut self,
        mut strategy: Box<dyn Strategy>,
        family: CandidateFamily,
    ) -> Result<(), EvalError> {
        let depth = self.trace.len() as u64;
        match strategy.decide()? {
            Decision::Conclude(set) => {
                check_conclusion(&self.instance, set)?;
                self.leaves += 1;
                if family.solution() != Some(set) {
                    self.sound = false;
                }
                if self.worst.is_none_or(|w| depth > w) {
                    self.worst = Some(depth);
                    self.worst_trace = self.trace.clone();
                }
                Ok(())
            }
            Decision::Test(pool) => {
                self.instance
                    .check_pool(pool)
                    .map_err(EvalError::IllegalPool)?;
                if depth >= self.bound {
                    return Err(EvalError::DepthExceeded(self.bound));
                }
                let (hit, miss) = family.split(pool);
                let branches: Vec<_> = [(Outcome::Contaminated, hit), (Outcome::Pure, miss)]
                    .into_iter()
                    .filter(|(_, f)| !f.is_empty())
                    .collect();
                let last = branches.len() - 1;
                let mut owned = Some(strategy);
                for (i, (outcome, child)) in branches.into_iter().enumerate() {
                    let mut next = if i == last {
                        owned.take().unwrap()
                    } else {
                        owned.as_ref().unwrap().box_clone()
                    };
                    next.observe(pool, outcome);
                    self.trace.push((pool, outcome));
                    self.explore(next, child)?;
                    self.trace.pop();
                }
                Ok(())
            }
        }
    }
}

fn check_conclusion(instance: &Instance, set: ItemSet) -> Result<(), EvalError> {
    if set.len() != instance.d || !set.fits(instance.n) {
        return Err(EvalError::IllegalConclusion(set));
    }
    Ok(())
}

/// Explores every consistent outcome sequence of `strategy` on `instance`.
pub fn worst_case_tests(
    strategy: &dyn Strategy,
    instance: &Instance,
) -> Result<EvaluationReport, EvalError> {
    let mut walk = Walk {
        instance: *instance,
        bound: depth_bound(instance),
        worst: None,
        worst_trace: Vec::new(),
        trace: Vec::new(),
        sound: true,
        leaves: 0,
    };
    walk.explore(strategy.box_clone(), instance.initial_family()?)?;
    Ok(EvaluationReport {
        worst_case: Value::Finite(walk.worst.unwrap_or(0)),
        sound: walk.sound,
        worst_trace: walk.worst_trace,
        branches_explored: walk.leaves,
    })
}

/// One truthful run of a strategy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Playout {
    pub tests: Vec<(Pool, Outcome)>,
    pub concluded: ItemSet,
}

/// Runs `strategy` answering every test truthfully for `truth`.
pub fn simulate(
    strategy: &dyn Strategy,
    instance: &Instance,
    truth: ItemSet,
) -> Result<Playout, EvalError> {
    let bound = depth_bound(instance);
    let mut s = strategy.box_clone();
    let mut tests = Vec::new();
    loop {
        match s.decide()? {
            Decision::Conclude(set) => {
                check_conclusion(instance, set)?;
                return Ok(Playout {
                    tests,
                    concluded: set,
                });
            }
            Decision::Test(pool) => {
                instance.check_pool(pool).map_err(EvalError::IllegalPool)?;
                if tests.len() as u64 >= bound {
                    return Err(EvalError::DepthExceeded(bound));
                }
                let outcome = pool.outcome_against(truth);
                s.observe(pool, outcome);
                tests.push((pool, outcome));
            }
        }
    }
}

/// Summary of truthful runs over every possible defective set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoundnessReport {
    pub sound: bool,
    pub max_tests: u64,
    /// Defective sets the strategy got wrong.
    pub failures: Vec<ItemSet>,
}

pub fn soundness_report(
    strategy: &dyn Strategy,
    instance: &Instance,
) -> Result<SoundnessReport, EvalError> {
    let mut report = SoundnessReport {
        sound: true,
        max_tests: 0,
        failures: Vec::new(),
    };
    for truth in instance.initial_family()?.iter() {
        let run = simulate(strategy, instance, truth)?;
        report.max_tests = report.max_tests.max(run.tests.len() as u64);
        if run.concluded != truth {
            report.sound = false;
            report.failures.push(truth);
        }
    }
    Ok(report)
}

/// Whether the strategy identifies every possible defective set.
pub fn certify_sound(strategy: &dyn Strategy, instance: &Instance) -> Result<bool, EvalError> {
    Ok(soundness_report(strategy, instance)?.sound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategies::by_name;

    #[test]
    fn individual_worst_case() {
        let inst = Instance::fixed(4, 1, 1).unwrap();
        let s = by_name("individual", inst).unwrap();
        let report = worst_case_tests(s.as_ref(), &inst).unwrap();
        assert_eq!(report.worst_case, Value::Finite(3));
        assert!(report.sound);
        assert_eq!(report.branches_explored, 4);
        // All but the last answer are pure on the longest branch, and the
        // first maximal branch in contaminated-first order ends contaminated.
        let outcomes: Vec<_> = report.worst_trace.iter().map(|&(_, o)| o).collect();
        assert_eq!(
            outcomes,
            vec![Outcome::Pure, Outcome::Pure, Outcome::Contaminated]
        );
    }

    #[test]
    fn halving_and_pairs() {
        let inst = Instance::unrestricted(8, 1).unwrap();
        let r = worst_case_tests(by_name("halving", inst).unwrap().as_ref(), &inst).unwrap();
        assert_eq!((r.worst_case, r.sound), (Value::Finite(3), true));

        let inst = Instance::fixed(6, 2, 2).unwrap();
        let r = worst_case_tests(by_name("pairwise-d2", inst).unwrap().as_ref(), &inst).unwrap();
        assert_eq!((r.worst_case, r.sound), (Value::Finite(5), true));
    }

    #[test]
    fn complement_is_sound() {
        let inst = Instance::fixed(4, 2, 2).unwrap();
        let s = by_name("complement", inst).unwrap();
        assert!(certify_sound(s.as_ref(), &inst).unwrap());
    }
}
