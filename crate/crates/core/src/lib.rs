//! Adaptive combinatorial group testing with pools of a fixed size.
//!
//! Exactly `d` of `n` items are defective and a test on a pool reports
//! whether it holds a defective. The crate provides:
//!
//! - [`family`]: items, pools, outcomes and candidate families,
//! - [`formulas`]: closed forms and bounds for the worst-case test count,
//! - [`strategies`]: executable testing algorithms,
//! - [`evaluator`]: exhaustive adversarial evaluation of a strategy,
//! - [`solver`]: exact minimax values and optimal decision trees,
//! - [`records`], [`verify`] and [`cli`]: tables, the result cache, the
//!   verification suite and the `grouptest` command line.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod canon;
pub mod cli;
pub mod evaluator;
pub mod family;
pub mod formulas;
pub mod records;
pub mod solver;
pub mod strategies;
pub mod value;
pub mod verify;

pub use canon::CanonicalKey;
pub use family::{CandidateFamily, Instance, ItemSet, Outcome, Pool, PoolSize};
pub use solver::{exact_value, extract_tree, DecisionTree, SolveConfig, SolveError};
pub use strategies::{by_name, Decision, Strategy};
pub use value::Value;
