//! Closed forms and bounds for worst-case test counts.
//!
//! Every function here is pure integer arithmetic; `⌈log₂ m⌉` is computed
//! from leading zeros so powers of two land exactly. Cells a closed form
//! does not cover are reported with [`Status::OutOfDomain`], not as errors,
//! because tables routinely sweep across such cells.

use std::fmt;

use thiserror::Error;

use crate::family::binomial;
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("outside the domain of this formula: {0}")]
    Domain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Exact,
    LowerBound,
    UpperBound,
    Conjecture,
    Unsolvable,
    OutOfDomain,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Exact => "exact",
            Status::LowerBound => "lower-bound",
            Status::UpperBound => "upper-bound",
            Status::Conjecture => "conjecture",
            Status::Unsolvable => "unsolvable",
            Status::OutOfDomain => "out-of-domain",
        })
    }
}

/// A formula's verdict on one instance. Out-of-domain results carry no value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FormulaResult {
    value: Option<Value>,
    status: Status,
}

impl FormulaResult {
    pub fn new(status: Status, value: Value) -> Self {
        assert!(
            status != Status::OutOfDomain,
            "out-of-domain results carry no value"
        );
        FormulaResult {
            value: Some(value),
            status,
        }
    }

    pub fn out_of_domain() -> Self {
        FormulaResult {
            value: None,
            status: Status::OutOfDomain,
        }
    }

    pub fn exact(v: u64) -> Self {
        Self::new(Status::Exact, Value::Finite(v))
    }

    pub fn unsolvable() -> Self {
        Self::new(Status::Unsolvable, Value::Infinite)
    }

    pub fn value(&self) -> Option<Value> {
        self.value
    }

    pub fn status(&self) -> Status {
        self.status
    }
}

impl fmt::Display for FormulaResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Some(v) => write!(f, "{} ({})", v, self.status),
            None => write!(f, "{}", self.status),
        }
    }
}

/// `⌈log₂ m⌉`, with `⌈log₂ 0⌉ = ⌈log₂ 1⌉ = 0`.
pub fn ceil_log2(m: u64) -> u64 {
    if m <= 1 {
        0
    } else {
        u64::from(64 - (m - 1).leading_zeros())
    }
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// One defective, pools of any size: binary search, `⌈log₂ n⌉`.
pub fn single_defective_unrestricted(n: u64) -> Value {
    Value::Finite(ceil_log2(n))
}

/// Items left untested after `⌈n/k⌉ − 2` disjoint pools of size `k`.
pub fn residue_after_disjoint_pools(n: u64, k: u64) -> Option<u64> {
    (k > 0 && k < n).then(|| n - (ceil_div(n, k) - 2) * k)
}

/// Lower bound for one defective with pools of size `k`:
/// `⌈n/k⌉ − 2 + ⌈log₂ r⌉` with `r` the residue after the disjoint pools.
///
/// `None` unless `0 < k < n`.
pub fn single_defective_lower_bound(n: u64, k: u64) -> Option<u64> {
    let r = residue_after_disjoint_pools(n, k)?;
    Some(ceil_div(n, k) - 2 + ceil_log2(r))
}

/// Whether padded halving meets the lower bound:
/// `n ≥ max{2k − 2^(⌈log₂k⌉−1), k + 2^(⌈log₂k⌉−2)}`.
///
/// Both sides are scaled by 4 so the fractional powers at `k ≤ 2` stay
/// integral. False outside `0 < k < n`.
pub fn padded_halving_applies(n: u64, k: u64) -> bool {
    if k == 0 || k >= n {
        return false;
    }
    let c = ceil_log2(k);
    let four_n = 4 * n;
    four_n + (1 << (c + 1)) >= 8 * k && four_n >= 4 * k + (1 << c)
}

/// Whether the lower bound is attained: [`padded_halving_applies`], except
/// when no disjoint pool comes first (`⌈n/k⌉ = 2`) and `k` exceeds
/// `2^(⌈log₂ n⌉ − 1)`.
///
/// In that exception nothing is known pure before the first test, so the
/// first pool has `k` unpadded items. If it is contaminated, `k` candidates
/// remain and `⌈log₂ k⌉ = ⌈log₂ n⌉` more tests are needed: one more than the
/// bound. Smallest cases: `(n, k) = (4, 3), (7, 5), (8, 5), (8, 6)`.
pub fn padded_halving_tight(n: u64, k: u64) -> bool {
    if !padded_halving_applies(n, k) {
        return false;
    }
    let unpadded_start = n.div_ceil(k) == 2;
    !(unpadded_start && 1 << (ceil_log2(n) - 1) < k)
}

/// One defective with pools of size `k`: exact when the bound is attained
/// (see [`padded_halving_tight`]), otherwise the same number as a lower bound.
pub fn single_defective_fixed(n: u64, k: u64) -> FormulaResult {
    match single_defective_lower_bound(n, k) {
        None => FormulaResult::out_of_domain(),
        Some(bound) if padded_halving_tight(n, k) => FormulaResult::exact(bound),
        Some(bound) => FormulaResult::new(Status::LowerBound, Value::Finite(bound)),
    }
}

/// Two defectives tested in pairs: `inf` at `n = 3`, `5` at `n = 4`,
/// `⌊n/2⌋ + 2` from `n = 5` on.
pub fn two_defectives_pairs(n: u64) -> Result<FormulaResult, FormulaError> {
    match n {
        0..=2 => Err(FormulaError::Domain(format!("n = {n} < 3"))),
        3 => Ok(FormulaResult::unsolvable()),
        4 => Ok(FormulaResult::exact(5)),
        _ => Ok(FormulaResult::exact(n / 2 + 2)),
    }
}

fn pairs_domain(n: u64, d: u64) -> bool {
    d >= 3 && n / 2 >= 1 && d < n / 2
}

/// Upper bound `⌈n/2⌉ + 2d − 3` for pairs when `3 ≤ d ≤ ⌊n/2⌋ − 1`.
pub fn pairs_upper_bound(n: u64, d: u64) -> FormulaResult {
    if pairs_domain(n, d) {
        FormulaResult::new(
            Status::UpperBound,
            Value::Finite(ceil_div(n, 2) + 2 * d - 3),
        )
    } else {
        FormulaResult::out_of_domain()
    }
}

/// The conjectured exact value for pairs, equal to [`pairs_upper_bound`].
pub fn pairs_conjectured_value(n: u64, d: u64) -> Result<FormulaResult, FormulaError> {
    if !pairs_domain(n, d) {
        return Err(FormulaError::Domain(format!(
            "need 3 <= d <= floor(n/2) - 1, got n = {n}, d = {d}"
        )));
    }
    Ok(FormulaResult::new(
        Status::Conjecture,
        Value::Finite(ceil_div(n, 2) + 2 * d - 3),
    ))
}

/// Pools larger than `n − d` always test contaminated.
pub fn oversized_pools_unsolvable(n: u64, d: u64, k: u64) -> bool {
    d <= n && k > n - d
}

/// `C(n, d) − 1` tests with pools of size `n − d`. `None` unless `0 < d < n`.
pub fn complement_pools_value(n: u64, d: u64) -> Option<Value> {
    if d == 0 || d >= n {
        return None;
    }
    binomial(n, d).map(|c| Value::Finite(c - 1))
}

/// Cases needing no search: nothing to find (`d ∈ {0, n}`), or singleton
/// pools (`k = 1`, `n − 1` tests).
pub fn trivial_value(n: u64, d: u64, k: u64) -> FormulaResult {
    if d > n {
        FormulaResult::out_of_domain()
    } else if d == 0 || d == n {
        FormulaResult::exact(0)
    } else if k == 1 {
        FormulaResult::exact(n - 1)
    } else {
        FormulaResult::out_of_domain()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Float-free oracle: smallest `e` with `2^e >= m`.
    fn log2_by_doubling(m: u64) -> u64 {
        let mut e = 0;
        while (1u128 << e) < u128::from(m) {
            e += 1;
        }
        e
    }

    #[test]
    fn ceil_log2_matches_doubling() {
        for m in 0..5000 {
            assert_eq!(ceil_log2(m), log2_by_doubling(m), "m = {m}");
        }
        assert_eq!(ceil_log2(u64::MAX), 64);
        assert_eq!(ceil_log2(1 << 63), 63);
    }

    #[test]
    fn unrestricted_single() {
        assert_eq!(single_defective_unrestricted(8), Value::Finite(3));
        assert_eq!(single_defective_unrestricted(1), Value::Finite(0));
        assert_eq!(single_defective_unrestricted(5), Value::Finite(3));
    }

    #[test]
    fn single_defective_bound_examples() {
        assert_eq!(single_defective_lower_bound(6, 4), Some(3));
        assert_eq!(single_defective_lower_bound(7, 2), Some(4));
        assert_eq!(single_defective_lower_bound(5, 4), Some(3));
        assert_eq!(single_defective_lower_bound(12, 4), Some(4));
        assert_eq!(single_defective_lower_bound(4, 4), None);
        assert_eq!(single_defective_lower_bound(4, 0), None);
    }

    #[test]
    fn residue_stays_between_k_plus_one_and_2k() {
        for k in 1..30 {
            for n in k + 1..200 {
                let r = residue_after_disjoint_pools(n, k).unwrap();
                assert!(r > k && r <= 2 * k, "n={n} k={k} r={r}");
            }
        }
    }

    #[test]
    fn condition_examples() {
        assert!(padded_halving_applies(6, 4));
        assert!(!padded_halving_applies(5, 4));
        for k in 2..40 {
            assert!(padded_halving_applies(2 * k - 1, k), "k = {k}");
        }
        assert!(padded_halving_applies(3, 2));
        assert!(padded_halving_applies(2, 1));
    }

    /// Reference evaluation of the condition over rationals (denominator 4).
    #[test]
    fn condition_matches_rational_evaluation() {
        for k in 1..64u64 {
            let c = log2_by_doubling(k) as i64;
            let pow_quarters = |e: i64| -> i64 { (4.0 * 2f64.powi(e as i32)) as i64 };
            for n in k + 1..4 * k + 4 {
                let lhs = 4 * n as i64;
                let a = 8 * k as i64 - pow_quarters(c - 1);
                let b = 4 * k as i64 + pow_quarters(c - 2);
                assert_eq!(
                    padded_halving_applies(n, k),
                    lhs >= a && lhs >= b,
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn fixed_single_examples() {
        assert_eq!(single_defective_fixed(9, 2), FormulaResult::exact(5));
        assert_eq!(single_defective_fixed(6, 4), FormulaResult::exact(3));
        let weak = single_defective_fixed(5, 4);
        assert_eq!(weak.status(), Status::LowerBound);
        assert_eq!(weak.value(), Some(Value::Finite(3)));
        assert_eq!(single_defective_fixed(3, 3).status(), Status::OutOfDomain);
    }

    #[test]
    fn pairs_of_two() {
        assert_eq!(
            two_defectives_pairs(3).unwrap().value(),
            Some(Value::Infinite)
        );
        assert_eq!(two_defectives_pairs(4).unwrap(), FormulaResult::exact(5));
        assert_eq!(two_defectives_pairs(10).unwrap(), FormulaResult::exact(7));
        assert!(two_defectives_pairs(2).is_err());
    }

    #[test]
    fn pairs_general() {
        assert_eq!(pairs_upper_bound(8, 3).value(), Some(Value::Finite(7)));
        assert_eq!(pairs_upper_bound(12, 4).value(), Some(Value::Finite(11)));
        assert_eq!(pairs_upper_bound(8, 4).status(), Status::OutOfDomain);
        assert_eq!(pairs_upper_bound(8, 2).status(), Status::OutOfDomain);
        assert_eq!(pairs_upper_bound(8, 3).status(), Status::UpperBound);

        let conj = pairs_conjectured_value(8, 3).unwrap();
        assert_eq!(
            (conj.status(), conj.value()),
            (Status::Conjecture, Some(Value::Finite(7)))
        );
        assert_eq!(
            pairs_conjectured_value(9, 3).unwrap().value(),
            Some(Value::Finite(8))
        );
        assert_eq!(
            pairs_conjectured_value(10, 4).unwrap().value(),
            Some(Value::Finite(10))
        );
        assert!(pairs_conjectured_value(7, 3).is_err());
    }

    #[test]
    fn unsolvable_and_complement() {
        assert!(oversized_pools_unsolvable(5, 2, 4));
        assert!(!oversized_pools_unsolvable(5, 2, 3));
        assert!(oversized_pools_unsolvable(3, 2, 2));
        assert_eq!(complement_pools_value(4, 2), Some(Value::Finite(5)));
        assert_eq!(complement_pools_value(5, 1), Some(Value::Finite(4)));
        assert_eq!(complement_pools_value(5, 2), Some(Value::Finite(9)));
        assert_eq!(complement_pools_value(5, 0), None);
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(trivial_value(7, 0, 3), FormulaResult::exact(0));
        assert_eq!(trivial_value(7, 7, 3), FormulaResult::exact(0));
        assert_eq!(trivial_value(6, 2, 1), FormulaResult::exact(5));
        assert_eq!(trivial_value(6, 2, 2).status(), Status::OutOfDomain);
    }

    #[test]
    fn singleton_pools_cover_pairs_of_ones() {
        // With k = 2 the single-defective form collapses to ⌈n/2⌉.
        for n in 3..=64 {
            let r = single_defective_fixed(n, 2);
            assert_eq!(r, FormulaResult::exact(n.div_ceil(2)), "n = {n}");
        }
    }

    #[test]
    fn large_pools_satisfy_condition() {
        for k in 2..=16 {
            for n in 2 * k - 1..=4 * k {
                assert!(padded_halving_applies(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn tightness_exceptions() {
        let mut exceptions = Vec::new();
        for n in 3..=12 {
            for k in 2..n {
                if padded_halving_applies(n, k) && !padded_halving_tight(n, k) {
                    exceptions.push((n, k));
                }
            }
        }
        assert_eq!(exceptions, vec![(4, 3), (7, 5), (8, 5), (8, 6)]);
        assert_eq!(single_defective_fixed(4, 3).status(), Status::LowerBound);
        assert!(padded_halving_tight(6, 4));
        assert!(padded_halving_tight(12, 7));
    }
}
