// Play pairwise-d2 against the worst adversary and against one truth,
// printing every test.
//
// $ cargo run --release --example adversary_trace

use grouptest::evaluator::{simulate, worst_case_tests};
use grouptest::strategies::{by_name, PairwiseTwo};
use grouptest::{Instance, ItemSet};

fn main() {
    let inst = Instance::fixed(5, 2, 2).unwrap();
    let s = by_name("pairwise-d2", inst).unwrap();

    let report = worst_case_tests(s.as_ref(), &inst).unwrap();
    println!(
        "worst branch of {inst} ({} branches):",
        report.branches_explored
    );
    for (pool, outcome) in &report.worst_trace {
        println!("  test {pool} -> {}", outcome.as_str());
    }

    let truth = ItemSet::from_items(5, [0, 2]).unwrap();
    let run = simulate(s.as_ref(), &inst, truth).unwrap();
    println!("truthful run for {truth}:");
    for (pool, outcome) in &run.tests {
        println!("  test {pool} -> {}", outcome.as_str());
    }
    println!("  concluded {}", run.concluded);

    // what the pair phase learned
    let mut p = PairwiseTwo::new(inst).unwrap();
    for &(pool, outcome) in run.tests.iter().take(2) {
        grouptest::Strategy::observe(&mut p, pool, outcome);
    }
    println!("after the pairs: {:?}", p.state());
}
