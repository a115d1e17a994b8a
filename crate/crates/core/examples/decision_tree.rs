// An optimal decision tree for one defective among 7 with pools of two,
// then replayed as a strategy to check it.
//
// $ cargo run --release --example decision_tree

use grouptest::evaluator::worst_case_tests;
use grouptest::solver::{Solver, TreeStrategy};
use grouptest::{Instance, SolveConfig};

fn main() {
    let inst = Instance::fixed(7, 1, 2).unwrap();
    let mut solver = Solver::new(inst, SolveConfig::default());
    let tree = solver.tree().unwrap();
    println!("{inst}: depth {}, {} leaves", tree.depth(), tree.leaves());
    print!("{tree}");

    let report = worst_case_tests(&TreeStrategy::new(inst, tree), &inst).unwrap();
    println!(
        "replayed: worst case {}, sound {}",
        report.worst_case, report.sound
    );
    println!("search: {:?}", solver.stats());
}
