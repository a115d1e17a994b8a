// Closed forms next to solver values for one defective with pools of size k.
//
// $ cargo run --release --example closed_forms
//  n  k  formula              solver
//  5  4  3 (lower-bound)      4
// ...

use grouptest::formulas::{pairs_upper_bound, single_defective_fixed, two_defectives_pairs};
use grouptest::{exact_value, Instance, SolveConfig};

fn main() {
    let config = SolveConfig::default();
    println!(" n  k  formula              solver");
    for (n, k) in [(5, 4), (6, 4), (4, 3), (7, 5), (9, 2), (12, 4), (12, 7)] {
        let formula = single_defective_fixed(n, k);
        let exact = exact_value(
            &Instance::fixed(n as usize, 1, k as usize).unwrap(),
            &config,
        )
        .unwrap();
        println!("{n:>2} {k:>2}  {:<20} {exact}", formula.to_string());
    }

    for n in [3, 4, 7, 10] {
        println!(
            "two defectives, pairs, n = {n}: {}",
            two_defectives_pairs(n).unwrap()
        );
    }
    println!("pairs, n = 12, d = 4: {}", pairs_upper_bound(12, 4));
    println!("pairs, n = 8, d = 4: {}", pairs_upper_bound(8, 4));
}
