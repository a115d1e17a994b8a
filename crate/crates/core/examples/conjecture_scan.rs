// Exact values for pools of two against ceil(n/2) + 2d - 3.
//
// $ cargo run --release --example conjecture_scan -- 3 10 60
// M^[2](3,8) = 7, conjectured 7: agree
// ...

use std::time::Duration;

use grouptest::verify::scan_pairs_conjecture;
use grouptest::SolveConfig;

fn main() {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer"))
        .collect();
    let d = args.first().copied().unwrap_or(3) as usize;
    let n_max = args.get(1).copied().unwrap_or(9) as usize;
    let budget = Duration::from_secs(args.get(2).copied().unwrap_or(30));
    for row in scan_pairs_conjecture(d, n_max, budget, &SolveConfig::default()) {
        println!("{row}");
    }
}
