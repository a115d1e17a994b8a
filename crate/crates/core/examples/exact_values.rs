// Exact worst-case test counts for a few instances, fixed pool size and free.
//
// $ cargo run --release --example exact_values
// M^[2](2,3) = inf
// M^[2](2,4) = 5
// ...

use std::time::Instant;

use grouptest::{exact_value, Instance, SolveConfig};

fn main() {
    let instances = [
        Instance::fixed(3, 2, 2),
        Instance::fixed(4, 2, 2),
        Instance::fixed(9, 2, 2),
        Instance::fixed(6, 1, 4),
        Instance::fixed(5, 1, 4),
        Instance::fixed(7, 3, 2),
        Instance::unrestricted(8, 3),
    ];
    let config = SolveConfig::default();
    for inst in instances {
        let inst = inst.expect("valid instance");
        let start = Instant::now();
        let value = exact_value(&inst, &config).expect("no budget set");
        println!("{inst} = {value}  ({} ms)", start.elapsed().as_millis());
    }
}
