// Every named strategy on an instance it accepts, with its worst case.
//
// $ cargo run --release --example strategies
// individual         M^[1](2,6)     worst 5  sound true
// ...

use grouptest::evaluator::worst_case_tests;
use grouptest::strategies::by_name;
use grouptest::Instance;

fn main() {
    let runs = [
        ("individual", Instance::fixed(6, 2, 1)),
        ("complement", Instance::fixed(5, 2, 3)),
        ("halving", Instance::unrestricted(20, 1)),
        ("halving-padded", Instance::fixed(12, 1, 4)),
        ("halving-padded", Instance::fixed(9, 1, 2)),
        ("pairwise-d2", Instance::fixed(10, 2, 2)),
        ("pairwise-general", Instance::fixed(12, 4, 2)),
    ];
    for (name, inst) in runs {
        let inst = inst.unwrap();
        let s = by_name(name, inst).unwrap();
        let r = worst_case_tests(s.as_ref(), &inst).unwrap();
        println!(
            "{name:<18} {:<14} worst {:<2} sound {}",
            inst.to_string(),
            r.worst_case,
            r.sound
        );
    }

    // outside its range a strategy says why
    match by_name("halving-padded", Instance::fixed(5, 1, 4).unwrap()) {
        Ok(_) => unreachable!(),
        Err(e) => println!("halving-padded on M^[4](1,5): {e}"),
    }
}
