// Families that differ only by relabelling items share a memo key.
//
// $ cargo run --release --example canonical_keys

use grouptest::canon::twin_classes;
use grouptest::{CandidateFamily, Outcome};

fn main() {
    let a = CandidateFamily::from_item_lists(6, 2, &[&[0, 1], &[1, 2], &[2, 3]]).unwrap();
    let b = CandidateFamily::from_item_lists(6, 2, &[&[5, 4], &[4, 3], &[3, 0]]).unwrap();
    let c = CandidateFamily::from_item_lists(6, 2, &[&[0, 1], &[0, 2], &[0, 3]]).unwrap();
    let (ka, kb, kc) = (
        a.canonical_key().unwrap(),
        b.canonical_key().unwrap(),
        c.canonical_key().unwrap(),
    );
    println!("path 0-1-2-3 vs path 5-4-3-0: same key {}", ka == kb);
    println!("path vs star: same key {}", ka == kc);

    // after one pure test on {0,1} of the full family, items 0 and 1 are
    // known pure and twins of each other
    let f = CandidateFamily::initial(6, 2)
        .unwrap()
        .filter(grouptest::ItemSet(0b11), Outcome::Pure);
    let classes: Vec<String> = twin_classes(&f).iter().map(|c| c.to_string()).collect();
    println!("{} candidates, twin classes {}", f.len(), classes.join(" "));
    println!("{:?}", f.canonical_key().unwrap());
}
