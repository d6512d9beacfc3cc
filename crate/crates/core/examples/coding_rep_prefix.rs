//! Builds a representation prefix with coding maps and checks it is ready
//! for coding.
//!
//! ```bash
//! cargo run -p uslkit --example coding_rep_prefix -- 2
//! ```

use uslkit::caps::Caps;
use uslkit::order::FiniteUslTop;
use uslkit::table::{build_rep_prefix, coding_pairs, verify_coding_ready, verify_rep_prefix};

fn main() {
    let depth: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1);
    let l = FiniteUslTop::diamond();
    let rep = build_rep_prefix(&l, depth, true, &Caps::default()).expect("diamond has two coatoms");
    for s in &rep.stages {
        println!("stage {s}: {} maps", s.len);
    }
    let c = rep.coding.as_ref().unwrap();
    println!("coding maps: {:?}", c.coding_set());
    for (x, y) in coding_pairs(&l) {
        println!("g({}, {}) = {:?} / {:?}", l.name(x), l.name(y), c.g(x, y, 0), c.g(x, y, 1));
    }
    println!("rep prefix verified: {}", verify_rep_prefix(&rep).passed());
    println!("coding ready: {}", verify_coding_ready(&rep).passed());
}
