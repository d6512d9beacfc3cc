//! Tests inclusions of small lattices for being almost-end-extensions, and
//! asks for each base whether any extension inside a fixed candidate list is
//! one.

use uslkit::order::{is_almost_end_extension, ElementId, FiniteUslTop, SubstructureWitness};
use uslkit::sentence::decide_question1;

fn main() {
    let chain3 = FiniteUslTop::chain(3);
    let chain4 = FiniteUslTop::chain(4);
    let diamond = FiniteUslTop::diamond();

    // 0 < a < 1 inside 0 < m < a < 1: the new element sits under a
    let below = SubstructureWitness::new(chain3.clone(), chain4.clone(), vec![ElementId(0), ElementId(2), ElementId(3)])
        .unwrap();
    // 0 < a < 1 inside the diamond: the new element sits beside a
    let beside = SubstructureWitness::new(chain3.clone(), diamond.clone(), vec![ElementId(0), ElementId(1), ElementId(3)])
        .unwrap();
    for (label, w) in [("chain under a", &below), ("diamond beside a", &beside)] {
        println!("{label}: new {:?}, almost-end-extension {}", w.new_elements(), is_almost_end_extension(w));
    }
    println!("some candidate works: {}", decide_question1(&chain3, &[below, beside]));
}
