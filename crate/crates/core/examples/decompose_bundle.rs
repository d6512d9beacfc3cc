//! Splits an almost-end-extension into a free part and a quotient part,
//! verifies the witness, and writes it in the bundle format.

use uslkit::extension::{decompose, read_bundle, write_bundle};
use uslkit::order::{ElementId, FiniteUslTop, SubstructureWitness};

fn main() {
    // the two-element lattice inside the diamond
    let w = SubstructureWitness::new(FiniteUslTop::chain(2), FiniteUslTop::diamond(), vec![ElementId(0), ElementId(3)])
        .unwrap();
    let d = decompose(&w).expect("an almost-end-extension decomposes");
    let checks = d.verify();
    println!("verified: {}", checks.passed());
    let text = write_bundle(&d);
    print!("{text}");
    let back = read_bundle(&text).expect("bundle reads back");
    println!("re-read and verified: {}", back.verify().passed());
}
