//! Builds a differentiated table for a distributive lattice and verifies it;
//! then drops the last map and shows which check breaks.

use uslkit::caps::Caps;
use uslkit::order::FiniteUslTop;
use uslkit::table::text::write_table;
use uslkit::table::{build_table, verify_table, UslTable};

fn main() {
    let l = FiniteUslTop::diamond();
    let t = build_table(&l, &Caps::default()).expect("the diamond is distributive");
    print!("{}", write_table("t", "diamond", &t, None));
    println!("verified: {}", verify_table(&t).passed());

    let mut maps = t.maps().to_vec();
    maps.pop();
    let short = UslTable::new(l, maps);
    match verify_table(&short).first_failure() {
        Some(v) => println!("without the last map: {v:?}"),
        None => println!("without the last map: still verifies"),
    }
}
