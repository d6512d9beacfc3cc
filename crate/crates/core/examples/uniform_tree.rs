//! Applies, restricts and transfers a uniform tree over a coding prefix.

use uslkit::caps::Caps;
use uslkit::forcing::{write_tree, UniformTreeSpec};
use uslkit::order::FiniteUslTop;
use uslkit::table::{build_rep_prefix, MapId};

fn main() {
    let rep = build_rep_prefix(&FiniteUslTop::diamond(), 1, true, &Caps::default()).unwrap();
    let t = UniformTreeSpec::identity(&rep, 3);
    println!("identity tree of depth {}: valid {}", t.depth(), t.validate().passed());

    let sigma = [MapId(1), MapId(2)];
    println!("T({sigma:?}) = {:?}", t.apply(&sigma).unwrap());
    let r = t.restrict(&[MapId(1)]).unwrap();
    println!("restricted to [1]: depth {}, T(2) = {:?}", r.depth(), r.apply(&[MapId(2)]).unwrap());
    // transfer swaps the root for another string of the same length
    let moved = r.transfer(&[MapId(3)]).unwrap();
    println!("transferred: T(2) = {:?}", moved.apply(&[MapId(2)]).unwrap());
    println!("respects congruences: {}", t.congruence_respecting().is_none());
    println!("strings of length 1: {}", t.strings(1).len());
    print!("{}", write_tree("t", "r", "diamond", &t));
}
