//! Looks for splits of a decision table on a uniform tree and lists the
//! elements with none.

use uslkit::caps::Caps;
use uslkit::forcing::{find_splits, sp_meet_closed, sp_set, DecisionTable, UniformTreeSpec};
use uslkit::order::FiniteUslTop;
use uslkit::table::build_rep_prefix;

fn main() {
    let l = FiniteUslTop::diamond();
    let rep = build_rep_prefix(&l, 1, true, &Caps::default()).unwrap();
    let t = UniformTreeSpec::identity(&rep, 2);
    let q = DecisionTable::parse("decision default 0\nq 1: 1\nq 2 1: 1\nend\n").unwrap();
    let qf = |s: &[uslkit::table::MapId]| q.get(s);

    for y in l.elements() {
        let found = find_splits(&t, &qf, y, 1);
        match found.first() {
            Some(s) => println!("{}: split {:?} / {:?} at {}", l.name(y), s.sigma, s.tau, s.n),
            None => println!("{}: no split", l.name(y)),
        }
    }
    let sp = sp_set(&t, &qf, &[], 1).unwrap();
    let names: Vec<&str> = sp.iter().map(|&y| l.name(y)).collect();
    println!("sp: {}", names.join(" "));
    println!("meet-closed: {}", sp_meet_closed(&l, &sp).is_none());
}
