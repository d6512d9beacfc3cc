//! Codes a bitstring into a branch through a uniform tree and decodes it
//! back from the branch.
//!
//! ```bash
//! cargo run -p uslkit --example encode_bits -- 10110
//! ```

use uslkit::caps::Caps;
use uslkit::forcing::{decode, encode_bits, UniformTreeSpec};
use uslkit::order::FiniteUslTop;
use uslkit::table::{build_rep_prefix, coding_pairs};

fn main() {
    let word = std::env::args().nth(1).unwrap_or_else(|| "1011".into());
    let bits: Vec<bool> = word.chars().map(|c| c == '1').collect();
    let l = FiniteUslTop::diamond();
    let rep = build_rep_prefix(&l, 1, true, &Caps::default()).unwrap();
    let t = UniformTreeSpec::identity(&rep, bits.len());
    let (x, y) = coding_pairs(&l)[0];
    let branch = encode_bits(&t, x, y, &bits).expect("tree is deep enough");
    println!("pair ({}, {}) branch {branch:?}", l.name(x), l.name(y));
    let back = decode(&rep, &branch, x, y).unwrap();
    let shown: String = back.iter().map(|&b| if b { '1' } else { '0' }).collect();
    println!("decoded {shown}");
    assert_eq!(back, bits);
}
