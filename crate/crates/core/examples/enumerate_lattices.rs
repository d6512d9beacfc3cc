//! Counts USL^⊤ isomorphism classes by size and prints the small ones.
//!
//! ```bash
//! cargo run -p uslkit --example enumerate_lattices -- 7
//! ```

use std::time::Instant;

use uslkit::caps::Budget;
use uslkit::order::enumerate_usl_top;
use uslkit::order::text::write_structure;

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(6);
    let start = Instant::now();
    let result = enumerate_usl_top(n, &mut Budget::unlimited()).expect("unbounded budget");
    for (i, count) in result.counts().iter().enumerate() {
        println!("size {:>2}: {count} classes", i + 1);
    }
    println!("({:.2?})", start.elapsed());
    for (i, u) in result.by_size.iter().take(4).flatten().enumerate() {
        print!("{}", write_structure(&format!("L{i}"), u));
    }
}
