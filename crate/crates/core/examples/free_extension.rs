//! Adjoins free generators below top and prints the resulting structure with
//! its embedding.
//!
//! ```bash
//! cargo run -p uslkit --example free_extension -- g h
//! ```

use uslkit::extension::free_extend;
use uslkit::order::text::write_structure;
use uslkit::order::FiniteUslTop;

fn main() {
    let mut gens: Vec<String> = std::env::args().skip(1).collect();
    if gens.is_empty() {
        gens.push("g".into());
    }
    let base = FiniteUslTop::diamond();
    let fe = free_extend(&base, &gens).expect("generator names are fresh");
    print!("{}", write_structure("free", &fe.result));
    let img: Vec<&str> = fe.embedding.iter().map(|&x| fe.result.name(x)).collect();
    println!("embedding: {}", img.join(" "));
    for i in 0..gens.len() {
        println!("{} = {}", gens[i], fe.result.name(fe.generator(i)));
    }
}
