//! Decides a Σ₂ or Π₂ sentence over all finite USLs with top and prints the
//! certificate, then re-checks it.
//!
//! ```bash
//! cargo run -p uslkit --example decide_sentence -- 'forall x . exists y . !(y <= x) & !(x <= y)'
//! ```

use uslkit::caps::Caps;
use uslkit::sentence::{decide, parse, DecideError};

fn main() {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "exists x . !(x = 0) & forall y . (y <= x -> (y = 0 \\/ y = x))".into());
    let f = parse(&text).expect("sentence should parse");
    match decide(&f, &Caps::default()) {
        Ok(cert) => {
            println!("verdict: {:?}", cert.verdict);
            print!("{}", cert.to_text());
            cert.check().expect("certificate re-checks");
            println!("certificate re-checked");
        }
        Err(DecideError::CapExceeded { cap, partial }) => {
            println!("unknown: {cap}");
            println!("{} instances explored before the cap", partial.instances.len());
        }
        Err(e) => println!("outside the fragment: {e}"),
    }
}
