//! Free and simple extensions, and the decomposition of an almost-end-extension
//! into a free extension followed by a simple one.

pub mod bundle;
pub mod decompose;
pub mod free;

use std::fmt;

use thiserror::Error;

use crate::order::{ElementId, FiniteUslTop, SubstructureWitness};
use crate::sentence::generated_substructure;

pub use bundle::{read_bundle, write_bundle};
pub use decompose::{decompose, DecompositionWitness};
pub use free::{free_extend, FreeExtension};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("generator `{0}` is already an element name")]
    NameClash(String),
    #[error("bad generator name `{0}`")]
    BadGenerator(String),
    #[error("the pair is not an almost-end-extension")]
    NotAlmostEndExtension,
    #[error("construction failed its own checks:\n{0}")]
    Invariant(Checks),
}

/// Named pass/fail lines, failures carrying a description.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Checks {
    pub items: Vec<(String, Option<String>)>,
}

impl Checks {
    pub fn push(&mut self, name: impl Into<String>, failure: Option<String>) {
        self.items.push((name.into(), failure));
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|(_, f)| f.is_none())
    }

    pub fn extend(&mut self, prefix: &str, other: Checks) {
        for (n, f) in other.items {
            self.items.push((format!("{prefix}{n}"), f));
        }
    }
}

impl fmt::Display for Checks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, fail) in &self.items {
            match fail {
                None => writeln!(f, "{name}: ok")?,
                Some(m) => writeln!(f, "{name}: FAIL {m}")?,
            }
        }
        Ok(())
    }
}

/// Injectivity, joins, `⊥ ↦ ⊥`, `⊤ ↦ ⊤` and order in both directions.
pub fn verify_embedding(f: &[ElementId], source: &FiniteUslTop, target: &FiniteUslTop) -> Checks {
    let mut c = Checks::default();
    if f.len() != source.size() || f.iter().any(|t| t.0 >= target.size()) {
        c.push("total", Some(format!("{} entries for {} elements", f.len(), source.size())));
        return c;
    }
    let name = |x: ElementId| source.name(x).to_string();
    let pairs = || source.elements().flat_map(|x| source.elements().map(move |y| (x, y)));
    c.push(
        "injective",
        pairs().find(|&(x, y)| x < y && f[x.0] == f[y.0]).map(|(x, y)| format!("{} and {}", name(x), name(y))),
    );
    c.push(
        "joins",
        pairs()
            .find(|&(x, y)| f[source.join(x, y).0] != target.join(f[x.0], f[y.0]))
            .map(|(x, y)| format!("{} + {}", name(x), name(y))),
    );
    c.push("bot", (f[source.bot().0] != target.bot()).then(|| "bot is not sent to bot".to_string()));
    c.push("top", (f[source.top().0] != target.top()).then(|| "top is not sent to top".to_string()));
    c.push(
        "order",
        pairs()
            .find(|&(x, y)| source.leq(x, y) != target.leq(f[x.0], f[y.0]))
            .map(|(x, y)| format!("{} vs {}", name(x), name(y))),
    );
    c
}

/// Some `w` with `U ∪ {w}` generating all of `W`, trying `⊥` first and then
/// the elements of `W` in order.
pub fn is_simple_extension(w: &SubstructureWitness) -> Option<ElementId> {
    let big = w.big();
    let seed: Vec<ElementId> = w.inclusion().to_vec();
    std::iter::once(big.bot())
        .chain(big.elements())
        .find(|&g| {
            let mut s = seed.clone();
            s.push(g);
            generated_substructure(big, &s).small().size() == big.size()
        })
}
