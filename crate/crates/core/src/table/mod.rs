//! USL tables, sequential representations and their verifiers.

pub mod build;
pub mod coding;
pub mod interp;
pub mod text;

use std::fmt;

use crate::order::{ElementId, FiniteUslTop};

pub use build::{build_rep_prefix, build_table, BuildError, MCoords};
pub use coding::{coding_pairs, verify_coding_ready, verify_rep_prefix, CodingApparatus, RepPrefix, Stage};
pub use interp::{check_homogeneity_interpolants, check_meet_interpolants, HomSearch};

/// Index of a map within a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MapId(pub usize);

impl fmt::Display for MapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha{}", self.0)
    }
}

/// A finite set of maps `L → ℕ`, each stored as its values indexed by element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UslTable {
    lattice: FiniteUslTop,
    maps: Vec<Vec<u64>>,
}

impl UslTable {
    /// Panics if a map has the wrong length.
    pub fn new(lattice: FiniteUslTop, maps: Vec<Vec<u64>>) -> Self {
        for m in &maps {
            assert_eq!(m.len(), lattice.size(), "map length must match the lattice");
        }
        UslTable { lattice, maps }
    }

    pub fn lattice(&self) -> &FiniteUslTop {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = MapId> {
        (0..self.maps.len()).map(MapId)
    }

    pub fn map(&self, a: MapId) -> &[u64] {
        &self.maps[a.0]
    }

    pub fn maps(&self) -> &[Vec<u64>] {
        &self.maps
    }

    pub fn value(&self, a: MapId, x: ElementId) -> u64 {
        self.maps[a.0][x.0]
    }

    /// `α ≡ₓ β`.
    pub fn congruent(&self, x: ElementId, a: MapId, b: MapId) -> bool {
        self.value(a, x) == self.value(b, x)
    }

    pub fn position(&self, values: &[u64]) -> Option<MapId> {
        self.maps.iter().position(|m| m == values).map(MapId)
    }

    /// The first `n` maps as a table of their own.
    pub fn prefix(&self, n: usize) -> UslTable {
        UslTable {
            lattice: self.lattice.clone(),
            maps: self.maps[..n].to_vec(),
        }
    }
}

/// A failed check with its first counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    MissingZero,
    DuplicateMap(MapId, MapId),
    BotNonzero(MapId),
    Order { x: ElementId, y: ElementId, alpha: MapId, beta: MapId },
    Differentiation { x: ElementId, y: ElementId },
    Join { x: ElementId, y: ElementId, alpha: MapId, beta: MapId },
    NotNested { stage: String },
    MeetInterpolant { x: ElementId, y: ElementId, alpha: MapId, beta: MapId },
    Homogeneity { alpha0: MapId, alpha1: MapId, beta0: MapId, beta1: MapId },
    CodingDomain(String),
    CodingPair { x: ElementId, y: ElementId },
    Escape { alpha: MapId, x: ElementId },
    DifferentiationOutsideC { x: ElementId, y: ElementId },
    Extension { x: ElementId, stage: usize, alpha0: MapId, alpha1: MapId },
}

/// One line per check: its name and, on failure, the first counterexample.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<(String, Option<Violation>)>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, v)| v.is_none())
    }

    pub fn push(&mut self, name: impl Into<String>, failure: Option<Violation>) {
        self.checks.push((name.into(), failure));
    }

    pub fn extend(&mut self, prefix: &str, other: Report) {
        for (n, v) in other.checks {
            self.checks.push((format!("{prefix}{n}"), v));
        }
    }

    pub fn first_failure(&self) -> Option<&Violation> {
        self.checks.iter().find_map(|(_, v)| v.as_ref())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, v) in &self.checks {
            match v {
                None => writeln!(f, "{name}: ok")?,
                Some(v) => writeln!(f, "{name}: FAIL {v:?}")?,
            }
        }
        Ok(())
    }
}

/// Checks the USL table axioms; each axiom reports its first counterexample.
pub fn verify_table(t: &UslTable) -> Report {
    let l = t.lattice();
    let mut r = Report::default();
    r.push(
        "zero map",
        (!t.maps.iter().any(|m| m.iter().all(|&v| v == 0))).then_some(Violation::MissingZero),
    );
    let dup = (|| {
        for a in t.ids() {
            for b in t.ids().filter(|b| *b > a) {
                if t.map(a) == t.map(b) {
                    return Some(Violation::DuplicateMap(a, b));
                }
            }
        }
        None
    })();
    r.push("distinct maps", dup);
    r.push(
        "bot is trivial",
        t.ids().find(|&a| t.value(a, l.bot()) != 0).map(Violation::BotNonzero),
    );
    let order = (|| {
        for x in l.elements() {
            for y in l.elements().filter(|&y| l.leq(x, y)) {
                for a in t.ids() {
                    for b in t.ids() {
                        if t.congruent(y, a, b) && !t.congruent(x, a, b) {
                            return Some(Violation::Order { x, y, alpha: a, beta: b });
                        }
                    }
                }
            }
        }
        None
    })();
    r.push("order", order);
    let diff = (|| {
        for x in l.elements() {
            for y in l.elements().filter(|&y| !l.leq(x, y)) {
                if !differentiated(t, x, y, |_| true) {
                    return Some(Violation::Differentiation { x, y });
                }
            }
        }
        None
    })();
    r.push("differentiation", diff);
    let join = (|| {
        for x in l.elements() {
            for y in l.elements() {
                let z = l.join(x, y);
                for a in t.ids() {
                    for b in t.ids() {
                        if t.congruent(x, a, b) && t.congruent(y, a, b) && !t.congruent(z, a, b) {
                            return Some(Violation::Join { x, y, alpha: a, beta: b });
                        }
                    }
                }
            }
        }
        None
    })();
    r.push("join", join);
    r
}

/// Some `α, β` passing `keep` with `α ≡_y β` and `α ≢ₓ β`.
pub(crate) fn differentiated(
    t: &UslTable,
    x: ElementId,
    y: ElementId,
    keep: impl Fn(MapId) -> bool,
) -> bool {
    let ids: Vec<MapId> = t.ids().filter(|&a| keep(a)).collect();
    ids.iter()
        .any(|&a| ids.iter().any(|&b| t.congruent(y, a, b) && !t.congruent(x, a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_chain_tables() {
        let c = FiniteUslTop::chain(2);
        let good = UslTable::new(c.clone(), vec![vec![0, 0], vec![0, 1]]);
        assert!(verify_table(&good).passed());
        let bad = UslTable::new(c, vec![vec![0, 0]]);
        let r = verify_table(&bad);
        assert_eq!(
            r.first_failure(),
            Some(&Violation::Differentiation { x: ElementId(1), y: ElementId(0) })
        );
    }

    #[test]
    fn order_and_join_failures() {
        let c = FiniteUslTop::chain(3);
        // agree at the middle element but not at bot is impossible; break order at (c1, 1)
        let t = UslTable::new(c, vec![vec![0, 0, 0], vec![0, 1, 0]]);
        let r = verify_table(&t);
        assert!(matches!(
            r.checks.iter().find(|(n, _)| n == "order").unwrap().1,
            Some(Violation::Order { .. })
        ));
        let d = FiniteUslTop::diamond();
        let t = UslTable::new(d, vec![vec![0, 0, 0, 0], vec![0, 0, 0, 1]]);
        let r = verify_table(&t);
        assert!(matches!(
            r.checks.iter().find(|(n, _)| n == "join").unwrap().1,
            Some(Violation::Join { .. })
        ));
    }
}
