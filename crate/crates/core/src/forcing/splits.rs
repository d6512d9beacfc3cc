//! Splits of a decision procedure modulo an element.
//!
//! `σ, τ` of equal length split modulo `y` when `σ ≡_y τ` entrywise and the
//! decisions on some pair of initial segments `σ↾n, τ↾n` differ. Only `y`
//! enters; the reduction side `x` plays no part in the condition.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use super::{Str, UniformTreeSpec};
use crate::order::{ElementId, FiniteUslTop};
use crate::table::MapId;
use crate::textfmt::{FormatError, Lines};

/// A finite decision table on initial segments with a default.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecisionTable {
    pub default: bool,
    pub entries: BTreeMap<Str, bool>,
}

impl DecisionTable {
    pub fn get(&self, prefix: &[MapId]) -> bool {
        self.entries.get(prefix).copied().unwrap_or(self.default)
    }

    pub fn write(&self) -> String {
        let mut out = format!("decision default {}\n", u8::from(self.default));
        for (k, v) in &self.entries {
            let ks: Vec<String> = k.iter().map(|a| a.0.to_string()).collect();
            writeln!(out, "q {}: {}", ks.join(" "), u8::from(*v)).unwrap();
        }
        out.push_str("end\n");
        out
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut lines = Lines::new(text);
        let (n, h) = lines.expect("`decision default <0|1>`")?;
        let bit = |n: usize, s: &str| match s.trim() {
            "0" => Ok(false),
            "1" => Ok(true),
            other => Err(FormatError::new(n, format!("expected 0 or 1, found `{other}`"))),
        };
        let default = match h.strip_prefix("decision default ") {
            Some(b) => bit(n, b)?,
            None => return Err(FormatError::new(n, format!("expected `decision default <0|1>`, found `{h}`"))),
        };
        let mut entries = BTreeMap::new();
        loop {
            let (n, l) = lines.expect("`end`")?;
            if l == "end" {
                break;
            }
            let (k, v) = l
                .strip_prefix('q')
                .and_then(|r| r.split_once(':'))
                .ok_or_else(|| FormatError::new(n, format!("expected `q <maps>: <0|1>`, found `{l}`")))?;
            let key = k
                .split_whitespace()
                .map(|s| s.parse().map(MapId).map_err(|_| FormatError::new(n, format!("bad map index `{s}`"))))
                .collect::<Result<Str, _>>()?;
            entries.insert(key, bit(n, v)?);
        }
        if let Some((n, l)) = lines.peek() {
            return Err(FormatError::new(n, format!("trailing input `{l}`")));
        }
        Ok(DecisionTable { default, entries })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub sigma: Str,
    pub tau: Str,
    /// least `n` with differing decisions
    pub n: usize,
}

fn profile(q: &dyn Fn(&[MapId]) -> bool, s: &[MapId]) -> Vec<bool> {
    (0..=s.len()).map(|n| q(&s[..n])).collect()
}

/// Strings of length `min(depth, t.depth())` grouped by their values at `y`.
fn classes(t: &UniformTreeSpec, y: ElementId, depth: usize) -> Vec<Vec<Str>> {
    let mut groups: HashMap<Vec<u64>, Vec<Str>> = HashMap::new();
    let mut order = Vec::new();
    for s in t.strings(depth.min(t.depth())) {
        let key: Vec<u64> = s.iter().map(|&a| t.rep.table.value(a, y)).collect();
        let g = groups.entry(key.clone()).or_default();
        if g.is_empty() {
            order.push(key);
        }
        g.push(s);
    }
    order.into_iter().map(|k| groups.remove(&k).unwrap()).collect()
}

/// Splits among strings of the longest length up to `depth`. A split at a
/// shorter length extends to one here, so none are missed; each string
/// disagreeing with the first of its `y`-class is reported against it.
pub fn find_splits(t: &UniformTreeSpec, q: &dyn Fn(&[MapId]) -> bool, y: ElementId, depth: usize) -> Vec<Split> {
    let mut out = Vec::new();
    for class in classes(t, y, depth) {
        let p0 = profile(q, &class[0]);
        for s in &class[1..] {
            let p = profile(q, s);
            if let Some(n) = p0.iter().zip(&p).position(|(a, b)| a != b) {
                out.push(Split { sigma: class[0].clone(), tau: s.clone(), n });
            }
        }
    }
    out
}

pub fn has_split(t: &UniformTreeSpec, q: &dyn Fn(&[MapId]) -> bool, y: ElementId, depth: usize) -> bool {
    classes(t, y, depth).iter().any(|class| {
        let p0 = profile(q, &class[0]);
        class[1..].iter().any(|s| profile(q, s) != p0)
    })
}

/// Elements with no split on `T_ρ`, deciding `σ` by `q(ρ⌢σ)`.
pub fn sp_set(
    t: &UniformTreeSpec,
    q: &dyn Fn(&[MapId]) -> bool,
    rho: &[MapId],
    depth: usize,
) -> Result<Vec<ElementId>, super::ForcingError> {
    let tr = t.restrict(rho)?;
    let shifted = |s: &[MapId]| {
        let mut full = rho.to_vec();
        full.extend_from_slice(s);
        q(&full)
    };
    Ok(t.rep.lattice().elements().filter(|&y| !has_split(&tr, &shifted, y, depth)).collect())
}

/// First pair of the set whose meet falls outside it.
pub fn sp_meet_closed(l: &FiniteUslTop, set: &[ElementId]) -> Option<(ElementId, ElementId)> {
    set.iter()
        .flat_map(|&a| set.iter().map(move |&b| (a, b)))
        .find(|&(a, b)| !set.contains(&l.meet(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::table::build_rep_prefix;

    #[test]
    fn sp_set_is_the_cone_above_x() {
        let r = build_rep_prefix(&FiniteUslTop::diamond(), 1, true, &Caps::default()).unwrap();
        let l = r.lattice().clone();
        let t = UniformTreeSpec::identity(&r, 2);
        for x in l.elements() {
            let zero_at = |s: &[MapId]| s.first().is_some_and(|&a| r.table.value(a, x) == 0);
            let sp = sp_set(&t, &zero_at, &[], 2).unwrap();
            let cone: Vec<ElementId> = l.elements().filter(|&y| l.leq(x, y)).collect();
            assert_eq!(sp, cone, "x = {}", l.name(x));
            assert_eq!(sp_meet_closed(&l, &sp), None);
            for y in l.elements().filter(|&y| !l.leq(x, y)) {
                let s = &find_splits(&t, &zero_at, y, 1)[0];
                assert_eq!(s.n, 1);
                assert!(r.table.congruent(y, s.sigma[0], s.tau[0]));
            }
        }
        // a constant decision never splits
        assert_eq!(sp_set(&t, &|_: &[MapId]| true, &[MapId(3)], 1).unwrap().len(), l.size());
    }

    #[test]
    fn antitone_in_depth() {
        let r = build_rep_prefix(&FiniteUslTop::diamond(), 1, true, &Caps::default()).unwrap();
        let t = UniformTreeSpec::identity(&r, 2);
        let b = r.lattice().id_of("b").unwrap();
        // decides on the second entry only
        let q = |s: &[MapId]| s.get(1).is_some_and(|&a| r.table.value(a, b) % 2 == 1);
        let sp1 = sp_set(&t, &q, &[], 1).unwrap();
        let sp2 = sp_set(&t, &q, &[], 2).unwrap();
        assert_eq!(sp1.len(), 4);
        assert!(sp2.iter().all(|y| sp1.contains(y)));
        assert!(sp2.len() < sp1.len());
    }

    #[test]
    fn decision_text_round_trip() {
        let mut d = DecisionTable { default: true, entries: BTreeMap::new() };
        d.entries.insert(vec![MapId(2), MapId(0)], false);
        d.entries.insert(vec![], false);
        assert_eq!(DecisionTable::parse(&d.write()).unwrap(), d);
        assert!(DecisionTable::parse("decision default 2\nend\n").is_err());
    }
}
